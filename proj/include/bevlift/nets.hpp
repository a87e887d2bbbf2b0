// Copyright 2026 The bevlift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BEVLIFT__NETS_HPP_
#define BEVLIFT__NETS_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "bevlift/tensor.hpp"
#include "bevlift/tensor_io.hpp"

namespace bevlift
{

/// Per-cell linear map: out = weight * in + bias.
struct Conv1x1Weights
{
  Tensor weight;  ///< C_out x C_in
  Tensor bias;    ///< C_out

  std::size_t in_channels() const { return weight.dim(1); }
  std::size_t out_channels() const { return weight.dim(0); }

  void validate() const;

  static Conv1x1Weights zeros(std::size_t out_channels, std::size_t in_channels);
  /// Reads "<prefix>.weight" and "<prefix>.bias".
  static Conv1x1Weights from_archive(const TensorArchive & archive, const std::string & prefix);
  void store(TensorArchive & archive, const std::string & prefix) const;
};

/// D uniform depth bins over [d_min, d_max).
struct DepthBinSpec
{
  double d_min = 1.0;
  double d_max = 51.2;
  std::size_t count = 64;

  void validate() const;
  double width() const { return (d_max - d_min) / static_cast<double>(count); }
  double center(std::size_t bin) const { return d_min + (static_cast<double>(bin) + 0.5) * width(); }
  /// Bin containing depth d, or -1 outside [d_min, d_max).
  long bin_of(double d) const;
  /// Continuous bin coordinate with bin centers at integers: (d - d_min) / width - 0.5.
  double coordinate(double d) const { return (d - d_min) / width() - 0.5; }
};

/// Applies w to the last axis of any tensor whose trailing dim is C_in.
Tensor conv1x1(const Tensor & input, const Conv1x1Weights & w);

/// X x Y x C_P radar BEV -> X x Y x Z occupancy, sigmoid kept strictly inside (0, 1).
Tensor occupancy_net(const Tensor & radar_bev, const Conv1x1Weights & w);

/// H x W x C_I image features of one level -> H x W x D depth distribution
/// (softmax over the last axis with max subtraction).
Tensor depth_net(const Tensor & pv_features, const Conv1x1Weights & w);

/// Applies depth_net independently per level.
std::vector<Tensor> depth_net(
  const std::vector<Tensor> & pv_levels, const std::vector<Conv1x1Weights> & w);

/// Channel concatenation [radar, image] followed by a per-cell linear map.
Tensor fuse_bev(const Tensor & radar_bev, const Tensor & image_bev, const Conv1x1Weights & w);

/// Logistic function clamped to the open interval (0, 1) in float32.
float strict_sigmoid(double x);

}  // namespace bevlift

#endif  // BEVLIFT__NETS_HPP_
