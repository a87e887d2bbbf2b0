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

#ifndef BEVLIFT__POINTCLOUD_HPP_
#define BEVLIFT__POINTCLOUD_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "bevlift/box.hpp"
#include "bevlift/geometry.hpp"
#include "bevlift/tensor.hpp"

namespace bevlift
{

/// Channel names of a raw N x C point file, e.g. x,y,z,rcs,v_r,v_r_comp,time.
/// "x", "y" and "z" are required; "t" or "time" marks the timestamp channel.
/// Every other channel is a point feature.
class PointLayout
{
public:
  PointLayout() = default;
  explicit PointLayout(std::vector<std::string> channels);

  const std::vector<std::string> & channels() const { return channels_; }
  std::size_t channel_count() const { return channels_.size(); }
  std::size_t x() const { return x_; }
  std::size_t y() const { return y_; }
  std::size_t z() const { return z_; }
  /// Index of the timestamp channel, or channel_count() when absent.
  std::size_t time() const { return t_; }
  const std::vector<std::size_t> & feature_channels() const { return features_; }
  /// Channels left untouched by normalization: x, y, z and time.
  std::set<std::size_t> spatial_temporal_channels() const;

private:
  std::vector<std::string> channels_;
  std::size_t x_ = 0, y_ = 0, z_ = 0, t_ = 0;
  std::vector<std::size_t> features_;
};

struct RadarPointCloud
{
  Tensor positions{Shape{0, 3}};  ///< N x 3, meters.
  Tensor features{Shape{0, 0}};   ///< N x F.
  std::vector<float> timestamps;  ///< N.

  std::size_t size() const { return positions.dim(0); }
  std::size_t feature_count() const { return features.dim(1); }

  static RadarPointCloud from_matrix(const Tensor & raw, const PointLayout & layout);
  Tensor to_matrix(const PointLayout & layout) const;

  /// Subset in the given index order.
  RadarPointCloud select(const std::vector<std::size_t> & indices) const;
};

struct NormalizationStats
{
  std::vector<double> means;
  std::vector<double> stds;
};

/// out = (in - mean) / std on every column not in `skip_channels`.
Tensor normalize(
  const Tensor & values, const NormalizationStats & stats,
  const std::set<std::size_t> & skip_channels = {});
/// Inverse of normalize.
Tensor denormalize(
  const Tensor & values, const NormalizationStats & stats,
  const std::set<std::size_t> & skip_channels = {});

/// Keeps points strictly inside the range of `spec`.
RadarPointCloud crop_to_range(const RadarPointCloud & cloud, const GridSpec & spec);

struct FovFiltered
{
  RadarPointCloud cloud;
  std::vector<Box3D> boxes;
};

/// Drops points and boxes (by center) that do not project into the image.
FovFiltered fov_filter(
  const RadarPointCloud & cloud, const std::vector<Box3D> & boxes, const CalibrationSet & calib);

/// Non-empty BEV columns, sorted lexicographically by (ix, iy).
struct PillarIndex
{
  std::vector<std::array<int, 2>> coords;
  std::vector<std::vector<std::size_t>> members;

  std::size_t size() const { return coords.size(); }
};

/// Buckets points into x/y columns of `spec`. Points outside the x/y range are
/// skipped.
PillarIndex pillarize(const RadarPointCloud & cloud, const GridSpec & spec);

/// nx x ny x (F + 2) pillar features: mean feature values, mean z, and
/// log(1 + point count). Empty pillars are zero.
Tensor pillar_features(
  const RadarPointCloud & cloud, const PillarIndex & pillars, const GridSpec & spec);

struct FlippedFrame
{
  RadarPointCloud cloud;
  std::vector<Box3D> boxes;
  Tensor image;
};

/// Mirror about the radar x axis: y -> -y, yaw -> -yaw, image columns
/// reversed (image laid out H x W x C).
FlippedFrame horizontal_flip(
  const RadarPointCloud & cloud, const std::vector<Box3D> & boxes, const Tensor & image);

/// Mirrors an X x Y x C BEV tensor along Y, matching horizontal_flip.
Tensor flip_bev(const Tensor & bev);

/// Loads a raw little-endian float32 N x C file (".bin") or a CSV with a
/// header row naming the layout channels (".csv").
Tensor load_point_file(const std::filesystem::path & path, const PointLayout & layout);
void save_point_file(const std::filesystem::path & path, const Tensor & raw);

}  // namespace bevlift

#endif  // BEVLIFT__POINTCLOUD_HPP_
