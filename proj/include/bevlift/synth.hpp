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


#ifndef BEVLIFT__SYNTH_HPP_
#define BEVLIFT__SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bevlift/box.hpp"
#include "bevlift/geometry.hpp"
#include "bevlift/lifting.hpp"
#include "bevlift/nets.hpp"
#include "bevlift/pointcloud.hpp"
#include "bevlift/tensor.hpp"

namespace bevlift
{

struct ClassPrior
{
  std::string name;
  Eigen::Vector3d size;  ///< mean (l, w, h)
};

/// car, pedestrian, cyclist (and truck when `with_truck`).
std::vector<ClassPrior> default_class_priors(bool with_truck = false);

struct SceneSpec
{
  std::uint64_t seed = 0;
  std::vector<std::size_t> counts;  ///< objects per class, indexed like `priors`
  std::vector<ClassPrior> priors = default_class_priors();
  double noise_sigma = 0.05;
  double clutter_rate = 0.01;  ///< clutter points per square meter of BEV range
  std::size_t points_per_object = 24;
  double ground_z = -1.0;
  /// Reject placements whose center does not project into the image.
  bool require_in_view = true;
  std::size_t max_attempts = 500;
  CalibrationSet calib;
  GridSpec spec;

  void validate() const;
};

/// Radar channels written by the generator.
const std::vector<std::string> & synth_radar_channels();  // x,y,z,rcs,v_r,v_r_comp,time

struct Scene
{
  std::vector<Box3D> boxes;
  RadarPointCloud cloud;         ///< features rcs, v_r, v_r_comp
  std::vector<bool> is_clutter;  ///< per point
  Tensor depth_map;              ///< H x W image depth, 0 = sky
  Tensor object_map;             ///< H x W index + 1 of the visible box, 0 = sky

  /// N x 7 matrix in synth_radar_channels() order.
  Tensor radar_matrix() const;
};

/// Places boxes uniformly in the range without overlap (circle test on the
/// BEV half-diagonals), samples radar points on camera-facing faces with
/// Gaussian noise truncated at 4 sigma, adds uniform clutter, and renders the
/// depth map. Each object draws from its own stream (seed, index). Throws
/// InvalidArgument when an object cannot be placed within max_attempts.
Scene generate_scene(const SceneSpec & spec);

/// Nearest box surface along each pixel ray: H x W depth and object index maps.
void render_depth(
  const std::vector<Box3D> & boxes, const CalibrationSet & calib, Tensor & depth, Tensor & object);

/// H x W x D one-hot at bins.bin_of(depth); zero rows where the depth is 0 or
/// outside the bins.
Tensor ideal_depth_distribution(const Tensor & depth_map, const DepthBinSpec & bins);

/// Rows of a full-resolution H x W x C map at pixel nodes (i * s, j * s):
/// ceil(H / s) x ceil(W / s) x C per stride.
std::vector<FeatureLevel> downsample_levels(const Tensor & full, const std::vector<double> & strides);

/// 1 where the voxel center lies inside some box.
Tensor ideal_occupancy(const std::vector<Box3D> & boxes, const GridSpec & spec);

/// Image feature channels produced by synthetic_image_features.
inline constexpr std::size_t kSynthImageChannels = 8;

/// Per-level H_l x W_l x 8 features: constant 1, depth / 100, one-hot class of
/// the visible box (4 slots) and two noise channels from stream (seed, level).
std::vector<Tensor> synthetic_image_features(
  const Scene & scene, const std::vector<double> & strides, std::uint64_t seed);

/// Camera used by synthetic presets: x_cam = -y, y_cam = -z, z_cam = x with
/// the camera 0.3 m above the radar. "vod" is 968 x 608 with f = 747.5;
/// "tj4d" is 1280 x 960 with f = 900.
CalibrationSet synthetic_calibration(const std::string & preset);

}  // namespace bevlift

#endif  // BEVLIFT__SYNTH_HPP_
