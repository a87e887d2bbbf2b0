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

#ifndef BEVLIFT__LIFTING_HPP_
#define BEVLIFT__LIFTING_HPP_

#include <array>
#include <cstddef>
#include <vector>

#include "bevlift/geometry.hpp"
#include "bevlift/nets.hpp"
#include "bevlift/pointcloud.hpp"
#include "bevlift/tensor.hpp"

namespace bevlift
{

// Image-plane conventions used throughout this module:
//  - u is the column and v the row; the node of pixel (row i, col j) sits at
//    (u, v) = (j, i).
//  - A level with stride s samples full-resolution pixel (u, v) at (u/s, v/s).
//  - Feature maps are H x W x C, depth maps H x W x D.

/// One multi-scale image feature map.
struct FeatureLevel
{
  Tensor map;  ///< H_i x W_i x C
  double stride = 1.0;
};

struct PixelTap
{
  long row = 0;
  long col = 0;
  double weight = 0.0;
};

/// Result of a bilinear lookup. Gradients are filled when requested.
struct BilinearSample
{
  std::vector<double> value;  ///< C
  std::vector<double> d_du;   ///< C, d value / d u
  std::vector<double> d_dv;   ///< C, d value / d v
  /// In-bounds corner taps; d value[c] / d featmap(row, col, c) = weight.
  std::vector<PixelTap> taps;
};

/// Bilinear interpolation of an H x W x C map at (u, v) with zero padding:
/// corners outside [0, W-1] x [0, H-1] contribute zero.
BilinearSample bilinear_sample(const Tensor & featmap, double u, double v, bool with_grad = false);

struct FrustumTap
{
  long row = 0;
  long col = 0;
  long bin = 0;
  double weight = 0.0;
};

struct TrilinearSample
{
  double value = 0.0;
  double d_du = 0.0;
  double d_dv = 0.0;
  double d_db = 0.0;  ///< w.r.t. the continuous bin coordinate
  std::vector<FrustumTap> taps;
};

/// Trilinear interpolation of an H x W x D volume at (u, v, b) with zero
/// padding outside the node lattice.
TrilinearSample trilinear_sample(const Tensor & volume, double u, double v, double b, bool with_grad = false);

/// Per-voxel projections of an X x Y x Z x 3 center tensor (flat voxel order).
std::vector<ImageProjection> project_voxels(const Tensor & centers, const CalibrationSet & calib);

/// Lifts each level onto the voxels: N_lvl x X x Y x Z x C.
///
/// In-view voxels sample level l at (u, v) / stride_l, clamped onto the level's
/// node lattice so that every in-view voxel receives a feature; voxels that do
/// not project into the image get zeros.
Tensor sample_lift(
  const std::vector<FeatureLevel> & levels, const Tensor & centers, const CalibrationSet & calib);
Tensor sample_lift(
  const std::vector<FeatureLevel> & levels, const std::vector<ImageProjection> & projections,
  const Shape & grid_shape);

/// Depth probability of each voxel: N_lvl x X x Y x Z.
///
/// Level l is looked up at (u / s_l, v / s_l, bins.coordinate(d)) with the same
/// image-plane clamping as sample_lift. Depths whose bin coordinate falls
/// outside [-0.5, D - 0.5] (i.e. outside [d_min, d_max]) get zero; inside,
/// the coordinate is clamped onto [0, D - 1].
Tensor trilinear_sample_depth(
  const std::vector<FeatureLevel> & depth_maps, const Tensor & centers,
  const CalibrationSet & calib, const DepthBinSpec & bins);
Tensor trilinear_sample_depth(
  const std::vector<FeatureLevel> & depth_maps, const std::vector<ImageProjection> & projections,
  const Shape & grid_shape, const DepthBinSpec & bins);

/// F[l,x,y,z,c] * Ds[l,x,y,z].
Tensor depth_weight(const Tensor & features, const Tensor & sampled_depth);

/// F[l,x,y,z,c] * O[x,y,z].
Tensor occupancy_weight(const Tensor & features, const Tensor & occupancy);

/// Concatenates the two voxel tensors on channels, sums levels, flattens Z
/// into channels (index z * 2C + c, the first C from `depth_assisted`) and
/// applies `w` per BEV cell. Result: X x Y x w.out_channels().
Tensor height_compress(
  const Tensor & depth_assisted, const Tensor & occupancy_assisted, const Conv1x1Weights & w);

struct SplatResult
{
  Tensor volume;    ///< X x Y x Z x C, summed over levels
  Tensor bev_mask;  ///< X x Y, 1 where at least one frustum point landed
};

/// Depth-weighted splatting: every level pixel emits one point per depth bin
/// at the bin-center depth carrying feature * probability; points are
/// back-projected into the radar frame and summed per voxel.
///
/// Accumulation sorts contributions by voxel, then sums each voxel's points
/// in (level, pixel, bin) order, so the output is independent of threading.
SplatResult splat_lift(
  const std::vector<FeatureLevel> & featmaps, const std::vector<FeatureLevel> & depth_maps,
  const CalibrationSet & calib, const GridSpec & spec, const DepthBinSpec & bins);

/// Shape and stride of the camera frustum lattice.
struct FrustumGridSpec
{
  std::size_t height = 0;
  std::size_t width = 0;
  double stride = 1.0;
};

/// Binary radar occupancy in the camera frustum (H' x W' x D): each point
/// marks the frustum cell nearest to its projection.
Tensor frustum_occupancy(
  const RadarPointCloud & cloud, const CalibrationSet & calib, const FrustumGridSpec & frustum,
  const DepthBinSpec & bins);

/// Frustum occupancy resampled at the voxel centers: X x Y x Z in [0, 1].
Tensor crn_frustum_occupancy(
  const RadarPointCloud & cloud, const CalibrationSet & calib, const FrustumGridSpec & frustum,
  const Tensor & centers, const DepthBinSpec & bins);

/// Sparse depth targets (H x W, 0 = unlabeled): each point projects to its
/// nearest pixel; several points on one pixel are averaged.
Tensor radar_depth_map(const RadarPointCloud & cloud, const CalibrationSet & calib);

/// X x Y mask of BEV columns that contain at least one in-view voxel center.
Tensor in_view_bev_mask(const std::vector<ImageProjection> & projections, const Shape & grid_shape);

/// Fraction of in-view BEV cells whose center range sqrt(x^2 + y^2) lies in
/// [r_min, r_max) and whose `covered` entry is zero. Returns 0 when the band
/// holds no in-view cell.
double empty_fraction_in_band(
  const Tensor & covered, const Tensor & in_view, const GridSpec & spec, double r_min, double r_max);

}  // namespace bevlift

#endif  // BEVLIFT__LIFTING_HPP_
