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


#ifndef BEVLIFT__HEAD_HPP_
#define BEVLIFT__HEAD_HPP_

#include <cstddef>
#include <map>
#include <vector>

#include "bevlift/box.hpp"
#include "bevlift/geometry.hpp"
#include "bevlift/tensor.hpp"

namespace bevlift
{

/// Regression channels per BEV cell: dx, dy (sub-cell offsets in cells), z,
/// log l, log w, log h, sin yaw, cos yaw.
inline constexpr std::size_t kRegressionChannels = 8;

/// CenterNet radius (in cells) for a box footprint of `length` x `width`
/// cells that keeps IoU >= min_overlap under a corner shift.
double gaussian_radius(double length, double width, double min_overlap = 0.7);

/// Integer splat radius: max(min_radius, floor(gaussian_radius)).
int effective_radius(const Box3D & box, const GridSpec & spec, int min_radius = 2);

/// BEV cell holding the box center, or false when the center is off-grid.
bool center_cell(const Eigen::Vector3d & center, const GridSpec & spec, std::size_t & i, std::size_t & j);

/// K x X x Y heatmap. Each box splats exp(-(di^2 + dj^2) / (2 sigma^2)),
/// sigma = (2r + 1) / 6, over the (2r + 1) x (2r + 1) window around its
/// center cell; overlaps take the element-wise max. Boxes whose center is off-grid are skipped.
Tensor heatmap_targets(
  const std::vector<Box3D> & boxes, const GridSpec & spec, std::size_t num_classes,
  int min_radius = 2);

/// X x Y x kRegressionChannels targets written at each box's center cell.
Tensor regression_targets(const std::vector<Box3D> & boxes, const GridSpec & spec);

struct HeadTargets
{
  Tensor heatmap;
  Tensor regression;
};

HeadTargets encode_targets(
  const std::vector<Box3D> & boxes, const GridSpec & spec, std::size_t num_classes,
  int min_radius = 2);

/// Top-k cells (score > 0) across classes, ordered by descending score with
/// ties broken by ascending (class, y index, x index). Throws InvalidArgument
/// for k <= 0.
DetectionSet decode_detections(
  const Tensor & heatmap, const Tensor & regression, const GridSpec & spec, long k = 1000);

/// Greedy per-class suppression by BEV center distance. Throws
/// InvalidArgument when a present class has no threshold or a threshold <= 0.
DetectionSet distance_nms(const DetectionSet & dets, const std::map<int, double> & thresholds);

}  // namespace bevlift

#endif  // BEVLIFT__HEAD_HPP_
