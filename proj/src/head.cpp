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


#include "bevlift/head.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "bevlift/error.hpp"

namespace bevlift
{

double gaussian_radius(double length, double width, double min_overlap)
{
  const double h = length, w = width, mo = min_overlap;
  const double b1 = h + w;
  const double c1 = w * h * (1 - mo) / (1 + mo);
  const double r1 = (b1 + std::sqrt(b1 * b1 - 4 * c1)) / 2;
  const double b2 = 2 * (h + w);
  const double c2 = (1 - mo) * w * h;
  const double r2 = (b2 + std::sqrt(b2 * b2 - 16 * c2)) / 2;
  const double a3 = 4 * mo;
  const double b3 = -2 * mo * (h + w);
  const double c3 = (mo - 1) * w * h;
  const double r3 = (b3 + std::sqrt(b3 * b3 - 4 * a3 * c3)) / 2;
  return std::min({r1, r2, r3});
}

int effective_radius(const Box3D & box, const GridSpec & spec, int min_radius)
{
  const double r = gaussian_radius(box.size.x() / spec.cell_x, box.size.y() / spec.cell_y);
  return std::max(min_radius, static_cast<int>(std::floor(r)));
}

bool center_cell(const Eigen::Vector3d & center, const GridSpec & spec, std::size_t & i, std::size_t & j)
{
  const double fi = std::floor((center.x() - spec.x_min) / spec.cell_x);
  const double fj = std::floor((center.y() - spec.y_min) / spec.cell_y);
  if (!(fi >= 0) || !(fj >= 0) || fi >= static_cast<double>(spec.nx()) ||
      fj >= static_cast<double>(spec.ny())) {
    return false;
  }
  i = static_cast<std::size_t>(fi);
  j = static_cast<std::size_t>(fj);
  return true;
}

Tensor heatmap_targets(
  const std::vector<Box3D> & boxes, const GridSpec & spec, std::size_t num_classes, int min_radius)
{
  spec.validate();
  const std::size_t nx = spec.nx(), ny = spec.ny();
  Tensor heat({num_classes, nx, ny});
  for (const auto & box : boxes) {
    if (box.class_id < 0 || static_cast<std::size_t>(box.class_id) >= num_classes) {
      throw InvalidArgument("heatmap_targets: class id " + std::to_string(box.class_id) + " out of range");
    }
    std::size_t ci = 0, cj = 0;
    if (!center_cell(box.center, spec, ci, cj)) continue;
    const int r = effective_radius(box, spec, min_radius);
    const double sigma = (2.0 * r + 1.0) / 6.0;
    const long i0 = static_cast<long>(ci), j0 = static_cast<long>(cj);
    for (long di = -r; di <= r; ++di) {
      const long i = i0 + di;
      if (i < 0 || i >= static_cast<long>(nx)) continue;
      for (long dj = -r; dj <= r; ++dj) {
        const long j = j0 + dj;
        if (j < 0 || j >= static_cast<long>(ny)) continue;
        const auto g = static_cast<float>(std::exp(-static_cast<double>(di * di + dj * dj) / (2 * sigma * sigma)));
        float & cell = heat.at(static_cast<std::size_t>(box.class_id), static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        cell = std::max(cell, g);
      }
    }
  }
  return heat;
}

Tensor regression_targets(const std::vector<Box3D> & boxes, const GridSpec & spec)
{
  spec.validate();
  Tensor reg({spec.nx(), spec.ny(), kRegressionChannels});
  for (const auto & box : boxes) {
    if (!(box.size.minCoeff() > 0)) throw InvalidArgument("regression_targets: box sizes must be > 0");
    std::size_t i = 0, j = 0;
    if (!center_cell(box.center, spec, i, j)) continue;
    const double values[kRegressionChannels] = {
      (box.center.x() - spec.x_min) / spec.cell_x - static_cast<double>(i),
      (box.center.y() - spec.y_min) / spec.cell_y - static_cast<double>(j),
      box.center.z(),
      std::log(box.size.x()),
      std::log(box.size.y()),
      std::log(box.size.z()),
      std::sin(box.yaw),
      std::cos(box.yaw)};
    for (std::size_t c = 0; c < kRegressionChannels; ++c) reg.at(i, j, c) = static_cast<float>(values[c]);
  }
  return reg;
}

HeadTargets encode_targets(
  const std::vector<Box3D> & boxes, const GridSpec & spec, std::size_t num_classes, int min_radius)
{
  return {heatmap_targets(boxes, spec, num_classes, min_radius), regression_targets(boxes, spec)};
}

DetectionSet decode_detections(
  const Tensor & heatmap, const Tensor & regression, const GridSpec & spec, long k)
{
  if (k <= 0) throw InvalidArgument("decode_detections: k must be positive, got " + std::to_string(k));
  const std::size_t nx = spec.nx(), ny = spec.ny();
  if (heatmap.rank() != 3 || heatmap.dim(1) != nx || heatmap.dim(2) != ny) {
    throw InvalidArgument("decode_detections: heatmap must be K x X x Y, got " + shape_to_string(heatmap.shape()));
  }
  if (regression.shape() != Shape{nx, ny, kRegressionChannels}) {
    throw InvalidArgument("decode_detections: regression must be X x Y x 8, got " + shape_to_string(regression.shape()));
  }
  const std::size_t cells = nx * ny;
  std::vector<std::size_t> candidates;
  for (std::size_t n = 0; n < heatmap.size(); ++n) {
    if (heatmap[n] > 0.0f) candidates.push_back(n);
  }
  // Flat index is (class, x, y); the tie order is (class, y, x).
  const auto key = [&](std::size_t n) {
    const std::size_t cls = n / cells, cell = n % cells;
    return std::make_tuple(-heatmap[n], cls, cell % ny, cell / ny);
  };
  const auto by_rank = [&](std::size_t a, std::size_t b) { return key(a) < key(b); };
  const std::size_t keep = std::min(candidates.size(), static_cast<std::size_t>(k));
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<long>(keep), candidates.end(), by_rank);
  candidates.resize(keep);

  DetectionSet dets;
  dets.reserve(keep);
  for (const std::size_t n : candidates) {
    const std::size_t cls = n / cells, cell = n % cells;
    const std::size_t i = cell / ny, j = cell % ny;
    const float * r = regression.data() + cell * kRegressionChannels;
    Box3D box;
    box.center = {
      spec.x_min + (static_cast<double>(i) + r[0]) * spec.cell_x,
      spec.y_min + (static_cast<double>(j) + r[1]) * spec.cell_y, r[2]};
    box.size = {std::exp(static_cast<double>(r[3])), std::exp(static_cast<double>(r[4])), std::exp(static_cast<double>(r[5]))};
    box.yaw = wrap_angle(std::atan2(static_cast<double>(r[6]), static_cast<double>(r[7])));
    box.class_id = static_cast<int>(cls);
    box.score = heatmap[n];
    dets.push_back(box);
  }
  return dets;
}

DetectionSet distance_nms(const DetectionSet & dets, const std::map<int, double> & thresholds)
{
  for (const auto & d : dets) {
    const auto it = thresholds.find(d.class_id);
    if (it == thresholds.end()) {
      throw InvalidArgument("distance_nms: no threshold for class " + std::to_string(d.class_id));
    }
    if (!(it->second > 0)) {
      throw InvalidArgument("distance_nms: threshold for class " + std::to_string(d.class_id) + " must be > 0");
    }
  }
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  const auto key = [&](std::size_t n) {
    const auto & d = dets[n];
    return std::make_tuple(-d.score, d.class_id, d.center.y(), d.center.x());
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

  DetectionSet kept;
  for (const std::size_t n : order) {
    const auto & d = dets[n];
    const double thr = thresholds.at(d.class_id);
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Box3D & k) {
      return k.class_id == d.class_id &&
             std::hypot(k.center.x() - d.center.x(), k.center.y() - d.center.y()) < thr;
    });
    if (!suppressed) kept.push_back(d);
  }
  return kept;
}

}  // namespace bevlift
