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


#include "bevlift/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "bevlift/error.hpp"
#include "bevlift/parallel.hpp"
#include "bevlift/rng.hpp"

namespace bevlift
{
namespace
{

constexpr std::uint64_t kClutterStream = 1ULL << 32;
constexpr std::uint64_t kImageNoiseStream = 1ULL << 40;
constexpr double kNoiseTruncation = 4.0;

Eigen::Matrix3d yaw_rotation(double yaw)
{
  return Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

/// Entry parameter of o + t r into the box, or +inf.
double ray_box_entry(const Eigen::Vector3d & o, const Eigen::Vector3d & r, const Box3D & box)
{
  const Eigen::Matrix3d rt = yaw_rotation(box.yaw).transpose();
  const Eigen::Vector3d ol = rt * (o - box.center);
  const Eigen::Vector3d rl = rt * r;
  const Eigen::Vector3d half = box.size / 2;
  double t_in = -std::numeric_limits<double>::infinity();
  double t_out = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (std::abs(rl[a]) < 1e-15) {
      if (std::abs(ol[a]) > half[a]) return std::numeric_limits<double>::infinity();
      continue;
    }
    double t1 = (-half[a] - ol[a]) / rl[a];
    double t2 = (half[a] - ol[a]) / rl[a];
    if (t1 > t2) std::swap(t1, t2);
    t_in = std::max(t_in, t1);
    t_out = std::min(t_out, t2);
  }
  if (t_in > t_out || !(t_in > kMinDepth)) return std::numeric_limits<double>::infinity();
  return t_in;
}

struct Face
{
  int axis;
  double sign;
  double area;
};

}  // namespace

std::vector<ClassPrior> default_class_priors(bool with_truck)
{
  std::vector<ClassPrior> priors = {
    {"Car", {4.0, 1.8, 1.6}},
    {"Pedestrian", {0.8, 0.6, 1.7}},
    {"Cyclist", {1.8, 0.6, 1.7}},
  };
  if (with_truck) priors.push_back({"Truck", {8.0, 2.5, 3.0}});
  return priors;
}

void SceneSpec::validate() const
{
  if (counts.size() > priors.size()) throw InvalidArgument("scene: more class counts than class priors");
  if (!(noise_sigma >= 0) || !(clutter_rate >= 0)) {
    throw InvalidArgument("scene: noise_sigma and clutter_rate must be >= 0");
  }
  calib.validate();
  spec.validate();
}

const std::vector<std::string> & synth_radar_channels()
{
  static const std::vector<std::string> kChannels = {"x", "y", "z", "rcs", "v_r", "v_r_comp", "time"};
  return kChannels;
}

Tensor Scene::radar_matrix() const
{
  const std::size_t n = cloud.size();
  Tensor out({n, 7});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < 3; ++c) out.at(i, c) = cloud.positions.at(i, c);
    for (std::size_t c = 0; c < 3; ++c) out.at(i, 3 + c) = cloud.features.at(i, c);
    out.at(i, 6) = cloud.timestamps[i];
  }
  return out;
}

void render_depth(
  const std::vector<Box3D> & boxes, const CalibrationSet & calib, Tensor & depth, Tensor & object)
{
  const Projector projector(calib);
  const auto w = static_cast<std::size_t>(calib.intrinsics.image_width);
  const auto h = static_cast<std::size_t>(calib.intrinsics.image_height);
  depth = Tensor({h, w});
  object = Tensor({h, w});
  if (boxes.empty()) return;
  const Eigen::Vector3d origin = projector.back_project(0, 0, 0);
  parallel_for(0, h, [&](std::size_t row) {
    for (std::size_t col = 0; col < w; ++col) {
      const Eigen::Vector3d dir =
        projector.back_project(static_cast<double>(col), static_cast<double>(row), 1.0) - origin;
      double best = std::numeric_limits<double>::infinity();
      std::size_t hit = 0;
      for (std::size_t b = 0; b < boxes.size(); ++b) {
        const double t = ray_box_entry(origin, dir, boxes[b]);
        if (t < best) {
          best = t;
          hit = b + 1;
        }
      }
      if (hit) {
        depth[row * w + col] = static_cast<float>(best);
        object[row * w + col] = static_cast<float>(hit);
      }
    }
  });
}

Scene generate_scene(const SceneSpec & spec)
{
  spec.validate();
  const GridSpec & g = spec.spec;
  const Projector projector(spec.calib);
  const Eigen::Vector3d camera = projector.back_project(0, 0, 0);

  Scene scene;
  std::vector<float> positions, features, times;
  std::uint64_t index = 0;
  for (std::size_t cls = 0; cls < spec.counts.size(); ++cls) {
    for (std::size_t k = 0; k < spec.counts[cls]; ++k, ++index) {
      Rng rng(spec.seed, index);
      Box3D box;
      box.class_id = static_cast<int>(cls);
      bool placed = false;
      for (std::size_t attempt = 0; attempt < spec.max_attempts && !placed; ++attempt) {
        box.size = spec.priors[cls].size.cwiseProduct(
          Eigen::Vector3d(rng.uniform(0.9, 1.1), rng.uniform(0.9, 1.1), rng.uniform(0.9, 1.1)));
        box.yaw = wrap_angle(rng.uniform(-std::numbers::pi, std::numbers::pi));
        const double r = 0.5 * std::hypot(box.size.x(), box.size.y());
        const double x_lo = g.x_min + r + 1.0, x_hi = g.x_max - r;
        const double y_lo = g.y_min + r, y_hi = g.y_max - r;
        const double cx = rng.uniform(x_lo, x_hi), cy = rng.uniform(y_lo, y_hi);
        if (x_hi <= x_lo || y_hi <= y_lo) break;
        box.center = {cx, cy, spec.ground_z + box.size.z() / 2};
        if (spec.require_in_view && !projector.project(box.center).valid) continue;
        placed = std::none_of(scene.boxes.begin(), scene.boxes.end(), [&](const Box3D & o) {
          const double ro = 0.5 * std::hypot(o.size.x(), o.size.y());
          return std::hypot(o.center.x() - cx, o.center.y() - cy) < r + ro;
        });
      }
      if (!placed) {
        throw InvalidArgument(
          "scene: could not place " + spec.priors[cls].name + " #" + std::to_string(k) + " after " +
          std::to_string(spec.max_attempts) + " attempts");
      }
      scene.boxes.push_back(box);

      // Camera-facing faces, sampled proportionally to area.
      const Eigen::Matrix3d rot = yaw_rotation(box.yaw);
      const Eigen::Vector3d cam_local = rot.transpose() * (camera - box.center);
      const Eigen::Vector3d half = box.size / 2;
      std::vector<Face> faces;
      double total_area = 0;
      for (int a = 0; a < 3; ++a) {
        for (double s : {-1.0, 1.0}) {
          if (s * cam_local[a] <= half[a]) continue;
          const double area = 4 * half[(a + 1) % 3] * half[(a + 2) % 3];
          faces.push_back({a, s, area});
          total_area += area;
        }
      }
      const double speed = rng.uniform(0.0, 8.0);
      const Eigen::Vector3d velocity(speed * std::cos(box.yaw), speed * std::sin(box.yaw), 0.0);
      const double rcs_mean = rng.uniform(0.0, 15.0);
      for (std::size_t p = 0; p < spec.points_per_object && !faces.empty(); ++p) {
        double pick = rng.uniform() * total_area;
        std::size_t f = 0;
        while (f + 1 < faces.size() && pick >= faces[f].area) pick -= faces[f++].area;
        Eigen::Vector3d local;
        const int a = faces[f].axis;
        local[a] = faces[f].sign * half[a];
        local[(a + 1) % 3] = rng.uniform(-1, 1) * half[(a + 1) % 3];
        local[(a + 2) % 3] = rng.uniform(-1, 1) * half[(a + 2) % 3];
        Eigen::Vector3d pt = box.center + rot * local;
        if (spec.noise_sigma > 0) {
          Eigen::Vector3d n;
          do {
            n = {rng.normal(), rng.normal(), rng.normal()};
          } while (n.norm() > kNoiseTruncation);
          pt += spec.noise_sigma * n;
        }
        const double v_r = pt.norm() > 0 ? velocity.dot(pt.normalized()) : 0.0;
        positions.insert(positions.end(), {float(pt.x()), float(pt.y()), float(pt.z())});
        features.insert(
          features.end(), {float(rcs_mean + rng.normal()), float(v_r), float(v_r)});
        times.push_back(0.0f);
        scene.is_clutter.push_back(false);
      }
    }
  }

  Rng clutter(spec.seed, kClutterStream);
  const auto n_clutter = static_cast<std::size_t>(
    std::llround(spec.clutter_rate * (g.x_max - g.x_min) * (g.y_max - g.y_min)));
  for (std::size_t i = 0; i < n_clutter; ++i) {
    const double x = clutter.uniform(g.x_min, g.x_max);
    const double y = clutter.uniform(g.y_min, g.y_max);
    const double z = clutter.uniform(g.z_min, g.z_max);
    const float rcs = static_cast<float>(-10.0 + 2.0 * clutter.normal());
    const float v_r = static_cast<float>(0.2 * clutter.normal());
    positions.insert(positions.end(), {float(x), float(y), float(z)});
    features.insert(features.end(), {rcs, v_r, v_r});
    times.push_back(0.0f);
    scene.is_clutter.push_back(true);
  }

  const std::size_t n = times.size();
  scene.cloud.positions = Tensor({n, 3}, std::move(positions));
  scene.cloud.features = Tensor({n, 3}, std::move(features));
  scene.cloud.timestamps = std::move(times);
  render_depth(scene.boxes, spec.calib, scene.depth_map, scene.object_map);
  return scene;
}

Tensor ideal_depth_distribution(const Tensor & depth_map, const DepthBinSpec & bins)
{
  if (depth_map.rank() != 2) throw InvalidArgument("ideal_depth_distribution expects an H x W depth map");
  bins.validate();
  Tensor out({depth_map.dim(0), depth_map.dim(1), bins.count});
  for (std::size_t p = 0; p < depth_map.size(); ++p) {
    const long k = bins.bin_of(depth_map[p]);
    if (depth_map[p] > 0.0f && k >= 0) out[p * bins.count + static_cast<std::size_t>(k)] = 1.0f;
  }
  return out;
}

std::vector<FeatureLevel> downsample_levels(const Tensor & full, const std::vector<double> & strides)
{
  if (full.rank() != 3) throw InvalidArgument("downsample_levels expects H x W x C");
  const std::size_t h = full.dim(0), w = full.dim(1), c = full.dim(2);
  std::vector<FeatureLevel> levels;
  for (const double s : strides) {
    if (!(s >= 1.0)) throw InvalidArgument("downsample_levels: stride must be >= 1");
    const auto hl = static_cast<std::size_t>(std::floor((h - 1) / s)) + 1;
    const auto wl = static_cast<std::size_t>(std::floor((w - 1) / s)) + 1;
    Tensor level({hl, wl, c});
    for (std::size_t i = 0; i < hl; ++i) {
      const auto row = std::min(h - 1, static_cast<std::size_t>(std::lround(i * s)));
      for (std::size_t j = 0; j < wl; ++j) {
        const auto col = std::min(w - 1, static_cast<std::size_t>(std::lround(j * s)));
        std::copy_n(full.data() + (row * w + col) * c, c, level.data() + (i * wl + j) * c);
      }
    }
    levels.push_back({std::move(level), s});
  }
  return levels;
}

Tensor ideal_occupancy(const std::vector<Box3D> & boxes, const GridSpec & spec)
{
  spec.validate();
  const std::size_t nx = spec.nx(), ny = spec.ny(), nz = spec.nz();
  Tensor occ({nx, ny, nz});
  parallel_for(0, nx, [&](std::size_t i) {
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t k = 0; k < nz; ++k) {
        const Eigen::Vector3d c = spec.center(i, j, k);
        for (const auto & b : boxes) {
          if (b.contains(c)) {
            occ.at(i, j, k) = 1.0f;
            break;
          }
        }
      }
    }
  });
  return occ;
}

std::vector<Tensor> synthetic_image_features(
  const Scene & scene, const std::vector<double> & strides, std::uint64_t seed)
{
  const std::size_t h = scene.depth_map.dim(0), w = scene.depth_map.dim(1);
  std::vector<Tensor> levels;
  for (std::size_t l = 0; l < strides.size(); ++l) {
    const double s = strides[l];
    if (!(s >= 1.0)) throw InvalidArgument("synthetic_image_features: stride must be >= 1");
    const auto hl = static_cast<std::size_t>(std::floor((h - 1) / s)) + 1;
    const auto wl = static_cast<std::size_t>(std::floor((w - 1) / s)) + 1;
    Tensor f({hl, wl, kSynthImageChannels});
    Rng rng(seed, kImageNoiseStream + l);
    for (std::size_t i = 0; i < hl; ++i) {
      const auto row = std::min(h - 1, static_cast<std::size_t>(std::lround(i * s)));
      for (std::size_t j = 0; j < wl; ++j) {
        const auto col = std::min(w - 1, static_cast<std::size_t>(std::lround(j * s)));
        float * px = f.data() + (i * wl + j) * kSynthImageChannels;
        px[0] = 1.0f;
        px[1] = scene.depth_map.at(row, col) / 100.0f;
        const auto hit = static_cast<std::size_t>(scene.object_map.at(row, col));
        if (hit) {
          const auto cls = static_cast<std::size_t>(scene.boxes[hit - 1].class_id);
          if (cls < 4) px[2 + cls] = 1.0f;
        }
        px[6] = static_cast<float>(rng.uniform(-0.1, 0.1));
        px[7] = static_cast<float>(rng.uniform(-0.1, 0.1));
      }
    }
    levels.push_back(std::move(f));
  }
  return levels;
}

CalibrationSet synthetic_calibration(const std::string & preset)
{
  CalibrationSet calib;
  if (preset == "vod") {
    calib.intrinsics = CameraIntrinsics::pinhole(747.5, 747.5, 484.0, 304.0, 968, 608);
  } else if (preset == "tj4d") {
    calib.intrinsics = CameraIntrinsics::pinhole(900.0, 900.0, 640.0, 480.0, 1280, 960);
  } else {
    throw InvalidArgument("unknown synthetic camera preset '" + preset + "'");
  }
  Eigen::Matrix3d r;
  r << 0, -1, 0, 0, 0, -1, 1, 0, 0;
  calib.radar_to_camera = extend_transform(r, Eigen::Vector3d(0.0, 0.3, 0.0));
  return calib;
}

}  // namespace bevlift
