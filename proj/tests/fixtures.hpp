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


// Synthetic frames shared by the pipeline tests and the acceptance binary.

#ifndef BEVLIFT__TESTS__FIXTURES_HPP_
#define BEVLIFT__TESTS__FIXTURES_HPP_

#include <Eigen/Geometry>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bevlift/config.hpp"
#include "bevlift/frame_io.hpp"
#include "bevlift/lifting.hpp"
#include "bevlift/rng.hpp"
#include "bevlift/synth.hpp"

namespace fixture
{

/// Preset with the generator's radar layout and identity normalization.
inline bevlift::PipelineConfig synth_config(const std::string & preset = "vod")
{
  bevlift::PipelineConfig c = bevlift::preset_config(preset);
  c.radar_channels = bevlift::synth_radar_channels();
  c.radar_mean.assign(c.radar_channels.size(), 0.0);
  c.radar_std.assign(c.radar_channels.size(), 1.0);
  c.image_channels = bevlift::kSynthImageChannels;
  c.validate();
  return c;
}

inline bevlift::SceneSpec scene_spec(
  const bevlift::PipelineConfig & config, std::uint64_t seed, std::vector<std::size_t> counts,
  const std::string & preset = "vod")
{
  bevlift::SceneSpec s;
  s.seed = seed;
  s.counts = std::move(counts);
  s.priors = bevlift::default_class_priors(config.classes.size() > 3);
  s.calib = bevlift::synthetic_calibration(preset);
  s.spec = config.view_grid();
  return s;
}

inline bevlift::FrameData frame_from_scene(
  const bevlift::PipelineConfig & config, const bevlift::Scene & scene, const bevlift::SceneSpec & spec)
{
  bevlift::FrameData f;
  f.id = std::to_string(spec.seed);
  f.radar = scene.radar_matrix();
  f.calib = spec.calib;
  f.image_levels = bevlift::synthetic_image_features(scene, config.strides, spec.seed);
  f.depth = scene.depth_map;
  f.boxes = scene.boxes;
  return f;
}

inline bevlift::FrameData synth_frame(
  const bevlift::PipelineConfig & config, std::uint64_t seed, std::vector<std::size_t> counts = {4, 3, 2})
{
  const auto spec = scene_spec(config, seed, std::move(counts));
  return frame_from_scene(config, bevlift::generate_scene(spec), spec);
}

inline bevlift::Tensor random_tensor(std::mt19937 & gen, bevlift::Shape shape, float lo = -1.0f, float hi = 1.0f)
{
  std::uniform_real_distribution<float> u(lo, hi);
  bevlift::Tensor t(std::move(shape));
  for (auto & v : t.values()) v = u(gen);
  return t;
}

/// Forward-looking camera at the radar origin: radar x maps to camera depth.
inline bevlift::CalibrationSet forward_camera(double f, double cx, double cy, int w, int h)
{
  bevlift::CalibrationSet c;
  c.intrinsics = bevlift::CameraIntrinsics::pinhole(f, f, cx, cy, w, h);
  Eigen::Matrix3d r;
  r << 0, -1, 0, 0, 0, -1, 1, 0, 0;
  c.radar_to_camera = bevlift::extend_transform(r, Eigen::Vector3d::Zero());
  return c;
}

/// Small random scene: camera sees part of a compact grid.
struct LiftScene
{
  bevlift::CalibrationSet calib;
  bevlift::GridSpec spec;
  std::vector<bevlift::FeatureLevel> levels;
  std::vector<bevlift::FeatureLevel> depth;
  bevlift::DepthBinSpec bins{1.0, 21.0, 16};
};

inline LiftScene random_lift_scene(std::mt19937 & gen, std::size_t channels = 3)
{
  std::uniform_int_distribution<int> dims(2, 8);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  LiftScene s;
  s.calib = forward_camera(40 + 20 * jitter(gen), 32 + 10 * jitter(gen), 24 + 10 * jitter(gen), 64, 48);
  Eigen::Matrix3d r = s.calib.radar_to_camera.rotation();
  r = Eigen::AngleAxisd(jitter(gen) / 3, Eigen::Vector3d::UnitY()).toRotationMatrix() * r;
  s.calib.radar_to_camera = bevlift::extend_transform(r, Eigen::Vector3d(jitter(gen), jitter(gen), jitter(gen)));
  const int nx = 2 * dims(gen), ny = 2 * dims(gen), nz = dims(gen);
  s.spec = {0.0, 1.5 * nx, -0.375 * ny, 0.375 * ny, -2.0, -2.0 + 0.5 * nz, 1.5, 0.75, 0.5};
  for (double stride : {4.0, 8.0}) {
    const auto h = static_cast<std::size_t>(47 / stride) + 1, w = static_cast<std::size_t>(63 / stride) + 1;
    s.levels.push_back({random_tensor(gen, {h, w, channels}), stride});
    s.depth.push_back({random_tensor(gen, {h, w, s.bins.count}, 0.0f, 1.0f), stride});
  }
  return s;
}

}  // namespace fixture

#endif  // BEVLIFT__TESTS__FIXTURES_HPP_
