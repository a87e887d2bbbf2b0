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


#include <gtest/gtest.h>

#include <cmath>

#include "bevlift/error.hpp"
#include "bevlift/synth.hpp"

using bevlift::Box3D;
using bevlift::GridSpec;
using bevlift::SceneSpec;
using bevlift::Tensor;

namespace
{

SceneSpec vod_scene(std::uint64_t seed, std::vector<std::size_t> counts = {4, 3, 2})
{
  SceneSpec s;
  s.seed = seed;
  s.counts = std::move(counts);
  s.calib = bevlift::synthetic_calibration("vod");
  s.spec = {0.0, 51.2, -25.6, 25.6, -3.0, 2.0, 0.32, 0.32, 0.5};
  return s;
}

/// Distance from p to the surface of the (yaw-rotated) box.
double surface_distance(const Box3D & b, const Eigen::Vector3d & p)
{
  const Eigen::Vector3d d = p - b.center;
  const double c = std::cos(b.yaw), s = std::sin(b.yaw);
  const Eigen::Vector3d local(c * d.x() + s * d.y(), -s * d.x() + c * d.y(), d.z());
  const Eigen::Vector3d excess = local.cwiseAbs() - b.size / 2;
  if ((excess.array() <= 0).all()) return -excess.maxCoeff();
  return excess.cwiseMax(0.0).norm();
}

TEST(GenerateScene, DeterministicForFixedSeed)
{
  const auto a = bevlift::generate_scene(vod_scene(7));
  const auto b = bevlift::generate_scene(vod_scene(7));
  ASSERT_EQ(a.boxes.size(), 9u);
  for (std::size_t i = 0; i < a.boxes.size(); ++i) {
    EXPECT_EQ(a.boxes[i].center, b.boxes[i].center);
    EXPECT_EQ(a.boxes[i].size, b.boxes[i].size);
    EXPECT_EQ(a.boxes[i].yaw, b.boxes[i].yaw);
  }
  EXPECT_EQ(a.radar_matrix(), b.radar_matrix());
  EXPECT_EQ(a.depth_map, b.depth_map);
  EXPECT_EQ(a.object_map, b.object_map);
  const auto c = bevlift::generate_scene(vod_scene(8));
  EXPECT_NE(a.radar_matrix(), c.radar_matrix());
}

TEST(GenerateScene, ObjectsKeepTheirStreamWhenLaterCountsChange)
{
  const auto a = bevlift::generate_scene(vod_scene(3, {2, 0, 0}));
  const auto b = bevlift::generate_scene(vod_scene(3, {2, 0, 1}));
  ASSERT_EQ(b.boxes.size(), 3u);
  EXPECT_EQ(a.boxes[0].center, b.boxes[0].center);
  EXPECT_EQ(a.boxes[1].center, b.boxes[1].center);
}

TEST(GenerateScene, EmptySceneIsEmpty)
{
  auto spec = vod_scene(1, {0, 0, 0});
  spec.clutter_rate = 0;
  const auto s = bevlift::generate_scene(spec);
  EXPECT_TRUE(s.boxes.empty());
  EXPECT_EQ(s.cloud.size(), 0u);
  ASSERT_EQ(s.depth_map.shape(), (bevlift::Shape{608, 968}));
  for (float v : s.depth_map.values()) EXPECT_EQ(v, 0.0f);
}

TEST(GenerateScene, PlacementInvariantsAndNoiseBound)
{
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto spec = vod_scene(seed);
    const auto s = bevlift::generate_scene(spec);
    const bevlift::Projector projector(spec.calib);
    for (std::size_t i = 0; i < s.boxes.size(); ++i) {
      const auto & b = s.boxes[i];
      EXPECT_TRUE(projector.project(b.center).valid);
      EXPECT_NEAR(b.center.z() - b.size.z() / 2, spec.ground_z, 1e-12);
      for (std::size_t j = i + 1; j < s.boxes.size(); ++j) {
        const auto & o = s.boxes[j];
        const double r = 0.5 * (std::hypot(b.size.x(), b.size.y()) + std::hypot(o.size.x(), o.size.y()));
        EXPECT_GE((b.center - o.center).head<2>().norm(), r);
      }
    }
    std::size_t clutter = 0;
    for (std::size_t p = 0; p < s.cloud.size(); ++p) {
      const Eigen::Vector3d pt(s.cloud.positions[3 * p], s.cloud.positions[3 * p + 1], s.cloud.positions[3 * p + 2]);
      if (s.is_clutter[p]) {
        ++clutter;
        EXPECT_TRUE(spec.spec.contains(pt.x(), pt.y(), pt.z()) || pt.x() == spec.spec.x_min);
        continue;
      }
      double best = 1e300;
      for (const auto & b : s.boxes) best = std::min(best, surface_distance(b, pt));
      EXPECT_LE(best, 4 * spec.noise_sigma + 1e-5);
    }
    EXPECT_EQ(clutter, static_cast<std::size_t>(std::llround(0.01 * 51.2 * 51.2)));
    EXPECT_EQ(s.cloud.size() - clutter, 9 * spec.points_per_object);
  }
}

TEST(GenerateScene, ImpossiblePlacementThrows)
{
  auto spec = vod_scene(1, {400, 0, 0});
  spec.max_attempts = 20;
  EXPECT_THROW(bevlift::generate_scene(spec), bevlift::InvalidArgument);
  auto negative = vod_scene(1);
  negative.noise_sigma = -1;
  EXPECT_THROW(bevlift::generate_scene(negative), bevlift::InvalidArgument);
}

TEST(RenderDepth, PrincipalRayHitsNearFace)
{
  const auto calib = bevlift::synthetic_calibration("vod");
  Box3D b;
  b.center = {20, 0, 0.3};
  b.size = {4, 2, 2};
  Tensor depth, object;
  bevlift::render_depth({b}, calib, depth, object);
  EXPECT_NEAR(depth.at(std::size_t(304), std::size_t(484)), 18.0, 1e-4);
  EXPECT_EQ(object.at(std::size_t(304), std::size_t(484)), 1.0f);
  EXPECT_EQ(depth.at(std::size_t(0), std::size_t(0)), 0.0f);

  Box3D front = b;
  front.center.x() = 10;
  bevlift::render_depth({b, front}, calib, depth, object);
  EXPECT_NEAR(depth.at(std::size_t(304), std::size_t(484)), 8.0, 1e-4);
  EXPECT_EQ(object.at(std::size_t(304), std::size_t(484)), 2.0f);
}

TEST(IdealDepthDistribution, OneHotRows)
{
  const bevlift::DepthBinSpec bins;
  Tensor depth({2, 2}, std::vector<float>{static_cast<float>(bins.center(5)), 0.0f, 30.0f, 80.0f});
  const Tensor dist = bevlift::ideal_depth_distribution(depth, bins);
  ASSERT_EQ(dist.shape(), (bevlift::Shape{2, 2, 64}));
  EXPECT_EQ(dist.at(std::size_t(0), std::size_t(0), std::size_t(5)), 1.0f);
  const std::vector<double> expected_sums = {1, 0, 1, 0};
  for (std::size_t p = 0; p < 4; ++p) {
    double sum = 0;
    for (std::size_t k = 0; k < 64; ++k) sum += dist[p * 64 + k];
    EXPECT_EQ(sum, expected_sums[p]);
  }
  EXPECT_EQ(dist.at(std::size_t(1), std::size_t(0), std::size_t(bins.bin_of(30.0))), 1.0f);

  const auto scene = bevlift::generate_scene(vod_scene(4));
  const Tensor full = bevlift::ideal_depth_distribution(scene.depth_map, bins);
  for (std::size_t p = 0; p < scene.depth_map.size(); ++p) {
    double sum = 0;
    for (std::size_t k = 0; k < 64; ++k) sum += full[p * 64 + k];
    const float d = scene.depth_map[p];
    EXPECT_EQ(sum, d > 0 && bins.bin_of(d) >= 0 ? 1.0 : 0.0);
  }
}

TEST(IdealOccupancy, CountsMatchVolume)
{
  const GridSpec grid{0.0, 20.0, -10.0, 10.0, -2.0, 2.0, 0.2, 0.2, 0.2};
  EXPECT_EQ(bevlift::ideal_occupancy({}, grid), Tensor({100, 100, 20}));
  Box3D a;
  a.center = {5.1, -3.1, 0.1};
  a.size = {4, 3, 2};
  a.yaw = 0.4;
  Box3D b;
  b.center = {14, 4, -0.5};
  b.size = {2.5, 1.5, 1.2};
  b.yaw = -1.2;
  const Tensor occ = bevlift::ideal_occupancy({a, b}, grid);
  EXPECT_EQ(occ.at(std::size_t(25), std::size_t(34), std::size_t(10)), 1.0f);
  double count = 0;
  for (float v : occ.values()) count += v;
  const double expected = (a.volume() + b.volume()) / (0.2 * 0.2 * 0.2);
  EXPECT_NEAR(count, expected, 0.2 * expected);
}

TEST(SyntheticImageFeatures, ChannelsAndOneHot)
{
  const auto scene = bevlift::generate_scene(vod_scene(5));
  const auto levels = bevlift::synthetic_image_features(scene, {8, 16, 32}, 5);
  ASSERT_EQ(levels.size(), 3u);
  EXPECT_EQ(levels[0].shape(), (bevlift::Shape{76, 121, bevlift::kSynthImageChannels}));
  EXPECT_EQ(levels[2].shape(), (bevlift::Shape{19, 31, bevlift::kSynthImageChannels}));
  const auto & l0 = levels[0];
  for (std::size_t i = 0; i < 76; ++i) {
    for (std::size_t j = 0; j < 121; ++j) {
      EXPECT_EQ(l0.at(i, j, std::size_t(0)), 1.0f);
      const float d = scene.depth_map.at(i * 8, j * 8);
      EXPECT_FLOAT_EQ(l0.at(i, j, std::size_t(1)), d / 100.0f);
      float hot = 0;
      for (std::size_t c = 2; c < 6; ++c) hot += l0.at(i, j, c);
      EXPECT_EQ(hot, d > 0 ? 1.0f : 0.0f);
    }
  }
  EXPECT_EQ(levels[1], bevlift::synthetic_image_features(scene, {8, 16, 32}, 5)[1]);
}

TEST(DownsampleLevels, PicksNodePixels)
{
  Tensor full({5, 7, 1});
  for (std::size_t i = 0; i < full.size(); ++i) full[i] = static_cast<float>(i);
  const auto levels = bevlift::downsample_levels(full, {1, 2, 4});
  EXPECT_EQ(levels[0].map, full);
  EXPECT_EQ(levels[1].map.shape(), (bevlift::Shape{3, 4, 1}));
  EXPECT_EQ(levels[1].map.at(std::size_t(2), std::size_t(3), std::size_t(0)), full.at(std::size_t(4), std::size_t(6), std::size_t(0)));
  EXPECT_EQ(levels[2].map.shape(), (bevlift::Shape{2, 2, 1}));
  EXPECT_DOUBLE_EQ(levels[2].stride, 4.0);
  EXPECT_THROW(bevlift::downsample_levels(full, {0.5}), bevlift::InvalidArgument);
}

TEST(SyntheticCalibration, Presets)
{
  const auto vod = bevlift::synthetic_calibration("vod");
  EXPECT_EQ(vod.intrinsics.image_width, 968);
  EXPECT_EQ(vod.intrinsics.image_height, 608);
  const bevlift::Projector p(vod);
  const auto ahead = p.project({10, 0, 0.3});
  EXPECT_NEAR(ahead.u, 484, 1e-9);
  EXPECT_NEAR(ahead.v, 304, 1e-9);
  EXPECT_NEAR(ahead.d, 10, 1e-12);
  EXPECT_EQ(bevlift::synthetic_calibration("tj4d").intrinsics.image_width, 1280);
  EXPECT_THROW(bevlift::synthetic_calibration("kitti"), bevlift::Error);
}

}  // namespace
