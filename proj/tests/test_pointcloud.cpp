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
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "bevlift/error.hpp"
#include "bevlift/pointcloud.hpp"
#include "oracles.hpp"

using bevlift::Box3D;
using bevlift::GridSpec;
using bevlift::NormalizationStats;
using bevlift::PointLayout;
using bevlift::RadarPointCloud;
using bevlift::Tensor;

namespace
{

const PointLayout kVodLayout({"x", "y", "z", "rcs", "v_r", "v_r_comp", "time"});

GridSpec vod_pillars()
{
  return {0.0, 51.2, -25.6, 25.6, -3.0, 2.0, 0.16, 0.16, 5.0};
}

RadarPointCloud cloud_of(const std::vector<std::array<float, 3>> & pts, std::size_t features = 2)
{
  Tensor raw({pts.size(), 3 + features});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int k = 0; k < 3; ++k) raw.at(i, std::size_t(k)) = pts[i][k];
    for (std::size_t f = 0; f < features; ++f) raw.at(i, 3 + f) = static_cast<float>(i + f);
  }
  std::vector<std::string> names = {"x", "y", "z"};
  for (std::size_t f = 0; f < features; ++f) names.push_back("f" + std::to_string(f));
  return RadarPointCloud::from_matrix(raw, PointLayout(names));
}

RadarPointCloud random_cloud(std::mt19937 & gen, std::size_t n, double lo, double hi)
{
  std::uniform_real_distribution<float> u(static_cast<float>(lo), static_cast<float>(hi));
  std::vector<std::array<float, 3>> pts(n);
  for (auto & p : pts) p = {u(gen), u(gen), u(gen) / 10};
  return cloud_of(pts);
}

bevlift::CalibrationSet forward_camera()
{
  bevlift::CalibrationSet c;
  c.intrinsics = bevlift::CameraIntrinsics::pinhole(500, 500, 320, 240, 640, 480);
  Eigen::Matrix3d r;
  r << 0, -1, 0, 0, 0, -1, 1, 0, 0;
  c.radar_to_camera = bevlift::extend_transform(r, Eigen::Vector3d::Zero());
  return c;
}

TEST(PointLayout, LocatesChannels)
{
  EXPECT_EQ(kVodLayout.x(), 0u);
  EXPECT_EQ(kVodLayout.z(), 2u);
  EXPECT_EQ(kVodLayout.time(), 6u);
  EXPECT_EQ(kVodLayout.feature_channels(), (std::vector<std::size_t>{3, 4, 5}));
  EXPECT_EQ(kVodLayout.spatial_temporal_channels(), (std::set<std::size_t>{0, 1, 2, 6}));
  EXPECT_THROW(PointLayout({"x", "y", "rcs"}), bevlift::Error);
}

TEST(PointCloud, MatrixRoundTrip)
{
  Tensor raw({2, 7});
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<float>(i) * 0.5f;
  const auto cloud = RadarPointCloud::from_matrix(raw, kVodLayout);
  EXPECT_EQ(cloud.size(), 2u);
  EXPECT_EQ(cloud.feature_count(), 3u);
  EXPECT_FLOAT_EQ(cloud.timestamps[1], 6.5f);
  EXPECT_EQ(cloud.to_matrix(kVodLayout), raw);
}

TEST(Normalize, Examples)
{
  Tensor v({1, 3}, std::vector<float>{5.0f, 7.0f, 3.0f});
  const NormalizationStats s{{5.0, 1.0, 1.0}, {2.0, 3.0, 1.0}};
  const Tensor out = bevlift::normalize(v, s, {2});
  EXPECT_FLOAT_EQ(out[0], 0.0f);
  EXPECT_FLOAT_EQ(out[1], 2.0f);
  EXPECT_FLOAT_EQ(out[2], 3.0f);
}

TEST(Normalize, RejectsZeroStd)
{
  Tensor v({1, 2});
  EXPECT_THROW(bevlift::normalize(v, {{0, 0}, {1, 0}}), bevlift::InvalidArgument);
  EXPECT_NO_THROW(bevlift::normalize(v, {{0, 0}, {1, 0}}, {1}));
  EXPECT_THROW(bevlift::normalize(v, {{0}, {1}}), bevlift::InvalidArgument);
}

TEST(Normalize, DenormalizeIsInverse)
{
  std::mt19937 gen(11);
  std::uniform_real_distribution<float> u(-100, 100);
  Tensor v({500, 7});
  for (auto & x : v.values()) x = u(gen);
  const NormalizationStats s{{1, 2, 3, -4, 0.5, 9, 1}, {0.5, 2, 3, 8, 0.1, 4, 1}};
  const auto skip = kVodLayout.spatial_temporal_channels();
  const Tensor back = bevlift::denormalize(bevlift::normalize(v, s, skip), s, skip);
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_NEAR(back[i], v[i], 1e-6 * std::max(1.0f, std::abs(v[i])));
  }
}

TEST(CropToRange, OpenIntervals)
{
  const auto cloud = cloud_of({{25, 0, 0}, {-1, 0, 0}, {0, 0, 0}, {51.2f, 0, 0}, {10, 25.5f, 1.9f}});
  const auto kept = bevlift::crop_to_range(cloud, vod_pillars());
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_FLOAT_EQ(kept.positions[0], 25.0f);
  EXPECT_FLOAT_EQ(kept.features.at(1, 0), 4.0f);
  EXPECT_EQ(bevlift::crop_to_range(RadarPointCloud{}, vod_pillars()).size(), 0u);
}

TEST(FovFilter, Examples)
{
  const auto calib = forward_camera();
  const auto cloud = cloud_of({{10, 0, 0}, {-5, 0, 0}, {10, 100, 0}});
  Box3D on_axis;
  on_axis.center = {20, 0, 0};
  Box3D behind;
  behind.center = {-3, 0, 0};
  const auto out = bevlift::fov_filter(cloud, {on_axis, behind}, calib);
  ASSERT_EQ(out.cloud.size(), 1u);
  EXPECT_FLOAT_EQ(out.cloud.positions[0], 10.0f);
  ASSERT_EQ(out.boxes.size(), 1u);
  EXPECT_DOUBLE_EQ(out.boxes[0].center.x(), 20.0);
}

TEST(FovFilter, MatchesElementwiseOracleAndIsIdempotent)
{
  const auto calib = forward_camera();
  std::mt19937 gen(5);
  for (int scene = 0; scene < 10; ++scene) {
    const auto cloud = random_cloud(gen, 400, -30, 30);
    const auto once = bevlift::fov_filter(cloud, {}, calib);
    std::size_t expected = 0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const Eigen::Vector3d p(cloud.positions[3 * i], cloud.positions[3 * i + 1], cloud.positions[3 * i + 2]);
      if (oracle::project(p, calib).in_view) {
        ASSERT_LT(expected, once.cloud.size());
        EXPECT_FLOAT_EQ(once.cloud.positions[3 * expected], cloud.positions[3 * i]);
        ++expected;
      }
    }
    EXPECT_EQ(once.cloud.size(), expected);
    const auto twice = bevlift::fov_filter(once.cloud, {}, calib);
    EXPECT_EQ(twice.cloud.positions, once.cloud.positions);
  }
}

TEST(Pillarize, Examples)
{
  const GridSpec spec = vod_pillars();
  EXPECT_EQ(spec.nx(), 320u);
  EXPECT_EQ(spec.ny(), 320u);
  const auto one = bevlift::pillarize(cloud_of({{0.08f, -25.52f, 0}}), spec);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.coords[0], (std::array<int, 2>{0, 0}));
  const auto two = bevlift::pillarize(cloud_of({{1.0f, 1.0f, 0}, {1.01f, 1.02f, 0.5f}}), spec);
  ASSERT_EQ(two.size(), 1u);
  EXPECT_EQ(two.members[0].size(), 2u);
}

TEST(Pillarize, PartitionsInRangePoints)
{
  const GridSpec spec = vod_pillars();
  std::mt19937 gen(9);
  const auto cloud = bevlift::crop_to_range(random_cloud(gen, 2000, -5, 30), spec);
  const auto index = bevlift::pillarize(cloud, spec);
  std::vector<int> seen(cloud.size(), 0);
  std::set<std::array<int, 2>> unique(index.coords.begin(), index.coords.end());
  EXPECT_EQ(unique.size(), index.size());
  for (std::size_t p = 0; p < index.size(); ++p) {
    const auto [ix, iy] = index.coords[p];
    for (auto i : index.members[p]) {
      ++seen[i];
      const double x = cloud.positions[3 * i], y = cloud.positions[3 * i + 1];
      EXPECT_GE(x, spec.x_min + ix * spec.cell_x - 1e-9);
      EXPECT_LT(x, spec.x_min + (ix + 1) * spec.cell_x + 1e-9);
      EXPECT_GE(y, spec.y_min + iy * spec.cell_y - 1e-9);
      EXPECT_LT(y, spec.y_min + (iy + 1) * spec.cell_y + 1e-9);
    }
  }
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(PillarFeatures, MeansAndLogCount)
{
  const GridSpec spec = vod_pillars();
  const auto cloud = cloud_of({{1.0f, 1.0f, 0.0f}, {1.01f, 1.02f, 0.5f}});
  const Tensor f = bevlift::pillar_features(cloud, bevlift::pillarize(cloud, spec), spec);
  ASSERT_EQ(f.shape(), (bevlift::Shape{320, 320, 4}));
  const std::size_t ix = 6, iy = 166;
  EXPECT_FLOAT_EQ(f.at(ix, iy, std::size_t(0)), 0.5f);
  EXPECT_FLOAT_EQ(f.at(ix, iy, std::size_t(1)), 1.5f);
  EXPECT_FLOAT_EQ(f.at(ix, iy, std::size_t(2)), 0.25f);
  EXPECT_NEAR(f.at(ix, iy, std::size_t(3)), std::log(3.0), 1e-6);
  EXPECT_FLOAT_EQ(f.at(std::size_t(0), std::size_t(0), std::size_t(3)), 0.0f);
}

TEST(HorizontalFlip, ExamplesAndInvolution)
{
  const auto cloud = cloud_of({{1, 2, 0}, {3, -4, 1}});
  Box3D b;
  b.center = {5, 1, 0};
  b.yaw = std::numbers::pi / 4;
  Box3D edge = b;
  edge.yaw = std::numbers::pi;
  Tensor image({2, 3, 2});
  for (std::size_t i = 0; i < image.size(); ++i) image[i] = static_cast<float>(i);

  const auto once = bevlift::horizontal_flip(cloud, {b, edge}, image);
  EXPECT_FLOAT_EQ(once.cloud.positions[1], -2.0f);
  EXPECT_NEAR(once.boxes[0].yaw, -std::numbers::pi / 4, 1e-12);
  EXPECT_NEAR(once.boxes[1].yaw, std::numbers::pi, 1e-12);
  EXPECT_DOUBLE_EQ(once.boxes[0].center.y(), -1.0);
  EXPECT_FLOAT_EQ(once.image.at(std::size_t(0), std::size_t(0), std::size_t(0)), 4.0f);

  const auto twice = bevlift::horizontal_flip(once.cloud, once.boxes, once.image);
  EXPECT_EQ(twice.cloud.positions, cloud.positions);
  EXPECT_EQ(twice.cloud.features, cloud.features);
  EXPECT_EQ(twice.image, image);
  EXPECT_NEAR(twice.boxes[0].yaw, b.yaw, 1e-12);
  EXPECT_NEAR(twice.boxes[1].yaw, edge.yaw, 1e-12);
  EXPECT_DOUBLE_EQ(twice.boxes[0].center.y(), 1.0);
}

TEST(FlipBev, MatchesPointFlip)
{
  GridSpec spec{0, 4, -2, 2, -1, 1, 1, 1, 2};
  const auto cloud = cloud_of({{0.5f, -1.5f, 0}, {2.5f, 0.5f, 0}});
  const Tensor a = bevlift::pillar_features(cloud, bevlift::pillarize(cloud, spec), spec);
  const auto flipped = bevlift::horizontal_flip(cloud, {}, Tensor{});
  const Tensor b = bevlift::pillar_features(flipped.cloud, bevlift::pillarize(flipped.cloud, spec), spec);
  EXPECT_EQ(bevlift::flip_bev(a), b);
}

TEST(PointFile, BinaryAndCsvRoundTrip)
{
  const auto dir = std::filesystem::temp_directory_path() / "bevlift_test_pointfile";
  std::filesystem::create_directories(dir);
  Tensor raw({3, 7});
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<float>(i) - 4.5f;
  bevlift::save_point_file(dir / "p.bin", raw);
  EXPECT_EQ(bevlift::load_point_file(dir / "p.bin", kVodLayout), raw);
  {
    std::ofstream os(dir / "p.csv");
    os << "time,x,y,z,rcs,v_r,v_r_comp,extra\n1,2,3,4,5,6,7,8\n";
  }
  const Tensor csv = bevlift::load_point_file(dir / "p.csv", kVodLayout);
  EXPECT_EQ(csv, Tensor({1, 7}, std::vector<float>{2, 3, 4, 5, 6, 7, 1}));
  {
    std::ofstream os(dir / "bad.bin", std::ios::binary);
    os.write("abcde", 5);
  }
  EXPECT_THROW(bevlift::load_point_file(dir / "bad.bin", kVodLayout), bevlift::DataError);
  std::filesystem::remove_all(dir);
}

}  // namespace
