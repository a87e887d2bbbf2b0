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
#include <numbers>
#include <random>
#include <sstream>

#include "bevlift/error.hpp"
#include "bevlift/eval.hpp"
#include "oracles.hpp"

using bevlift::Box3D;
using bevlift::EvalRegion;
using bevlift::FrameTable;
using bevlift::IouMode;
using bevlift::MatchConfig;

namespace
{

Box3D box(double x, double y, double l, double w, double yaw = 0.0, double score = 1.0, int cls = 0)
{
  Box3D b;
  b.center = {x, y, 0.0};
  b.size = {l, w, 1.0};
  b.yaw = yaw;
  b.score = score;
  b.class_id = cls;
  return b;
}

MatchConfig car_config(IouMode mode = IouMode::kBev)
{
  MatchConfig cfg;
  cfg.iou_thresholds = {{0, 0.5}, {1, 0.25}};
  cfg.iou_mode = mode;
  return cfg;
}

TEST(BoxIou, AnalyticCases)
{
  const Box3D a = box(0, 0, 2, 2);
  EXPECT_NEAR(bevlift::box_iou(a, a), 1.0, 1e-6);
  EXPECT_NEAR(bevlift::box_iou(a, box(1, 0, 2, 2)), 1.0 / 3.0, 1e-6);
  const Box3D unit = box(0, 0, 1, 1), turned = box(0, 0, 1, 1, std::numbers::pi / 4);
  const auto ca = unit.bev_corners(), cb = turned.bev_corners();
  const double octagon = bevlift::convex_intersection_area({ca.begin(), ca.end()}, {cb.begin(), cb.end()});
  EXPECT_NEAR(octagon, 2 * (std::sqrt(2.0) - 1), 1e-6);
  EXPECT_NEAR(bevlift::box_iou(unit, turned), octagon / (2 - octagon), 1e-6);
  EXPECT_NEAR(bevlift::box_iou(unit, turned), std::sqrt(0.5), 1e-6);
  EXPECT_NEAR(bevlift::box_iou(unit, turned), oracle::raster_iou(unit, turned), 1e-2);
  EXPECT_NEAR(bevlift::box_iou(a, box(5, 0, 2, 2)), 0.0, 1e-12);
  EXPECT_NEAR(bevlift::box_iou(a, box(2, 0, 2, 2)), 0.0, 1e-12);
  EXPECT_THROW(bevlift::box_iou(a, box(0, 0, 0, 2)), bevlift::InvalidArgument);
}

TEST(BoxIou, MatchesRasterOracleAndIsSymmetric)
{
  std::mt19937 gen(51);
  std::uniform_real_distribution<double> pos(-2, 2), size(0.5, 5), yaw(-3.14, 3.14);
  for (int pair = 0; pair < 200; ++pair) {
    const Box3D a = box(pos(gen), pos(gen), size(gen), size(gen), yaw(gen));
    const Box3D b = box(pos(gen), pos(gen), size(gen), size(gen), yaw(gen));
    const double iou = bevlift::box_iou(a, b);
    EXPECT_GE(iou, 0.0);
    EXPECT_LE(iou, 1.0);
    EXPECT_NEAR(iou, oracle::raster_iou(a, b), 1e-2);
    EXPECT_NEAR(iou, bevlift::box_iou(b, a), 1e-12);
  }
}

TEST(BoxIou, ThreeDimensionalBound)
{
  std::mt19937 gen(52);
  std::uniform_real_distribution<double> pos(-1, 1), size(0.5, 3), yaw(-3.14, 3.14);
  for (int pair = 0; pair < 200; ++pair) {
    Box3D a = box(pos(gen), pos(gen), size(gen), size(gen), yaw(gen));
    Box3D b = box(pos(gen), pos(gen), size(gen), size(gen), yaw(gen));
    const double bev = bevlift::box_iou(a, b, IouMode::kBev);
    EXPECT_NEAR(bevlift::box_iou(a, b, IouMode::k3d), bev, 1e-12);
    b.center.z() = pos(gen);
    const double iou3 = bevlift::box_iou(a, b, IouMode::k3d);
    EXPECT_GE(iou3, 0.0);
    EXPECT_LE(iou3, bev + 1e-12);
  }
  Box3D lifted = box(0, 0, 2, 2);
  lifted.center.z() = 0.5;
  EXPECT_NEAR(bevlift::box_iou(box(0, 0, 2, 2), lifted, IouMode::k3d), 1.0 / 3.0, 1e-12);
}

TEST(ConvexIntersection, SquareAgainstTriangle)
{
  const std::vector<Eigen::Vector2d> square = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  const std::vector<Eigen::Vector2d> tri = {{1, -1}, {3, 1}, {1, 1}};
  EXPECT_NEAR(bevlift::convex_intersection_area(square, tri), 1.0, 1e-12);
  EXPECT_NEAR(bevlift::convex_intersection_area(tri, square), 1.0, 1e-12);
}

TEST(InterpolatedAp40, ClosedForms)
{
  EXPECT_DOUBLE_EQ(bevlift::interpolated_ap40({1.0}, {1.0}), 1.0);
  EXPECT_DOUBLE_EQ(bevlift::interpolated_ap40({1.0, 1.0}, {1.0, 0.5}), 1.0);
  EXPECT_DOUBLE_EQ(bevlift::interpolated_ap40({0.5}, {1.0}), 0.5);
  EXPECT_DOUBLE_EQ(bevlift::interpolated_ap40({}, {}), 0.0);
}

TEST(AveragePrecision, SingleFrameExamples)
{
  FrameTable gts, dets;
  gts["a"].boxes = {box(10, 0, 4, 2)};
  dets["a"].boxes = {box(10, 0, 4, 2, 0, 0.9)};
  EXPECT_DOUBLE_EQ(bevlift::average_precision(dets, gts, 0, car_config(), EvalRegion::entire_area()).ap, 1.0);

  dets["a"].boxes.push_back(box(30, 5, 4, 2, 0, 0.8));
  const auto r = bevlift::average_precision(dets, gts, 0, car_config(), EvalRegion::entire_area());
  EXPECT_DOUBLE_EQ(r.ap, 1.0);
  EXPECT_EQ(r.precision, (std::vector<double>{1.0, 0.5}));
  EXPECT_EQ(r.recall, (std::vector<double>{1.0, 1.0}));

  const auto empty = bevlift::average_precision(dets, gts, 1, car_config(), EvalRegion::entire_area());
  EXPECT_TRUE(empty.empty);
  EXPECT_DOUBLE_EQ(empty.ap, 0.0);
}

/// Five frames, four ground-truth cars. Sorted detections are
/// TP, FP, TP, TP, FP; the car in frame 4 is never detected.
FrameTable fixture_gt()
{
  FrameTable gts;
  gts["1"].boxes = {box(10, 0, 4, 2)};
  gts["2"].boxes = {box(12, 3, 4, 2)};
  gts["3"].boxes = {box(20, -3, 4, 2, 0.5)};
  gts["4"].boxes = {box(30, 1, 4, 2)};
  gts["5"];
  return gts;
}

FrameTable fixture_dets()
{
  FrameTable dets;
  dets["1"].boxes = {box(10.1, 0, 4, 2, 0, 0.9)};
  dets["5"].boxes = {box(15, 0, 4, 2, 0, 0.8), box(25, 0, 4, 2, 0, 0.5)};
  dets["2"].boxes = {box(12, 3.2, 4, 2, 0, 0.7)};
  dets["3"].boxes = {box(20, -3, 4, 2, 0.45, 0.6)};
  return dets;
}

TEST(AveragePrecision, FiveFrameFixture)
{
  const auto r = bevlift::average_precision(fixture_dets(), fixture_gt(), 0, car_config(), EvalRegion::entire_area());
  EXPECT_EQ(r.num_gt, 4u);
  EXPECT_EQ(r.num_det, 5u);
  ASSERT_EQ(r.precision.size(), 5u);
  const std::vector<double> recall = {0.25, 0.25, 0.5, 0.75, 0.75};
  const std::vector<double> precision = {1.0, 0.5, 2.0 / 3.0, 0.75, 0.6};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(r.recall[i], recall[i], 1e-12);
    EXPECT_NEAR(r.precision[i], precision[i], 1e-12);
  }
  EXPECT_NEAR(r.ap, 0.625, 1e-12);
}

TEST(AveragePrecision, RemovingSpuriousDetectionNeverLowersAp)
{
  std::mt19937 gen(53);
  std::uniform_real_distribution<double> pos(0, 40), jitter(-0.5, 0.5), score(0, 1);
  for (int trial = 0; trial < 30; ++trial) {
    FrameTable gts, dets;
    for (int f = 0; f < 4; ++f) {
      const std::string id = std::to_string(f);
      for (int k = 0; k < 3; ++k) {
        const Box3D g = box(pos(gen), pos(gen), 4, 2);
        gts[id].boxes.push_back(g);
        if (score(gen) < 0.7) dets[id].boxes.push_back(box(g.center.x() + jitter(gen), g.center.y() + jitter(gen), 4, 2, 0, score(gen)));
      }
      dets[id].boxes.push_back(box(pos(gen) + 100, pos(gen), 4, 2, 0, score(gen)));
    }
    const double with = bevlift::average_precision(dets, gts, 0, car_config(), EvalRegion::entire_area()).ap;
    FrameTable fewer = dets;
    fewer["2"].boxes.pop_back();
    const double without = bevlift::average_precision(fewer, gts, 0, car_config(), EvalRegion::entire_area()).ap;
    EXPECT_GE(without, with - 1e-12);
  }
}

TEST(Regions, Examples)
{
  bevlift::CalibrationSet camera_is_radar;
  camera_is_radar.intrinsics = bevlift::CameraIntrinsics::pinhole(100, 100, 50, 50, 100, 100);
  Box3D inside;
  inside.center = {0, 1, 10};
  Box3D outside;
  outside.center = {5, 1, 10};
  Box3D far;
  far.center = {0, 1, 30};
  const auto roi = EvalRegion::corridor();
  EXPECT_TRUE(bevlift::in_region(inside, roi, &camera_is_radar));
  EXPECT_FALSE(bevlift::in_region(outside, roi, &camera_is_radar));
  EXPECT_FALSE(bevlift::in_region(far, roi, &camera_is_radar));
  EXPECT_THROW(bevlift::in_region(inside, roi, nullptr), bevlift::Error);

  Box3D at30;
  at30.center = {18, 24, 0};
  EXPECT_TRUE(bevlift::in_region(at30, EvalRegion::band(25, 50), nullptr));
  EXPECT_FALSE(bevlift::in_region(at30, EvalRegion::band(0, 25), nullptr));
  EXPECT_EQ(bevlift::region_filter({inside, outside, far}, roi, &camera_is_radar).size(), 1u);

  EXPECT_TRUE(bevlift::in_region(at30, EvalRegion::subset("night"), nullptr, {"night", "rain"}));
  EXPECT_FALSE(bevlift::in_region(at30, EvalRegion::subset("night"), nullptr, {"day"}));
}

TEST(Regions, ParseAndName)
{
  const auto r = bevlift::parse_regions("eaa,roi,bands,tag:night,band:10-20");
  ASSERT_EQ(r.size(), 7u);
  std::vector<std::string> names;
  for (const auto & x : r) names.push_back(x.name());
  EXPECT_EQ(names, (std::vector<std::string>{"eaa", "roi", "band_0_25", "band_25_50", "band_50_70", "tag:night", "band_10_20"}));
  EXPECT_THROW(bevlift::parse_regions("eaa,city"), bevlift::ConfigError);
  EXPECT_THROW(bevlift::parse_regions(""), bevlift::ConfigError);
  EXPECT_THROW(bevlift::parse_regions("band:10"), bevlift::ConfigError);
}

TEST(Evaluate, SelfEvaluationAndEmptyClasses)
{
  FrameTable gts = fixture_gt();
  gts["2"].boxes.push_back(box(5, 5, 0.8, 0.6, 0, 1.0, 1));
  const std::vector<std::string> names = {"Car", "Pedestrian"};
  const auto report = bevlift::evaluate(gts, gts, names, car_config(), {EvalRegion::entire_area(), EvalRegion::band(50, 70)});
  EXPECT_DOUBLE_EQ(report.mean_ap("eaa"), 1.0);
  EXPECT_DOUBLE_EQ(report.mean_ap("band_50_70"), 0.0);
  std::size_t flagged = 0;
  for (const auto & row : report.rows) flagged += row.result.empty;
  EXPECT_GE(flagged, 2u);

  std::stringstream csv;
  bevlift::write_report_csv(csv, report);
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "class,region,ap,num_gt,num_det,empty");

  const auto dir = std::filesystem::temp_directory_path() / "bevlift_test_pr";
  std::filesystem::remove_all(dir);
  bevlift::save_pr_plots(dir, report);
  EXPECT_TRUE(std::filesystem::exists(dir / "pr_Car.svg"));
  std::filesystem::remove_all(dir);
}

TEST(MatchConfig, RejectsBadThresholds)
{
  MatchConfig cfg;
  cfg.iou_thresholds = {{0, 0.0}};
  EXPECT_THROW(cfg.validate(), bevlift::Error);
  cfg.iou_thresholds = {{0, 1.5}};
  EXPECT_THROW(cfg.validate(), bevlift::Error);
  cfg.iou_thresholds = {{0, 1.0}};
  EXPECT_NO_THROW(cfg.validate());
}

}  // namespace
