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
#include <numbers>
#include <random>
#include <sstream>

#include "bevlift/box.hpp"
#include "bevlift/error.hpp"

using bevlift::Box3D;
using bevlift::FrameTable;

namespace
{

const std::vector<std::string> kNames = {"Car", "Pedestrian", "Cyclist"};

TEST(WrapAngle, MapsIntoHalfOpenInterval)
{
  constexpr double pi = std::numbers::pi;
  EXPECT_NEAR(bevlift::wrap_angle(0.0), 0.0, 1e-12);
  EXPECT_NEAR(bevlift::wrap_angle(pi), pi, 1e-12);
  EXPECT_NEAR(bevlift::wrap_angle(-pi), pi, 1e-12);
  EXPECT_NEAR(bevlift::wrap_angle(3 * pi / 2), -pi / 2, 1e-12);
  EXPECT_NEAR(bevlift::wrap_angle(5 * pi), pi, 1e-9);
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(gen);
    const double w = bevlift::wrap_angle(a);
    EXPECT_GT(w, -pi);
    EXPECT_LE(w, pi);
    EXPECT_NEAR(std::sin(w), std::sin(a), 1e-9);
    EXPECT_NEAR(std::cos(w), std::cos(a), 1e-9);
  }
}

TEST(Box3D, CornersAreCounterClockwise)
{
  Box3D b;
  b.center = {1, 2, 0};
  b.size = {4, 2, 1};
  b.yaw = 0.3;
  const auto c = b.bev_corners();
  double area2 = 0;
  for (int i = 0; i < 4; ++i) {
    const auto & p = c[i];
    const auto & q = c[(i + 1) % 4];
    area2 += p.x() * q.y() - q.x() * p.y();
  }
  EXPECT_NEAR(area2 / 2, 8.0, 1e-9);
  EXPECT_NEAR((c[0] + c[2]).x() / 2, 1.0, 1e-12);
  EXPECT_NEAR((c[0] + c[2]).y() / 2, 2.0, 1e-12);
}

TEST(Box3D, ContainsUsesRotatedFrame)
{
  Box3D b;
  b.size = {4, 1, 2};
  b.yaw = std::numbers::pi / 2;
  EXPECT_TRUE(b.contains({0, 1.9, 0}));
  EXPECT_FALSE(b.contains({1.9, 0, 0}));
  EXPECT_FALSE(b.contains({0, 0, 1.1}));
  EXPECT_DOUBLE_EQ(b.volume(), 8.0);
}

TEST(BoxCsv, RoundTripWithAndWithoutScore)
{
  FrameTable t;
  Box3D a;
  a.center = {10.5, -2.25, -0.2};
  a.size = {3.9, 1.7, 1.5};
  a.yaw = -1.25;
  a.class_id = 0;
  a.score = 0.75;
  Box3D b = a;
  b.class_id = 2;
  b.center.x() = 20;
  t["000001"].boxes = {a, b};
  t["000001"].tags = {"day", "rain"};
  t["000002"].boxes = {a};

  for (bool with_score : {true, false}) {
    std::stringstream ss;
    bevlift::write_boxes_csv(ss, t, kNames, with_score);
    const FrameTable r = bevlift::read_boxes_csv(ss, kNames, with_score);
    ASSERT_EQ(r.size(), 2u);
    const auto & boxes = r.at("000001").boxes;
    ASSERT_EQ(boxes.size(), 2u);
    EXPECT_EQ(boxes[1].class_id, 2);
    EXPECT_NEAR(boxes[0].center.y(), -2.25, 1e-9);
    EXPECT_NEAR(boxes[0].yaw, -1.25, 1e-9);
    EXPECT_NEAR(boxes[0].score, with_score ? 0.75 : 1.0, 1e-9);
    if (!with_score) {
      EXPECT_EQ(r.at("000001").tags, (std::set<std::string>{"day", "rain"}));
    }
  }
}

TEST(BoxCsv, MissingScoreColumnDefaultsToOne)
{
  std::stringstream ss("frame,class,x,y,z,l,w,h,yaw\nf,1,1,2,3,1,1,1,0\n");
  const auto r = bevlift::read_boxes_csv(ss, kNames, true);
  EXPECT_EQ(r.at("f").boxes.at(0).class_id, 1);
  EXPECT_DOUBLE_EQ(r.at("f").boxes.at(0).score, 1.0);
}

TEST(BoxCsv, RejectsMalformedInput)
{
  std::stringstream missing("frame,class,x,y,z,l,w,h\n");
  EXPECT_THROW(bevlift::read_boxes_csv(missing, kNames, false), bevlift::DataError);
  std::stringstream bad_class("frame,class,x,y,z,l,w,h,yaw\nf,Bus,1,2,3,1,1,1,0\n");
  EXPECT_THROW(bevlift::read_boxes_csv(bad_class, kNames, false), bevlift::DataError);
  std::stringstream bad_number("frame,class,x,y,z,l,w,h,yaw\nf,Car,1,2,3x,1,1,1,0\n");
  EXPECT_THROW(bevlift::read_boxes_csv(bad_number, kNames, false), bevlift::DataError);
  std::stringstream short_row("frame,class,x,y,z,l,w,h,yaw\nf,Car,1,2\n");
  EXPECT_THROW(bevlift::read_boxes_csv(short_row, kNames, false), bevlift::DataError);
  std::stringstream empty("");
  EXPECT_THROW(bevlift::read_boxes_csv(empty, kNames, false), bevlift::DataError);
}

}  // namespace
