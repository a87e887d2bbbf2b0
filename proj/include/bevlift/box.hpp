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

#ifndef BEVLIFT__BOX_HPP_
#define BEVLIFT__BOX_HPP_

#include <Eigen/Dense>

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace bevlift
{

/// Wraps an angle into (-pi, pi].
double wrap_angle(double radians);

/// Oriented box in the radar frame. `size` is (length, width, height) with
/// length along the heading; `center` is the geometric center.
struct Box3D
{
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d size = Eigen::Vector3d::Ones();
  double yaw = 0.0;
  int class_id = 0;
  double score = 1.0;

  /// Counter-clockwise BEV corners.
  std::array<Eigen::Vector2d, 4> bev_corners() const;
  bool contains(const Eigen::Vector3d & p) const;
  double volume() const { return size.x() * size.y() * size.z(); }
};

using DetectionSet = std::vector<Box3D>;

struct FrameRecord
{
  std::vector<Box3D> boxes;
  std::set<std::string> tags;
};

/// Boxes keyed by frame id.
using FrameTable = std::map<std::string, FrameRecord>;

// CSV schemas:
//   detections:   frame,class,score,x,y,z,l,w,h,yaw
//   ground truth: frame,class,x,y,z,l,w,h,yaw[,tags]
// `class` holds a class name from `class_names` (an integer id is accepted on
// read). `tags` is a ';'-separated list. A detection file without a score
// column reads every score as 1.
void write_boxes_csv(
  std::ostream & os, const FrameTable & table, const std::vector<std::string> & class_names,
  bool with_score);
FrameTable read_boxes_csv(
  std::istream & is, const std::vector<std::string> & class_names, bool with_score);

void save_boxes_csv(
  const std::filesystem::path & path, const FrameTable & table,
  const std::vector<std::string> & class_names, bool with_score);
FrameTable load_boxes_csv(
  const std::filesystem::path & path, const std::vector<std::string> & class_names,
  bool with_score);

}  // namespace bevlift

#endif  // BEVLIFT__BOX_HPP_
