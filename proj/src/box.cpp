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

#include "bevlift/box.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "bevlift/error.hpp"

namespace bevlift
{
namespace
{

std::vector<std::string> split(const std::string & s, char sep)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_real(const std::string & s, int line_no)
{
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw DataError("box CSV line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
}

int parse_class(const std::string & s, const std::vector<std::string> & names, int line_no)
{
  const auto it = std::find(names.begin(), names.end(), s);
  if (it != names.end()) return static_cast<int>(it - names.begin());
  int id = -1;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
  if (ec == std::errc() && ptr == s.data() + s.size() && id >= 0 &&
      id < static_cast<int>(names.size())) {
    return id;
  }
  throw DataError("box CSV line " + std::to_string(line_no) + ": unknown class '" + s + "'");
}

}  // namespace

double wrap_angle(double radians)
{
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::fmod(radians, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  if (a > std::numbers::pi) a -= kTwoPi;
  return a;
}

std::array<Eigen::Vector2d, 4> Box3D::bev_corners() const
{
  const double c = std::cos(yaw), s = std::sin(yaw);
  const double hl = 0.5 * size.x(), hw = 0.5 * size.y();
  const std::array<Eigen::Vector2d, 4> local = {
    Eigen::Vector2d(hl, hw), Eigen::Vector2d(-hl, hw), Eigen::Vector2d(-hl, -hw),
    Eigen::Vector2d(hl, -hw)};
  std::array<Eigen::Vector2d, 4> out;
  for (int i = 0; i < 4; ++i) {
    out[i] = Eigen::Vector2d(
      center.x() + c * local[i].x() - s * local[i].y(),
      center.y() + s * local[i].x() + c * local[i].y());
  }
  return out;
}

bool Box3D::contains(const Eigen::Vector3d & p) const
{
  const Eigen::Vector3d d = p - center;
  const double c = std::cos(yaw), s = std::sin(yaw);
  const double lx = c * d.x() + s * d.y();
  const double ly = -s * d.x() + c * d.y();
  return std::abs(lx) <= 0.5 * size.x() && std::abs(ly) <= 0.5 * size.y() &&
         std::abs(d.z()) <= 0.5 * size.z();
}

void write_boxes_csv(
  std::ostream & os, const FrameTable & table, const std::vector<std::string> & class_names,
  bool with_score)
{
  os << (with_score ? "frame,class,score,x,y,z,l,w,h,yaw\n" : "frame,class,x,y,z,l,w,h,yaw,tags\n");
  os << std::setprecision(9);
  for (const auto & [frame, record] : table) {
    std::string tags;
    for (const auto & t : record.tags) tags += (tags.empty() ? "" : ";") + t;
    for (const auto & b : record.boxes) {
      if (b.class_id < 0 || b.class_id >= static_cast<int>(class_names.size())) {
        throw InvalidArgument("box class id " + std::to_string(b.class_id) + " has no name");
      }
      os << frame << ',' << class_names[b.class_id] << ',';
      if (with_score) os << b.score << ',';
      os << b.center.x() << ',' << b.center.y() << ',' << b.center.z() << ',' << b.size.x() << ','
         << b.size.y() << ',' << b.size.z() << ',' << b.yaw;
      if (!with_score) os << ',' << tags;
      os << '\n';
    }
  }
}

FrameTable read_boxes_csv(
  std::istream & is, const std::vector<std::string> & class_names, bool with_score)
{
  std::string line;
  if (!std::getline(is, line)) throw DataError("box CSV: empty file");
  const auto header = split(line, ',');
  auto column = [&](const std::string & name) -> int {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  std::vector<std::string> required = {"frame", "class", "x", "y", "z", "l", "w", "h", "yaw"};
  std::map<std::string, int> col;
  for (const auto & name : required) {
    col[name] = column(name);
    if (col[name] < 0) throw DataError("box CSV: missing column '" + name + "'");
  }
  const int tags_col = column("tags");
  const int score_col = with_score ? column("score") : -1;

  FrameTable table;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) {
      throw DataError("box CSV line " + std::to_string(line_no) + ": wrong field count");
    }
    auto & record = table[fields[col["frame"]]];
    if (tags_col >= 0 && !fields[tags_col].empty()) {
      for (const auto & t : split(fields[tags_col], ';')) {
        if (!t.empty()) record.tags.insert(t);
      }
    }
    Box3D b;
    b.class_id = parse_class(fields[col["class"]], class_names, line_no);
    b.center = {
      parse_real(fields[col["x"]], line_no), parse_real(fields[col["y"]], line_no),
      parse_real(fields[col["z"]], line_no)};
    b.size = {
      parse_real(fields[col["l"]], line_no), parse_real(fields[col["w"]], line_no),
      parse_real(fields[col["h"]], line_no)};
    b.yaw = parse_real(fields[col["yaw"]], line_no);
    b.score = score_col >= 0 ? parse_real(fields[score_col], line_no) : 1.0;
    record.boxes.push_back(b);
  }
  return table;
}

void save_boxes_csv(
  const std::filesystem::path & path, const FrameTable & table,
  const std::vector<std::string> & class_names, bool with_score)
{
  std::ofstream os(path);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  write_boxes_csv(os, table, class_names, with_score);
}

FrameTable load_boxes_csv(
  const std::filesystem::path & path, const std::vector<std::string> & class_names,
  bool with_score)
{
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path.string());
  try {
    return read_boxes_csv(is, class_names, with_score);
  } catch (const DataError & e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace bevlift
