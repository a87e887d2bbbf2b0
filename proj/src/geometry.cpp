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

#include "bevlift/geometry.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "bevlift/error.hpp"
#include "bevlift/parallel.hpp"

namespace bevlift
{
namespace
{

constexpr double kOrthoTolerance = 1e-6;

void check_rotation(const Eigen::Matrix3d & r)
{
  const double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  const double det = r.determinant();
  if (!r.allFinite() || ortho > kOrthoTolerance || std::abs(det - 1.0) >= kOrthoTolerance) {
    std::ostringstream os;
    os << "invalid calibration: rotation is not orthonormal (|R^T R - I| = " << ortho
       << ", det = " << det << ")";
    throw InvalidArgument(os.str());
  }
}

std::size_t cell_count(double lo, double hi, double cell, const char * axis)
{
  const double extent = hi - lo;
  if (!(cell > 0.0) || !(extent > 0.0)) {
    throw InvalidArgument(std::string("grid axis ") + axis + ": extent and cell must be positive");
  }
  const double ratio = extent / cell;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(n * cell - extent) > 1e-6 * std::max(1.0, extent)) {
    std::ostringstream os;
    os << "grid axis " << axis << ": extent " << extent << " is not a multiple of cell " << cell;
    throw InvalidArgument(os.str());
  }
  return static_cast<std::size_t>(n);
}

}  // namespace

void CameraIntrinsics::validate() const
{
  if (!matrix.allFinite()) throw InvalidArgument("invalid calibration: non-finite intrinsics");
  if (matrix(2, 0) != 0.0 || matrix(2, 1) != 0.0 || matrix(2, 2) != 1.0) {
    throw InvalidArgument("invalid calibration: intrinsic third row must be (0, 0, 1, .)");
  }
  if (!(matrix(0, 0) > 0.0) || !(matrix(1, 1) > 0.0)) {
    throw InvalidArgument("invalid calibration: focal lengths must be positive");
  }
  if (image_width <= 0 || image_height <= 0) {
    throw InvalidArgument("invalid calibration: image size must be positive");
  }
}

CameraIntrinsics CameraIntrinsics::pinhole(
  double fx, double fy, double cx, double cy, int width, int height)
{
  CameraIntrinsics k;
  k.matrix << fx, 0, cx, 0, 0, fy, cy, 0, 0, 0, 1, 0;
  k.image_width = width;
  k.image_height = height;
  return k;
}

void RigidTransform::validate() const
{
  if (!matrix.allFinite()) throw InvalidArgument("invalid calibration: non-finite transform");
  if (matrix(3, 0) != 0.0 || matrix(3, 1) != 0.0 || matrix(3, 2) != 0.0 || matrix(3, 3) != 1.0) {
    throw InvalidArgument("invalid calibration: transform bottom row must be (0, 0, 0, 1)");
  }
  check_rotation(rotation());
}

RigidTransform RigidTransform::inverse() const
{
  RigidTransform out;
  const Eigen::Matrix3d rt = rotation().transpose();
  out.matrix.topLeftCorner<3, 3>() = rt;
  out.matrix.topRightCorner<3, 1>() = -rt * translation();
  return out;
}

RigidTransform RigidTransform::compose(const RigidTransform & other) const
{
  RigidTransform out;
  out.matrix = matrix * other.matrix;
  return out;
}

RigidTransform extend_transform(const Eigen::Matrix3d & rotation, const Eigen::Vector3d & translation)
{
  check_rotation(rotation);
  RigidTransform out;
  out.matrix.setIdentity();
  out.matrix.topLeftCorner<3, 3>() = rotation;
  out.matrix.topRightCorner<3, 1>() = translation;
  return out;
}

void GridSpec::validate() const
{
  nx();
  ny();
  nz();
}

std::size_t GridSpec::nx() const { return cell_count(x_min, x_max, cell_x, "x"); }
std::size_t GridSpec::ny() const { return cell_count(y_min, y_max, cell_y, "y"); }
std::size_t GridSpec::nz() const { return cell_count(z_min, z_max, cell_z, "z"); }

Projector::Projector(const CalibrationSet & calib) : intrinsics_(calib.intrinsics)
{
  calib.validate();
  composed_ = calib.intrinsics.matrix * calib.radar_to_camera.matrix;
  inverse_block_ = composed_.topLeftCorner<3, 3>().inverse();
}

ImageProjection Projector::project(const Eigen::Vector3d & radar_point) const
{
  const Eigen::Vector3d h = composed_.topLeftCorner<3, 3>() * radar_point + composed_.col(3);
  ImageProjection p;
  p.d = h.z();
  if (p.d > kMinDepth) {
    p.u = h.x() / p.d;
    p.v = h.y() / p.d;
  }
  p.valid = in_view(p, intrinsics_);
  return p;
}

Eigen::Vector3d Projector::back_project(double u, double v, double d) const
{
  const Eigen::Vector3d h(u * d, v * d, d);
  return inverse_block_ * (h - composed_.col(3));
}

std::vector<ImageProjection> project_points(const Tensor & points, const CalibrationSet & calib)
{
  if (points.rank() != 2 || points.dim(1) != 3) {
    throw InvalidArgument("project_points expects N x 3 points, got " + shape_to_string(points.shape()));
  }
  const Projector projector(calib);
  std::vector<ImageProjection> out(points.dim(0));
  parallel_for(0, out.size(), [&](std::size_t n) {
    out[n] = projector.project({points[3 * n], points[3 * n + 1], points[3 * n + 2]});
  });
  return out;
}

Tensor voxel_centers(const GridSpec & spec)
{
  const std::size_t nx = spec.nx(), ny = spec.ny(), nz = spec.nz();
  Tensor out({nx, ny, nz, 3});
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t k = 0; k < nz; ++k) {
        const Eigen::Vector3d c = spec.center(i, j, k);
        const std::size_t o = ((i * ny + j) * nz + k) * 3;
        out[o] = static_cast<float>(c.x());
        out[o + 1] = static_cast<float>(c.y());
        out[o + 2] = static_cast<float>(c.z());
      }
    }
  }
  return out;
}

bool in_view(const ImageProjection & p, const CameraIntrinsics & intrinsics)
{
  return p.d > kMinDepth && p.u >= 0.0 && p.v >= 0.0 &&
         p.u < static_cast<double>(intrinsics.image_width) &&
         p.v < static_cast<double>(intrinsics.image_height);
}

CalibrationSet read_calibration(std::istream & is)
{
  CalibrationSet calib;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  auto read_reals = [&](std::istringstream & fields, std::size_t count, const std::string & key) {
    std::vector<double> values;
    double v = 0;
    while (fields >> v) values.push_back(v);
    if (!fields.eof() || values.size() != count) {
      throw DataError(
        "calibration line " + std::to_string(line_no) + ": '" + key + "' needs exactly " +
        std::to_string(count) + " reals");
    }
    return values;
  };
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw DataError("calibration line " + std::to_string(line_no) + ": missing ':'");
    }
    std::string key = line.substr(first, colon - first);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    std::istringstream fields(line.substr(colon + 1));
    if (!seen.insert(key).second) {
      throw DataError("calibration: duplicate key '" + key + "'");
    }
    if (key == "intrinsic") {
      const auto v = read_reals(fields, 12, key);
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 4; ++c) calib.intrinsics.matrix(r, c) = v[r * 4 + c];
      }
    } else if (key == "radar_to_camera") {
      const auto v = read_reals(fields, 16, key);
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) calib.radar_to_camera.matrix(r, c) = v[r * 4 + c];
      }
    } else if (key == "image_size") {
      long w = 0, h = 0;
      std::string extra;
      if (!(fields >> w >> h) || (fields >> extra)) {
        throw DataError("calibration line " + std::to_string(line_no) + ": image_size needs W H");
      }
      calib.intrinsics.image_width = static_cast<int>(w);
      calib.intrinsics.image_height = static_cast<int>(h);
    } else {
      throw DataError("calibration: unknown key '" + key + "'");
    }
  }
  for (const char * required : {"intrinsic", "radar_to_camera", "image_size"}) {
    if (!seen.count(required)) {
      throw DataError(std::string("calibration: missing key '") + required + "'");
    }
  }
  try {
    calib.validate();
  } catch (const InvalidArgument & e) {
    throw DataError(e.what());
  }
  return calib;
}

void write_calibration(std::ostream & os, const CalibrationSet & calib)
{
  os << std::setprecision(17);
  os << "intrinsic:";
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) os << ' ' << calib.intrinsics.matrix(r, c);
  }
  os << "\nradar_to_camera:";
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) os << ' ' << calib.radar_to_camera.matrix(r, c);
  }
  os << "\nimage_size: " << calib.intrinsics.image_width << ' ' << calib.intrinsics.image_height
     << '\n';
}

CalibrationSet load_calibration(const std::filesystem::path & path)
{
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path.string());
  try {
    return read_calibration(is);
  } catch (const DataError & e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void save_calibration(const std::filesystem::path & path, const CalibrationSet & calib)
{
  std::ofstream os(path);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  write_calibration(os, calib);
}

}  // namespace bevlift
