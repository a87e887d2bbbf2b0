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

#ifndef BEVLIFT__GEOMETRY_HPP_
#define BEVLIFT__GEOMETRY_HPP_

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "bevlift/tensor.hpp"

namespace bevlift
{

/// Smallest image depth accepted by the perspective divide (meters).
inline constexpr double kMinDepth = 1e-6;

/// Pinhole camera: 3x4 projection in pixels plus the image extent.
struct CameraIntrinsics
{
  Eigen::Matrix<double, 3, 4> matrix = Eigen::Matrix<double, 3, 4>::Zero();
  int image_width = 0;
  int image_height = 0;

  /// Throws InvalidArgument unless the third row is (0,0,1,.), focal entries
  /// are positive and the image has positive extent.
  void validate() const;

  static CameraIntrinsics pinhole(double fx, double fy, double cx, double cy, int width, int height);
};

/// 4x4 homogeneous rigid transform.
struct RigidTransform
{
  Eigen::Matrix4d matrix = Eigen::Matrix4d::Identity();

  void validate() const;

  Eigen::Matrix3d rotation() const { return matrix.topLeftCorner<3, 3>(); }
  Eigen::Vector3d translation() const { return matrix.topRightCorner<3, 1>(); }
  Eigen::Vector3d apply(const Eigen::Vector3d & p) const { return rotation() * p + translation(); }
  RigidTransform inverse() const;
  /// this * other: applies `other` first.
  RigidTransform compose(const RigidTransform & other) const;
};

/// Builds the homogeneous form [[R, t], [0, 1]]. Throws InvalidArgument if R
/// is not a proper rotation within 1e-6.
RigidTransform extend_transform(const Eigen::Matrix3d & rotation, const Eigen::Vector3d & translation);

struct CalibrationSet
{
  CameraIntrinsics intrinsics;
  RigidTransform radar_to_camera;

  void validate() const
  {
    intrinsics.validate();
    radar_to_camera.validate();
  }
};

/// Axis-aligned lattice over the point-cloud range.
struct GridSpec
{
  double x_min = 0, x_max = 0;
  double y_min = 0, y_max = 0;
  double z_min = 0, z_max = 0;
  double cell_x = 0, cell_y = 0, cell_z = 0;

  /// Throws InvalidArgument unless every extent is a positive integer multiple
  /// of its cell size.
  void validate() const;

  std::size_t nx() const;
  std::size_t ny() const;
  std::size_t nz() const;

  /// Strict (open-interval) range test.
  bool contains(double x, double y, double z) const
  {
    return x > x_min && x < x_max && y > y_min && y < y_max && z > z_min && z < z_max;
  }

  Eigen::Vector3d center(std::size_t i, std::size_t j, std::size_t k) const
  {
    return {
      x_min + (static_cast<double>(i) + 0.5) * cell_x,
      y_min + (static_cast<double>(j) + 0.5) * cell_y,
      z_min + (static_cast<double>(k) + 0.5) * cell_z};
  }

  bool operator==(const GridSpec &) const = default;
};

struct ImageProjection
{
  double u = 0;
  double v = 0;
  double d = 0;
  bool valid = false;
};

/// Radar-frame to image projection with the composed 3x4 matrix cached.
class Projector
{
public:
  explicit Projector(const CalibrationSet & calib);

  ImageProjection project(const Eigen::Vector3d & radar_point) const;

  /// Inverse of project for a pixel (u, v) at image depth d.
  Eigen::Vector3d back_project(double u, double v, double d) const;

  const CameraIntrinsics & intrinsics() const { return intrinsics_; }
  const Eigen::Matrix<double, 3, 4> & matrix() const { return composed_; }

private:
  CameraIntrinsics intrinsics_;
  Eigen::Matrix<double, 3, 4> composed_;
  Eigen::Matrix3d inverse_block_;
};

/// Projects N x 3 radar-frame points; `valid` marks positive depth inside the image.
std::vector<ImageProjection> project_points(const Tensor & points, const CalibrationSet & calib);

/// X x Y x Z x 3 tensor of cell centers.
Tensor voxel_centers(const GridSpec & spec);

/// Half-open image bounds [0, W) x [0, H) and positive depth.
bool in_view(const ImageProjection & p, const CameraIntrinsics & intrinsics);

// Calibration text format, one key per line:
//   intrinsic: <12 reals, row-major 3x4>
//   radar_to_camera: <16 reals, row-major 4x4>
//   image_size: <W> <H>
// Blank lines and '#' comments are ignored; any other key is rejected.
CalibrationSet read_calibration(std::istream & is);
void write_calibration(std::ostream & os, const CalibrationSet & calib);
CalibrationSet load_calibration(const std::filesystem::path & path);
void save_calibration(const std::filesystem::path & path, const CalibrationSet & calib);

}  // namespace bevlift

#endif  // BEVLIFT__GEOMETRY_HPP_
