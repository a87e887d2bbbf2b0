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


#ifndef BEVLIFT__FRAME_IO_HPP_
#define BEVLIFT__FRAME_IO_HPP_

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bevlift/box.hpp"
#include "bevlift/geometry.hpp"
#include "bevlift/pointcloud.hpp"
#include "bevlift/tensor.hpp"

namespace bevlift
{

// Frame directory layout:
//   radar.bin | radar.csv   raw points in the dataset layout
//   calib.txt               calibration text file
//   image.lxta              image features, keys level.0, level.1, ...
//   depth.lxt               optional H x W rendered depth (0 = unlabeled)
//   gt.csv                  optional ground-truth boxes of this frame
//   tags                    optional, one tag per line
struct FrameData
{
  std::string id;
  Tensor radar{Shape{0, 0}};  ///< N x C raw matrix
  CalibrationSet calib;
  std::vector<Tensor> image_levels;
  std::optional<Tensor> depth;
  std::vector<Box3D> boxes;
  std::set<std::string> tags;
};

/// Reads a frame directory; the id is the directory name. Throws DataError on
/// missing or malformed files.
FrameData load_frame(
  const std::filesystem::path & dir, const PointLayout & layout,
  const std::vector<std::string> & class_names);

void save_frame(
  const std::filesystem::path & dir, const FrameData & frame,
  const std::vector<std::string> & class_names);

/// Sorted subdirectories of `root` that contain calib.txt.
std::vector<std::filesystem::path> list_frame_dirs(const std::filesystem::path & root);

}  // namespace bevlift

#endif  // BEVLIFT__FRAME_IO_HPP_
