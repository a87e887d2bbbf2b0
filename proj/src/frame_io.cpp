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


#include "bevlift/frame_io.hpp"

#include <algorithm>
#include <fstream>

#include "bevlift/error.hpp"
#include "bevlift/tensor_io.hpp"

namespace bevlift
{

FrameData load_frame(
  const std::filesystem::path & dir, const PointLayout & layout,
  const std::vector<std::string> & class_names)
{
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw DataError("frame directory not found: " + dir.string());
  FrameData frame;
  frame.id = dir.filename().string();
  if (frame.id.empty()) frame.id = dir.parent_path().filename().string();

  if (fs::exists(dir / "radar.bin")) {
    frame.radar = load_point_file(dir / "radar.bin", layout);
  } else if (fs::exists(dir / "radar.csv")) {
    frame.radar = load_point_file(dir / "radar.csv", layout);
  } else {
    throw DataError(dir.string() + ": no radar.bin or radar.csv");
  }
  frame.calib = load_calibration(dir / "calib.txt");

  const auto archive = load_archive(dir / "image.lxta");
  for (std::size_t l = 0;; ++l) {
    const auto it = archive.find("level." + std::to_string(l));
    if (it == archive.end()) break;
    frame.image_levels.push_back(it->second);
  }
  if (frame.image_levels.empty()) throw DataError(dir.string() + ": image.lxta has no level.0");

  if (fs::exists(dir / "depth.lxt")) frame.depth = load_lxt(dir / "depth.lxt");
  if (fs::exists(dir / "gt.csv")) {
    const auto table = load_boxes_csv(dir / "gt.csv", class_names, false);
    for (const auto & [id, rec] : table) {
      frame.boxes.insert(frame.boxes.end(), rec.boxes.begin(), rec.boxes.end());
      frame.tags.insert(rec.tags.begin(), rec.tags.end());
    }
  }
  if (fs::exists(dir / "tags")) {
    std::ifstream is(dir / "tags");
    std::string tag;
    while (std::getline(is, tag)) {
      if (!tag.empty()) frame.tags.insert(tag);
    }
  }
  return frame;
}

void save_frame(
  const std::filesystem::path & dir, const FrameData & frame,
  const std::vector<std::string> & class_names)
{
  std::filesystem::create_directories(dir);
  save_point_file(dir / "radar.bin", frame.radar);
  save_calibration(dir / "calib.txt", frame.calib);
  TensorArchive archive;
  for (std::size_t l = 0; l < frame.image_levels.size(); ++l) {
    archive["level." + std::to_string(l)] = frame.image_levels[l];
  }
  save_archive(dir / "image.lxta", archive);
  if (frame.depth) save_lxt(dir / "depth.lxt", *frame.depth);
  FrameTable table;
  table[frame.id] = {frame.boxes, frame.tags};
  save_boxes_csv(dir / "gt.csv", table, class_names, false);
  if (!frame.tags.empty()) {
    std::ofstream os(dir / "tags");
    for (const auto & t : frame.tags) os << t << '\n';
  }
}

std::vector<std::filesystem::path> list_frame_dirs(const std::filesystem::path & root)
{
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw DataError("frames directory not found: " + root.string());
  std::vector<fs::path> out;
  for (const auto & entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "calib.txt")) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace bevlift
