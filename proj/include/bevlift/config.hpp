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


#ifndef BEVLIFT__CONFIG_HPP_
#define BEVLIFT__CONFIG_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bevlift/eval.hpp"
#include "bevlift/geometry.hpp"
#include "bevlift/nets.hpp"
#include "bevlift/pointcloud.hpp"

namespace bevlift
{

enum class LiftStrategy
{
  kSampling,
  kSplatting,
  kDepthSampling,
  kOccDepthSampling,
  kCrnOccSampling,
};

LiftStrategy parse_strategy(const std::string & name);
std::string strategy_name(LiftStrategy strategy);

struct ClassConfig
{
  std::string name;
  double iou_threshold = 0.5;
  double nms_distance = 1.0;
};

/// Flat `key = value` configuration. Keys (all optional unless noted):
///
///   dataset                    preset name, informational
///   radar.channels             comma list, e.g. x,y,z,rcs,v_r,v_r_comp,time
///   radar.mean, radar.std      one value per radar channel
///   range.x_min .. range.z_max point-cloud range, meters
///   pillar.size                pillar edge, meters
///   radar.stride               pillar cells per BEV cell
///   grid.cell_x, grid.cell_y, grid.cell_z   voxel size of the view grid
///   depth.d_min, depth.d_max, depth.bins
///   image.strides              comma list of level strides
///   image.channels             image feature channels
///   lift.strategy              sampling | splatting | depth-sampling |
///                              occ-depth-sampling | crn-occ-sampling
///   compress.channels, fuse.channels
///   weights                    weight archive path, relative to the config
///   classes                    comma list of class names (required)
///   class.<name>.iou, class.<name>.nms
///   head.min_radius, head.top_k, head.score_threshold
///   eval.iou_mode              bev | 3d
struct PipelineConfig
{
  std::string dataset = "custom";
  std::vector<std::string> radar_channels = {"x", "y", "z", "rcs", "v_r", "v_r_comp", "time"};
  std::vector<double> radar_mean;
  std::vector<double> radar_std;
  double x_min = 0, x_max = 51.2, y_min = -25.6, y_max = 25.6, z_min = -3, z_max = 2;
  double pillar_size = 0.16;
  std::size_t radar_stride = 2;
  double cell_x = 0.32, cell_y = 0.32, cell_z = 0.5;
  DepthBinSpec bins;
  std::vector<double> strides = {8, 16, 32};
  std::size_t image_channels = 8;
  LiftStrategy strategy = LiftStrategy::kOccDepthSampling;
  std::size_t compress_channels = 16;
  std::size_t fuse_channels = 32;
  std::filesystem::path weights;
  std::vector<ClassConfig> classes;
  int min_radius = 2;
  long top_k = 1000;
  double score_threshold = 0.1;
  IouMode iou_mode = IouMode::k3d;

  /// Throws ConfigError when values are inconsistent, including a pillar
  /// grid whose size divided by radar.stride differs from the view grid.
  void validate() const;

  PointLayout layout() const { return PointLayout(radar_channels); }
  NormalizationStats radar_stats() const;
  GridSpec view_grid() const;
  GridSpec pillar_grid() const;
  std::vector<std::string> class_names() const;
  std::map<int, double> nms_thresholds() const;
  MatchConfig match_config() const;
  /// Pillar features per cell: radar features + mean z + log count.
  std::size_t radar_bev_channels() const;
};

PipelineConfig parse_config(std::istream & is, const std::filesystem::path & base_dir = {});
PipelineConfig load_config(const std::filesystem::path & path);
/// Writes every key in the format read by parse_config.
void write_config(std::ostream & os, const PipelineConfig & config);

/// Built-in presets "vod" and "tj4d"; identical to configs/<name>.cfg.
PipelineConfig preset_config(const std::string & name);

}  // namespace bevlift

#endif  // BEVLIFT__CONFIG_HPP_
