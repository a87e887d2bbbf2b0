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


#include "bevlift/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "bevlift/error.hpp"

namespace bevlift
{
namespace detail
{
extern const char * const kVodPreset;
extern const char * const kTj4dPreset;
}  // namespace detail

namespace
{

std::string trim(const std::string & s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string & s)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string & key, const std::string & v)
{
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::logic_error &) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

long to_long(const std::string & key, const std::string & v)
{
  const double d = to_double(key, v);
  if (d != std::floor(d)) throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  return static_cast<long>(d);
}

std::size_t to_count(const std::string & key, const std::string & v)
{
  const long n = to_long(key, v);
  if (n <= 0) throw ConfigError("config key '" + key + "' must be positive");
  return static_cast<std::size_t>(n);
}

std::vector<double> to_doubles(const std::string & key, const std::string & v)
{
  std::vector<double> out;
  for (const auto & item : split_list(v)) out.push_back(to_double(key, item));
  return out;
}

std::string join(const std::vector<std::string> & items)
{
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

std::string join(const std::vector<double> & items)
{
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < items.size(); ++i) os << (i ? "," : "") << items[i];
  return os.str();
}

void check_grid(const GridSpec & g, const char * what)
{
  try {
    g.validate();
  } catch (const InvalidArgument & e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

LiftStrategy parse_strategy(const std::string & name)
{
  if (name == "sampling") return LiftStrategy::kSampling;
  if (name == "splatting") return LiftStrategy::kSplatting;
  if (name == "depth-sampling") return LiftStrategy::kDepthSampling;
  if (name == "occ-depth-sampling" || name == "lxl") return LiftStrategy::kOccDepthSampling;
  if (name == "crn-occ-sampling") return LiftStrategy::kCrnOccSampling;
  throw ConfigError("unknown lifting strategy '" + name + "'");
}

std::string strategy_name(LiftStrategy strategy)
{
  switch (strategy) {
    case LiftStrategy::kSampling:
      return "sampling";
    case LiftStrategy::kSplatting:
      return "splatting";
    case LiftStrategy::kDepthSampling:
      return "depth-sampling";
    case LiftStrategy::kOccDepthSampling:
      return "occ-depth-sampling";
    case LiftStrategy::kCrnOccSampling:
      return "crn-occ-sampling";
  }
  return "?";
}

GridSpec PipelineConfig::view_grid() const
{
  return {x_min, x_max, y_min, y_max, z_min, z_max, cell_x, cell_y, cell_z};
}

GridSpec PipelineConfig::pillar_grid() const
{
  return {x_min, x_max, y_min, y_max, z_min, z_max, pillar_size, pillar_size, z_max - z_min};
}

NormalizationStats PipelineConfig::radar_stats() const
{
  NormalizationStats s;
  s.means = radar_mean.empty() ? std::vector<double>(radar_channels.size(), 0.0) : radar_mean;
  s.stds = radar_std.empty() ? std::vector<double>(radar_channels.size(), 1.0) : radar_std;
  return s;
}

std::vector<std::string> PipelineConfig::class_names() const
{
  std::vector<std::string> out;
  for (const auto & c : classes) out.push_back(c.name);
  return out;
}

std::map<int, double> PipelineConfig::nms_thresholds() const
{
  std::map<int, double> out;
  for (std::size_t i = 0; i < classes.size(); ++i) out[static_cast<int>(i)] = classes[i].nms_distance;
  return out;
}

MatchConfig PipelineConfig::match_config() const
{
  MatchConfig m;
  m.iou_mode = iou_mode;
  for (std::size_t i = 0; i < classes.size(); ++i) m.iou_thresholds[static_cast<int>(i)] = classes[i].iou_threshold;
  return m;
}

std::size_t PipelineConfig::radar_bev_channels() const { return layout().feature_channels().size() + 2; }

void PipelineConfig::validate() const
{
  try {
    const auto l = layout();
    (void)l;
  } catch (const InvalidArgument & e) {
    throw ConfigError(std::string("radar.channels: ") + e.what());
  }
  const auto stats = radar_stats();
  if (stats.means.size() != radar_channels.size() || stats.stds.size() != radar_channels.size()) {
    throw ConfigError("radar.mean and radar.std need one value per radar channel");
  }
  const auto skip = layout().spatial_temporal_channels();
  for (std::size_t c = 0; c < stats.stds.size(); ++c) {
    if (!skip.count(c) && !(stats.stds[c] > 0)) throw ConfigError("radar.std must be > 0 for feature channels");
  }
  check_grid(view_grid(), "view grid");
  check_grid(pillar_grid(), "pillar grid");
  if (radar_stride == 0) throw ConfigError("radar.stride must be positive");
  const GridSpec v = view_grid(), p = pillar_grid();
  if (p.nx() != v.nx() * radar_stride || p.ny() != v.ny() * radar_stride) {
    throw ConfigError(
      "pillar grid " + std::to_string(p.nx()) + "x" + std::to_string(p.ny()) + " with stride " +
      std::to_string(radar_stride) + " does not match view grid " + std::to_string(v.nx()) + "x" +
      std::to_string(v.ny()));
  }
  try {
    bins.validate();
  } catch (const InvalidArgument & e) {
    throw ConfigError(std::string("depth bins: ") + e.what());
  }
  if (strides.empty()) throw ConfigError("image.strides must list at least one level");
  for (double s : strides) {
    if (!(s >= 1) || s != std::floor(s)) throw ConfigError("image.strides must be positive integers");
  }
  if (image_channels == 0 || compress_channels == 0 || fuse_channels == 0) {
    throw ConfigError("channel counts must be positive");
  }
  if (classes.empty()) throw ConfigError("classes must list at least one class");
  std::set<std::string> seen;
  for (const auto & c : classes) {
    if (!seen.insert(c.name).second) throw ConfigError("duplicate class '" + c.name + "'");
    if (!(c.iou_threshold > 0) || c.iou_threshold > 1) {
      throw ConfigError("class." + c.name + ".iou must be in (0, 1]");
    }
    if (!(c.nms_distance > 0)) throw ConfigError("class." + c.name + ".nms must be > 0");
  }
  if (min_radius < 0) throw ConfigError("head.min_radius must be >= 0");
  if (top_k <= 0) throw ConfigError("head.top_k must be positive");
  if (!(score_threshold >= 0) || score_threshold >= 1) throw ConfigError("head.score_threshold must be in [0, 1)");
}

PipelineConfig parse_config(std::istream & is, const std::filesystem::path & base_dir)
{
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, trim(line.substr(eq + 1))).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }

  PipelineConfig c;
  std::set<std::string> used;
  const auto get = [&](const std::string & key) -> const std::string * {
    const auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    used.insert(key);
    return &it->second;
  };
  const auto num = [&](const std::string & key, double & out) {
    if (const auto * v = get(key)) out = to_double(key, *v);
  };

  if (const auto * v = get("dataset")) c.dataset = *v;
  if (const auto * v = get("radar.channels")) c.radar_channels = split_list(*v);
  if (const auto * v = get("radar.mean")) c.radar_mean = to_doubles("radar.mean", *v);
  if (const auto * v = get("radar.std")) c.radar_std = to_doubles("radar.std", *v);
  num("range.x_min", c.x_min);
  num("range.x_max", c.x_max);
  num("range.y_min", c.y_min);
  num("range.y_max", c.y_max);
  num("range.z_min", c.z_min);
  num("range.z_max", c.z_max);
  num("pillar.size", c.pillar_size);
  if (const auto * v = get("radar.stride")) c.radar_stride = to_count("radar.stride", *v);
  num("grid.cell_x", c.cell_x);
  num("grid.cell_y", c.cell_y);
  num("grid.cell_z", c.cell_z);
  num("depth.d_min", c.bins.d_min);
  num("depth.d_max", c.bins.d_max);
  if (const auto * v = get("depth.bins")) c.bins.count = to_count("depth.bins", *v);
  if (const auto * v = get("image.strides")) c.strides = to_doubles("image.strides", *v);
  if (const auto * v = get("image.channels")) c.image_channels = to_count("image.channels", *v);
  if (const auto * v = get("lift.strategy")) c.strategy = parse_strategy(*v);
  if (const auto * v = get("compress.channels")) c.compress_channels = to_count("compress.channels", *v);
  if (const auto * v = get("fuse.channels")) c.fuse_channels = to_count("fuse.channels", *v);
  if (const auto * v = get("weights")) {
    const std::filesystem::path w(*v);
    c.weights = w.is_absolute() || base_dir.empty() ? w : base_dir / w;
  }
  const auto * classes = get("classes");
  if (!classes) throw ConfigError("config is missing required key 'classes'");
  for (const auto & name : split_list(*classes)) {
    ClassConfig cc;
    cc.name = name;
    num("class." + name + ".iou", cc.iou_threshold);
    num("class." + name + ".nms", cc.nms_distance);
    c.classes.push_back(cc);
  }
  if (const auto * v = get("head.min_radius")) c.min_radius = static_cast<int>(to_long("head.min_radius", *v));
  if (const auto * v = get("head.top_k")) c.top_k = to_long("head.top_k", *v);
  num("head.score_threshold", c.score_threshold);
  if (const auto * v = get("eval.iou_mode")) {
    if (*v == "bev") {
      c.iou_mode = IouMode::kBev;
    } else if (*v == "3d") {
      c.iou_mode = IouMode::k3d;
    } else {
      throw ConfigError("eval.iou_mode must be 'bev' or '3d'");
    }
  }
  for (const auto & [key, value] : kv) {
    if (!used.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  c.validate();
  return c;
}

PipelineConfig load_config(const std::filesystem::path & path)
{
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  return parse_config(is, path.parent_path());
}

void write_config(std::ostream & os, const PipelineConfig & c)
{
  os << std::setprecision(17);
  os << "dataset = " << c.dataset << '\n';
  os << "radar.channels = " << join(c.radar_channels) << '\n';
  const auto stats = c.radar_stats();
  os << "radar.mean = " << join(stats.means) << '\n';
  os << "radar.std = " << join(stats.stds) << '\n';
  os << "range.x_min = " << c.x_min << "\nrange.x_max = " << c.x_max << '\n';
  os << "range.y_min = " << c.y_min << "\nrange.y_max = " << c.y_max << '\n';
  os << "range.z_min = " << c.z_min << "\nrange.z_max = " << c.z_max << '\n';
  os << "pillar.size = " << c.pillar_size << "\nradar.stride = " << c.radar_stride << '\n';
  os << "grid.cell_x = " << c.cell_x << "\ngrid.cell_y = " << c.cell_y << "\ngrid.cell_z = " << c.cell_z << '\n';
  os << "depth.d_min = " << c.bins.d_min << "\ndepth.d_max = " << c.bins.d_max
     << "\ndepth.bins = " << c.bins.count << '\n';
  os << "image.strides = " << join(c.strides) << "\nimage.channels = " << c.image_channels << '\n';
  os << "lift.strategy = " << strategy_name(c.strategy) << '\n';
  os << "compress.channels = " << c.compress_channels << "\nfuse.channels = " << c.fuse_channels << '\n';
  if (!c.weights.empty()) os << "weights = " << c.weights.string() << '\n';
  os << "classes = " << join(c.class_names()) << '\n';
  for (const auto & cc : c.classes) {
    os << "class." << cc.name << ".iou = " << cc.iou_threshold << '\n';
    os << "class." << cc.name << ".nms = " << cc.nms_distance << '\n';
  }
  os << "head.min_radius = " << c.min_radius << "\nhead.top_k = " << c.top_k
     << "\nhead.score_threshold = " << c.score_threshold << '\n';
  os << "eval.iou_mode = " << (c.iou_mode == IouMode::kBev ? "bev" : "3d") << '\n';
}

PipelineConfig preset_config(const std::string & name)
{
  const char * text = nullptr;
  if (name == "vod") {
    text = detail::kVodPreset;
  } else if (name == "tj4d") {
    text = detail::kTj4dPreset;
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected vod or tj4d)");
  }
  std::istringstream is(text);
  return parse_config(is);
}

}  // namespace bevlift
