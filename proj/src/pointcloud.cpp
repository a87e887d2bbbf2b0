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

#include "bevlift/pointcloud.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

#include "bevlift/error.hpp"

namespace bevlift
{

PointLayout::PointLayout(std::vector<std::string> channels) : channels_(std::move(channels))
{
  const std::size_t none = channels_.size();
  x_ = y_ = z_ = t_ = none;
  for (std::size_t c = 0; c < channels_.size(); ++c) {
    const auto & name = channels_[c];
    std::size_t * slot = nullptr;
    if (name == "x") {
      slot = &x_;
    } else if (name == "y") {
      slot = &y_;
    } else if (name == "z") {
      slot = &z_;
    } else if (name == "t" || name == "time") {
      slot = &t_;
    }
    if (slot) {
      if (*slot != none) throw ConfigError("point layout: duplicate channel '" + name + "'");
      *slot = c;
    } else {
      features_.push_back(c);
    }
  }
  if (x_ == none || y_ == none || z_ == none) {
    throw ConfigError("point layout must name x, y and z channels");
  }
}

std::set<std::size_t> PointLayout::spatial_temporal_channels() const
{
  std::set<std::size_t> out = {x_, y_, z_};
  if (t_ < channels_.size()) out.insert(t_);
  return out;
}

RadarPointCloud RadarPointCloud::from_matrix(const Tensor & raw, const PointLayout & layout)
{
  if (raw.rank() != 2 || raw.dim(1) != layout.channel_count()) {
    throw DataError(
      "point matrix " + shape_to_string(raw.shape()) + " does not match " +
      std::to_string(layout.channel_count()) + "-channel layout");
  }
  const std::size_t n = raw.dim(0), c = raw.dim(1);
  const auto & feats = layout.feature_channels();
  RadarPointCloud cloud;
  cloud.positions = Tensor({n, 3});
  cloud.features = Tensor({n, feats.size()});
  cloud.timestamps.assign(n, 0.0f);
  for (std::size_t i = 0; i < n; ++i) {
    const float * row = raw.data() + i * c;
    cloud.positions[3 * i] = row[layout.x()];
    cloud.positions[3 * i + 1] = row[layout.y()];
    cloud.positions[3 * i + 2] = row[layout.z()];
    for (std::size_t f = 0; f < feats.size(); ++f) {
      cloud.features[i * feats.size() + f] = row[feats[f]];
    }
    if (layout.time() < c) cloud.timestamps[i] = row[layout.time()];
  }
  for (std::size_t i = 0; i < 3 * n; ++i) {
    if (!std::isfinite(cloud.positions[i])) throw DataError("point cloud has non-finite positions");
  }
  return cloud;
}

Tensor RadarPointCloud::to_matrix(const PointLayout & layout) const
{
  const std::size_t n = size(), c = layout.channel_count();
  const auto & feats = layout.feature_channels();
  if (feats.size() != feature_count()) {
    throw InvalidArgument("layout feature count does not match point cloud");
  }
  Tensor raw({n, c});
  for (std::size_t i = 0; i < n; ++i) {
    float * row = raw.data() + i * c;
    row[layout.x()] = positions[3 * i];
    row[layout.y()] = positions[3 * i + 1];
    row[layout.z()] = positions[3 * i + 2];
    for (std::size_t f = 0; f < feats.size(); ++f) row[feats[f]] = features[i * feats.size() + f];
    if (layout.time() < c) row[layout.time()] = timestamps[i];
  }
  return raw;
}

RadarPointCloud RadarPointCloud::select(const std::vector<std::size_t> & indices) const
{
  const std::size_t f = feature_count();
  RadarPointCloud out;
  out.positions = Tensor({indices.size(), 3});
  out.features = Tensor({indices.size(), f});
  out.timestamps.resize(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const std::size_t i = indices[k];
    for (std::size_t a = 0; a < 3; ++a) out.positions[3 * k + a] = positions[3 * i + a];
    for (std::size_t c = 0; c < f; ++c) out.features[k * f + c] = features[i * f + c];
    out.timestamps[k] = timestamps[i];
  }
  return out;
}

namespace
{

void check_stats(const Tensor & values, const NormalizationStats & stats, const std::set<std::size_t> & skip)
{
  if (values.rank() != 2) throw InvalidArgument("normalize expects an N x C tensor");
  const std::size_t c = values.dim(1);
  if (stats.means.size() != c || stats.stds.size() != c) {
    throw InvalidArgument(
      "invalid stats: " + std::to_string(stats.means.size()) + " means / " +
      std::to_string(stats.stds.size()) + " stds for " + std::to_string(c) + " channels");
  }
  for (std::size_t k = 0; k < c; ++k) {
    if (skip.count(k)) continue;
    if (!(stats.stds[k] > 0.0) || !std::isfinite(stats.means[k])) {
      throw InvalidArgument("invalid stats: channel " + std::to_string(k) + " std must be > 0");
    }
  }
}

}  // namespace

Tensor normalize(
  const Tensor & values, const NormalizationStats & stats, const std::set<std::size_t> & skip_channels)
{
  check_stats(values, stats, skip_channels);
  Tensor out = values;
  const std::size_t n = values.dim(0), c = values.dim(1);
  for (std::size_t k = 0; k < c; ++k) {
    if (skip_channels.count(k)) continue;
    const double mean = stats.means[k], inv = 1.0 / stats.stds[k];
    for (std::size_t i = 0; i < n; ++i) {
      out[i * c + k] = static_cast<float>((static_cast<double>(values[i * c + k]) - mean) * inv);
    }
  }
  return out;
}

Tensor denormalize(
  const Tensor & values, const NormalizationStats & stats, const std::set<std::size_t> & skip_channels)
{
  check_stats(values, stats, skip_channels);
  Tensor out = values;
  const std::size_t n = values.dim(0), c = values.dim(1);
  for (std::size_t k = 0; k < c; ++k) {
    if (skip_channels.count(k)) continue;
    const double mean = stats.means[k], sd = stats.stds[k];
    for (std::size_t i = 0; i < n; ++i) {
      out[i * c + k] = static_cast<float>(static_cast<double>(values[i * c + k]) * sd + mean);
    }
  }
  return out;
}

RadarPointCloud crop_to_range(const RadarPointCloud & cloud, const GridSpec & spec)
{
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (spec.contains(
          cloud.positions[3 * i], cloud.positions[3 * i + 1], cloud.positions[3 * i + 2])) {
      keep.push_back(i);
    }
  }
  return cloud.select(keep);
}

FovFiltered fov_filter(
  const RadarPointCloud & cloud, const std::vector<Box3D> & boxes, const CalibrationSet & calib)
{
  const Projector projector(calib);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Eigen::Vector3d p(
      cloud.positions[3 * i], cloud.positions[3 * i + 1], cloud.positions[3 * i + 2]);
    if (projector.project(p).valid) keep.push_back(i);
  }
  FovFiltered out;
  out.cloud = cloud.select(keep);
  for (const auto & b : boxes) {
    if (projector.project(b.center).valid) out.boxes.push_back(b);
  }
  return out;
}

PillarIndex pillarize(const RadarPointCloud & cloud, const GridSpec & spec)
{
  const auto nx = static_cast<long>(spec.nx());
  const auto ny = static_cast<long>(spec.ny());
  std::map<std::array<int, 2>, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double x = cloud.positions[3 * i], y = cloud.positions[3 * i + 1];
    const auto ix = static_cast<long>(std::floor((x - spec.x_min) / spec.cell_x));
    const auto iy = static_cast<long>(std::floor((y - spec.y_min) / spec.cell_y));
    if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) continue;
    buckets[{static_cast<int>(ix), static_cast<int>(iy)}].push_back(i);
  }
  PillarIndex index;
  index.coords.reserve(buckets.size());
  index.members.reserve(buckets.size());
  for (auto & [coord, members] : buckets) {
    index.coords.push_back(coord);
    index.members.push_back(std::move(members));
  }
  return index;
}

Tensor pillar_features(
  const RadarPointCloud & cloud, const PillarIndex & pillars, const GridSpec & spec)
{
  const std::size_t nx = spec.nx(), ny = spec.ny(), f = cloud.feature_count();
  const std::size_t channels = f + 2;
  Tensor out({nx, ny, channels});
  for (std::size_t p = 0; p < pillars.size(); ++p) {
    const auto [ix, iy] = pillars.coords[p];
    const auto & members = pillars.members[p];
    float * cell = out.data() + (static_cast<std::size_t>(ix) * ny + iy) * channels;
    std::vector<double> sum(f + 1, 0.0);
    for (auto i : members) {
      for (std::size_t c = 0; c < f; ++c) sum[c] += cloud.features[i * f + c];
      sum[f] += cloud.positions[3 * i + 2];
    }
    const double inv = 1.0 / static_cast<double>(members.size());
    for (std::size_t c = 0; c <= f; ++c) cell[c] = static_cast<float>(sum[c] * inv);
    cell[f + 1] = static_cast<float>(std::log1p(static_cast<double>(members.size())));
  }
  return out;
}

FlippedFrame horizontal_flip(
  const RadarPointCloud & cloud, const std::vector<Box3D> & boxes, const Tensor & image)
{
  FlippedFrame out{cloud, boxes, image};
  for (std::size_t i = 0; i < out.cloud.size(); ++i) {
    out.cloud.positions[3 * i + 1] = -out.cloud.positions[3 * i + 1];
  }
  for (auto & b : out.boxes) {
    b.center.y() = -b.center.y();
    b.yaw = wrap_angle(-b.yaw);
  }
  if (!image.empty()) {
    if (image.rank() != 3) throw InvalidArgument("horizontal_flip expects an H x W x C image");
    const std::size_t h = image.dim(0), w = image.dim(1), c = image.dim(2);
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t col = 0; col < w; ++col) {
        const float * src = image.data() + (r * w + (w - 1 - col)) * c;
        std::copy(src, src + c, out.image.data() + (r * w + col) * c);
      }
    }
  }
  return out;
}

Tensor flip_bev(const Tensor & bev)
{
  if (bev.rank() != 3) throw InvalidArgument("flip_bev expects an X x Y x C tensor");
  const std::size_t nx = bev.dim(0), ny = bev.dim(1), c = bev.dim(2);
  Tensor out(bev.shape());
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const float * src = bev.data() + (i * ny + (ny - 1 - j)) * c;
      std::copy(src, src + c, out.data() + (i * ny + j) * c);
    }
  }
  return out;
}

Tensor load_point_file(const std::filesystem::path & path, const PointLayout & layout)
{
  const std::size_t c = layout.channel_count();
  if (path.extension() == ".csv") {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open " + path.string());
    std::string line;
    if (!std::getline(is, line)) throw DataError(path.string() + ": empty CSV");
    std::vector<std::string> header;
    {
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        header.push_back(cell);
      }
    }
    std::vector<std::size_t> source(c);
    for (std::size_t k = 0; k < c; ++k) {
      const auto it = std::find(header.begin(), header.end(), layout.channels()[k]);
      if (it == header.end()) {
        throw DataError(path.string() + ": missing column '" + layout.channels()[k] + "'");
      }
      source[k] = static_cast<std::size_t>(it - header.begin());
    }
    std::vector<float> values;
    std::size_t rows = 0;
    while (std::getline(is, line)) {
      if (line.empty() || line == "\r") continue;
      std::vector<double> row;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) {
        try {
          row.push_back(std::stod(cell));
        } catch (const std::exception &) {
          throw DataError(path.string() + ": bad number '" + cell + "'");
        }
      }
      if (row.size() != header.size()) throw DataError(path.string() + ": ragged CSV row");
      for (std::size_t k = 0; k < c; ++k) values.push_back(static_cast<float>(row[source[k]]));
      ++rows;
    }
    return Tensor({rows, c}, std::move(values));
  }

  std::ifstream is(path, std::ios::binary | std::ios::ate);
  if (!is) throw DataError("cannot open " + path.string());
  const auto bytes = static_cast<std::size_t>(is.tellg());
  if (bytes % (4 * c) != 0) {
    throw DataError(
      path.string() + ": size " + std::to_string(bytes) + " is not a multiple of " +
      std::to_string(c) + " float32 channels");
  }
  is.seekg(0);
  std::vector<unsigned char> buffer(bytes);
  is.read(reinterpret_cast<char *>(buffer.data()), static_cast<std::streamsize>(bytes));
  std::vector<float> values(bytes / 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint32_t bits = static_cast<std::uint32_t>(buffer[4 * i]) |
                               (static_cast<std::uint32_t>(buffer[4 * i + 1]) << 8) |
                               (static_cast<std::uint32_t>(buffer[4 * i + 2]) << 16) |
                               (static_cast<std::uint32_t>(buffer[4 * i + 3]) << 24);
    values[i] = std::bit_cast<float>(bits);
  }
  const std::size_t rows = values.size() / c;
  return Tensor({rows, c}, std::move(values));
}

void save_point_file(const std::filesystem::path & path, const Tensor & raw)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(raw[i]);
    const char bytes[4] = {
      static_cast<char>(bits & 0xffu), static_cast<char>((bits >> 8) & 0xffu),
      static_cast<char>((bits >> 16) & 0xffu), static_cast<char>((bits >> 24) & 0xffu)};
    os.write(bytes, 4);
  }
}

}  // namespace bevlift
