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

#include "bevlift/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "bevlift/error.hpp"
#include "bevlift/parallel.hpp"

namespace bevlift
{
namespace
{

constexpr std::size_t kVoxelsPerTask = 1024;

/// Runs body(i) over [0, n) in chunks of kVoxelsPerTask.
template <typename Fn>
void chunked_for(std::size_t n, Fn && body)
{
  const std::size_t tasks = (n + kVoxelsPerTask - 1) / kVoxelsPerTask;
  parallel_for(0, tasks, [&](std::size_t t) {
    const std::size_t end = std::min(n, (t + 1) * kVoxelsPerTask);
    for (std::size_t i = t * kVoxelsPerTask; i < end; ++i) body(i);
  });
}

bool far_outside(double u, double v, long w, long h)
{
  return !std::isfinite(u) || !std::isfinite(v) || u < -2.0 || v < -2.0 ||
         u > static_cast<double>(w) + 1.0 || v > static_cast<double>(h) + 1.0;
}

/// out[c] += sum of in-bounds corner weights * map; (u, v) already finite.
void bilinear_into(
  const float * map, long h, long w, long c, double u, double v, double scale, double * out)
{
  const double x0f = std::floor(u), y0f = std::floor(v);
  const double fx = u - x0f, fy = v - y0f;
  const long x0 = static_cast<long>(x0f), y0 = static_cast<long>(y0f);
  const long xs[2] = {x0, x0 + 1};
  const long ys[2] = {y0, y0 + 1};
  const double wx[2] = {1.0 - fx, fx};
  const double wy[2] = {1.0 - fy, fy};
  for (int a = 0; a < 2; ++a) {
    if (ys[a] < 0 || ys[a] >= h) continue;
    for (int b = 0; b < 2; ++b) {
      if (xs[b] < 0 || xs[b] >= w) continue;
      const double wt = wy[a] * wx[b] * scale;
      if (wt == 0.0) continue;
      const float * px = map + (ys[a] * w + xs[b]) * c;
      for (long k = 0; k < c; ++k) out[k] += wt * px[k];
    }
  }
}

double trilinear_value(const float * vol, long h, long w, long d, double u, double v, double b)
{
  const double x0f = std::floor(u), y0f = std::floor(v), z0f = std::floor(b);
  const double fx = u - x0f, fy = v - y0f, fz = b - z0f;
  const long x0 = static_cast<long>(x0f), y0 = static_cast<long>(y0f), z0 = static_cast<long>(z0f);
  const double wx[2] = {1.0 - fx, fx};
  const double wy[2] = {1.0 - fy, fy};
  const double wz[2] = {1.0 - fz, fz};
  double acc = 0.0;
  for (int a = 0; a < 2; ++a) {
    const long r = y0 + a;
    if (r < 0 || r >= h) continue;
    for (int bb = 0; bb < 2; ++bb) {
      const long col = x0 + bb;
      if (col < 0 || col >= w) continue;
      for (int e = 0; e < 2; ++e) {
        const long k = z0 + e;
        if (k < 0 || k >= d) continue;
        const double wt = wy[a] * wx[bb] * wz[e];
        if (wt != 0.0) acc += wt * vol[(r * w + col) * d + k];
      }
    }
  }
  return acc;
}

void check_levels(const std::vector<FeatureLevel> & levels, const char * op)
{
  if (levels.empty()) throw InvalidArgument(std::string(op) + ": no levels");
  const std::size_t c = levels.front().map.rank() == 3 ? levels.front().map.dim(2) : 0;
  for (const auto & level : levels) {
    if (level.map.rank() != 3 || level.map.dim(2) != c || level.map.dim(0) == 0 ||
        level.map.dim(1) == 0) {
      throw InvalidArgument(
        std::string(op) + ": levels must be non-empty H x W x C with equal C, got " +
        shape_to_string(level.map.shape()));
    }
    if (!(level.stride > 0.0)) throw InvalidArgument(std::string(op) + ": stride must be > 0");
  }
}

Shape grid_shape_of(const Tensor & centers)
{
  if (centers.rank() != 4 || centers.dim(3) != 3) {
    throw InvalidArgument("voxel centers must be X x Y x Z x 3, got " + shape_to_string(centers.shape()));
  }
  return {centers.dim(0), centers.dim(1), centers.dim(2)};
}

double clamp_to_lattice(double x, std::size_t n)
{
  return std::clamp(x, 0.0, static_cast<double>(n) - 1.0);
}

}  // namespace

BilinearSample bilinear_sample(const Tensor & featmap, double u, double v, bool with_grad)
{
  if (featmap.rank() != 3) throw InvalidArgument("bilinear_sample expects an H x W x C map");
  const long h = static_cast<long>(featmap.dim(0));
  const long w = static_cast<long>(featmap.dim(1));
  const long c = static_cast<long>(featmap.dim(2));
  BilinearSample out;
  out.value.assign(c, 0.0);
  if (with_grad) {
    out.d_du.assign(c, 0.0);
    out.d_dv.assign(c, 0.0);
  }
  if (far_outside(u, v, w, h)) return out;

  const double x0f = std::floor(u), y0f = std::floor(v);
  const double fx = u - x0f, fy = v - y0f;
  const long x0 = static_cast<long>(x0f), y0 = static_cast<long>(y0f);
  struct Corner
  {
    long row, col;
    double weight, du, dv;
  };
  const Corner corners[4] = {
    {y0, x0, (1 - fx) * (1 - fy), -(1 - fy), -(1 - fx)},
    {y0, x0 + 1, fx * (1 - fy), (1 - fy), -fx},
    {y0 + 1, x0, (1 - fx) * fy, -fy, (1 - fx)},
    {y0 + 1, x0 + 1, fx * fy, fy, fx},
  };
  for (const auto & k : corners) {
    if (k.row < 0 || k.row >= h || k.col < 0 || k.col >= w) continue;
    const float * px = featmap.data() + (k.row * w + k.col) * c;
    for (long ch = 0; ch < c; ++ch) {
      out.value[ch] += k.weight * px[ch];
      if (with_grad) {
        out.d_du[ch] += k.du * px[ch];
        out.d_dv[ch] += k.dv * px[ch];
      }
    }
    out.taps.push_back({k.row, k.col, k.weight});
  }
  return out;
}

TrilinearSample trilinear_sample(const Tensor & volume, double u, double v, double b, bool with_grad)
{
  if (volume.rank() != 3) throw InvalidArgument("trilinear_sample expects an H x W x D volume");
  const long h = static_cast<long>(volume.dim(0));
  const long w = static_cast<long>(volume.dim(1));
  const long d = static_cast<long>(volume.dim(2));
  TrilinearSample out;
  if (far_outside(u, v, w, h) || !std::isfinite(b) || b < -2.0 || b > static_cast<double>(d) + 1.0) {
    return out;
  }
  const double x0f = std::floor(u), y0f = std::floor(v), z0f = std::floor(b);
  const double fx = u - x0f, fy = v - y0f, fz = b - z0f;
  const long x0 = static_cast<long>(x0f), y0 = static_cast<long>(y0f), z0 = static_cast<long>(z0f);
  for (int a = 0; a < 2; ++a) {
    const long r = y0 + a;
    if (r < 0 || r >= h) continue;
    const double wy = a ? fy : 1 - fy, dwy = a ? 1.0 : -1.0;
    for (int bb = 0; bb < 2; ++bb) {
      const long col = x0 + bb;
      if (col < 0 || col >= w) continue;
      const double wx = bb ? fx : 1 - fx, dwx = bb ? 1.0 : -1.0;
      for (int e = 0; e < 2; ++e) {
        const long k = z0 + e;
        if (k < 0 || k >= d) continue;
        const double wz = e ? fz : 1 - fz, dwz = e ? 1.0 : -1.0;
        const double p = volume[static_cast<std::size_t>((r * w + col) * d + k)];
        out.value += wx * wy * wz * p;
        if (with_grad) {
          out.d_du += dwx * wy * wz * p;
          out.d_dv += wx * dwy * wz * p;
          out.d_db += wx * wy * dwz * p;
        }
        out.taps.push_back({r, col, k, wx * wy * wz});
      }
    }
  }
  return out;
}

std::vector<ImageProjection> project_voxels(const Tensor & centers, const CalibrationSet & calib)
{
  const Shape grid = grid_shape_of(centers);
  return project_points(centers.reshaped({element_count(grid), 3}), calib);
}

Tensor sample_lift(
  const std::vector<FeatureLevel> & levels, const Tensor & centers, const CalibrationSet & calib)
{
  return sample_lift(levels, project_voxels(centers, calib), grid_shape_of(centers));
}

Tensor sample_lift(
  const std::vector<FeatureLevel> & levels, const std::vector<ImageProjection> & projections,
  const Shape & grid_shape)
{
  check_levels(levels, "sample_lift");
  const std::size_t voxels = element_count(grid_shape);
  if (projections.size() != voxels) throw InvalidArgument("sample_lift: projection count mismatch");
  const std::size_t c = levels.front().map.dim(2);
  const std::size_t nl = levels.size();
  Tensor out({nl, grid_shape[0], grid_shape[1], grid_shape[2], c});
  chunked_for(voxels, [&](std::size_t n) {
    const auto & p = projections[n];
    if (!p.valid) return;
    std::vector<double> acc(c);
    for (std::size_t l = 0; l < nl; ++l) {
      const auto & m = levels[l].map;
      const double u = clamp_to_lattice(p.u / levels[l].stride, m.dim(1));
      const double v = clamp_to_lattice(p.v / levels[l].stride, m.dim(0));
      std::fill(acc.begin(), acc.end(), 0.0);
      bilinear_into(
        m.data(), static_cast<long>(m.dim(0)), static_cast<long>(m.dim(1)), static_cast<long>(c),
        u, v, 1.0, acc.data());
      float * dst = out.data() + (l * voxels + n) * c;
      for (std::size_t k = 0; k < c; ++k) dst[k] = static_cast<float>(acc[k]);
    }
  });
  return out;
}

Tensor trilinear_sample_depth(
  const std::vector<FeatureLevel> & depth_maps, const Tensor & centers,
  const CalibrationSet & calib, const DepthBinSpec & bins)
{
  return trilinear_sample_depth(depth_maps, project_voxels(centers, calib), grid_shape_of(centers), bins);
}

Tensor trilinear_sample_depth(
  const std::vector<FeatureLevel> & depth_maps, const std::vector<ImageProjection> & projections,
  const Shape & grid_shape, const DepthBinSpec & bins)
{
  check_levels(depth_maps, "trilinear_sample_depth");
  bins.validate();
  const std::size_t d = depth_maps.front().map.dim(2);
  if (d != bins.count) {
    throw InvalidArgument(
      "trilinear_sample_depth: depth maps carry " + std::to_string(d) + " bins, spec has " +
      std::to_string(bins.count));
  }
  const std::size_t voxels = element_count(grid_shape);
  if (projections.size() != voxels) {
    throw InvalidArgument("trilinear_sample_depth: projection count mismatch");
  }
  const std::size_t nl = depth_maps.size();
  const double b_hi = static_cast<double>(d) - 0.5;
  Tensor out({nl, grid_shape[0], grid_shape[1], grid_shape[2]});
  chunked_for(voxels, [&](std::size_t n) {
    const auto & p = projections[n];
    if (!p.valid) return;
    const double b = bins.coordinate(p.d);
    if (b < -0.5 || b > b_hi) return;
    const double bc = clamp_to_lattice(b, d);
    for (std::size_t l = 0; l < nl; ++l) {
      const auto & m = depth_maps[l].map;
      const double u = clamp_to_lattice(p.u / depth_maps[l].stride, m.dim(1));
      const double v = clamp_to_lattice(p.v / depth_maps[l].stride, m.dim(0));
      out[l * voxels + n] = static_cast<float>(trilinear_value(
        m.data(), static_cast<long>(m.dim(0)), static_cast<long>(m.dim(1)),
        static_cast<long>(d), u, v, bc));
    }
  });
  return out;
}

Tensor depth_weight(const Tensor & features, const Tensor & sampled_depth)
{
  if (features.rank() != 5 || sampled_depth.rank() != 4 ||
      !std::equal(sampled_depth.shape().begin(), sampled_depth.shape().end(), features.shape().begin())) {
    throw InvalidArgument(
      "depth_weight: shape mismatch " + shape_to_string(features.shape()) + " vs " +
      shape_to_string(sampled_depth.shape()));
  }
  const std::size_t c = features.dim(4);
  Tensor out(features.shape());
  chunked_for(sampled_depth.size(), [&](std::size_t n) {
    const double wgt = sampled_depth[n];
    for (std::size_t k = 0; k < c; ++k) {
      out[n * c + k] = static_cast<float>(features[n * c + k] * wgt);
    }
  });
  return out;
}

Tensor occupancy_weight(const Tensor & features, const Tensor & occupancy)
{
  if (features.rank() != 5 || occupancy.rank() != 3 ||
      !std::equal(occupancy.shape().begin(), occupancy.shape().end(), features.shape().begin() + 1)) {
    throw InvalidArgument(
      "occupancy_weight: shape mismatch " + shape_to_string(features.shape()) + " vs " +
      shape_to_string(occupancy.shape()));
  }
  const std::size_t voxels = occupancy.size();
  const std::size_t c = features.dim(4);
  Tensor out(features.shape());
  chunked_for(voxels * features.dim(0), [&](std::size_t n) {
    const double wgt = occupancy[n % voxels];
    for (std::size_t k = 0; k < c; ++k) {
      out[n * c + k] = static_cast<float>(features[n * c + k] * wgt);
    }
  });
  return out;
}

Tensor height_compress(
  const Tensor & depth_assisted, const Tensor & occupancy_assisted, const Conv1x1Weights & w)
{
  if (depth_assisted.rank() != 5 || depth_assisted.shape() != occupancy_assisted.shape()) {
    throw InvalidArgument(
      "height_compress: shape mismatch " + shape_to_string(depth_assisted.shape()) + " vs " +
      shape_to_string(occupancy_assisted.shape()));
  }
  w.validate();
  const std::size_t nl = depth_assisted.dim(0), nx = depth_assisted.dim(1);
  const std::size_t ny = depth_assisted.dim(2), nz = depth_assisted.dim(3);
  const std::size_t c = depth_assisted.dim(4);
  const std::size_t flat = nz * 2 * c;
  if (w.in_channels() != flat) {
    throw InvalidArgument(
      "height_compress: weight expects " + std::to_string(w.in_channels()) + " inputs, volume gives " +
      std::to_string(flat));
  }
  const std::size_t cells = nx * ny;
  const std::size_t level_stride = cells * nz * c;
  const std::size_t cout = w.out_channels();
  Tensor out({nx, ny, cout});
  parallel_for(0, cells, [&](std::size_t cell) {
    std::vector<double> column(flat, 0.0);
    for (std::size_t l = 0; l < nl; ++l) {
      for (std::size_t z = 0; z < nz; ++z) {
        const std::size_t src = l * level_stride + (cell * nz + z) * c;
        for (std::size_t k = 0; k < c; ++k) {
          column[z * 2 * c + k] += depth_assisted[src + k];
          column[z * 2 * c + c + k] += occupancy_assisted[src + k];
        }
      }
    }
    for (std::size_t o = 0; o < cout; ++o) {
      const float * wrow = w.weight.data() + o * flat;
      double s = w.bias[o];
      for (std::size_t i = 0; i < flat; ++i) s += wrow[i] * column[i];
      out[cell * cout + o] = static_cast<float>(s);
    }
  });
  return out;
}

SplatResult splat_lift(
  const std::vector<FeatureLevel> & featmaps, const std::vector<FeatureLevel> & depth_maps,
  const CalibrationSet & calib, const GridSpec & spec, const DepthBinSpec & bins)
{
  check_levels(featmaps, "splat_lift");
  check_levels(depth_maps, "splat_lift");
  bins.validate();
  if (featmaps.size() != depth_maps.size()) {
    throw InvalidArgument("splat_lift: feature and depth level counts differ");
  }
  const std::size_t d = bins.count;
  const std::size_t c = featmaps.front().map.dim(2);
  for (std::size_t l = 0; l < featmaps.size(); ++l) {
    const auto & f = featmaps[l].map;
    const auto & p = depth_maps[l].map;
    if (p.dim(0) != f.dim(0) || p.dim(1) != f.dim(1) || p.dim(2) != d) {
      throw InvalidArgument(
        "splat_lift: level " + std::to_string(l) + " depth map " + shape_to_string(p.shape()) +
        " does not match features " + shape_to_string(f.shape()));
    }
  }
  const Projector projector(calib);
  const std::size_t nx = spec.nx(), ny = spec.ny(), nz = spec.nz();
  const std::size_t voxels = nx * ny * nz;

  // Entry e = base[l] + pixel * D + bin, in (level, pixel, bin) order.
  std::vector<std::size_t> base(featmaps.size() + 1, 0);
  for (std::size_t l = 0; l < featmaps.size(); ++l) {
    base[l + 1] = base[l] + featmaps[l].map.dim(0) * featmaps[l].map.dim(1) * d;
  }
  std::vector<std::int64_t> target(base.back(), -1);
  std::vector<double> depths(d);
  for (std::size_t k = 0; k < d; ++k) depths[k] = bins.center(k);

  for (std::size_t l = 0; l < featmaps.size(); ++l) {
    const std::size_t w = featmaps[l].map.dim(1);
    const std::size_t pixels = featmaps[l].map.dim(0) * w;
    const double s = featmaps[l].stride;
    chunked_for(pixels, [&](std::size_t pix) {
      const double u = static_cast<double>(pix % w) * s;
      const double v = static_cast<double>(pix / w) * s;
      for (std::size_t k = 0; k < d; ++k) {
        const Eigen::Vector3d x = projector.back_project(u, v, depths[k]);
        const double fi = std::floor((x.x() - spec.x_min) / spec.cell_x);
        const double fj = std::floor((x.y() - spec.y_min) / spec.cell_y);
        const double fk = std::floor((x.z() - spec.z_min) / spec.cell_z);
        if (fi < 0 || fj < 0 || fk < 0 || fi >= static_cast<double>(nx) ||
            fj >= static_cast<double>(ny) || fk >= static_cast<double>(nz)) {
          continue;
        }
        const auto i = static_cast<std::size_t>(fi), j = static_cast<std::size_t>(fj);
        const auto kk = static_cast<std::size_t>(fk);
        target[base[l] + pix * d + k] = static_cast<std::int64_t>((i * ny + j) * nz + kk);
      }
    });
  }

  // Counting sort by voxel; a stable pass keeps each voxel's entries in entry order.
  std::vector<std::size_t> start(voxels + 1, 0);
  for (auto t : target) {
    if (t >= 0) ++start[static_cast<std::size_t>(t) + 1];
  }
  for (std::size_t v = 0; v < voxels; ++v) start[v + 1] += start[v];
  std::vector<std::size_t> sorted(start.back());
  {
    std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
    for (std::size_t e = 0; e < target.size(); ++e) {
      if (target[e] >= 0) sorted[cursor[static_cast<std::size_t>(target[e])]++] = e;
    }
  }

  SplatResult result{Tensor({nx, ny, nz, c}), Tensor({nx, ny})};
  chunked_for(voxels, [&](std::size_t vox) {
    if (start[vox] == start[vox + 1]) return;
    std::vector<double> acc(c, 0.0);
    for (std::size_t q = start[vox]; q < start[vox + 1]; ++q) {
      const std::size_t e = sorted[q];
      std::size_t l = 0;
      while (e >= base[l + 1]) ++l;
      const std::size_t local = e - base[l];
      const std::size_t pix = local / d, k = local % d;
      const double prob = depth_maps[l].map[pix * d + k];
      if (prob == 0.0) continue;
      const float * f = featmaps[l].map.data() + pix * c;
      for (std::size_t ch = 0; ch < c; ++ch) acc[ch] += prob * f[ch];
    }
    for (std::size_t ch = 0; ch < c; ++ch) result.volume[vox * c + ch] = static_cast<float>(acc[ch]);
  });
  for (std::size_t col = 0; col < nx * ny; ++col) {
    for (std::size_t z = 0; z < nz; ++z) {
      const std::size_t vox = col * nz + z;
      if (start[vox] != start[vox + 1]) {
        result.bev_mask[col] = 1.0f;
        break;
      }
    }
  }
  return result;
}

Tensor frustum_occupancy(
  const RadarPointCloud & cloud, const CalibrationSet & calib, const FrustumGridSpec & frustum,
  const DepthBinSpec & bins)
{
  bins.validate();
  if (frustum.height == 0 || frustum.width == 0 || !(frustum.stride > 0.0)) {
    throw InvalidArgument("frustum grid must have positive extent and stride");
  }
  const Projector projector(calib);
  Tensor occ({frustum.height, frustum.width, bins.count});
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = projector.project(
      {cloud.positions[3 * i], cloud.positions[3 * i + 1], cloud.positions[3 * i + 2]});
    if (!p.valid) continue;
    const double col = std::floor(p.u / frustum.stride + 0.5);
    const double row = std::floor(p.v / frustum.stride + 0.5);
    const long bin = bins.bin_of(p.d);
    if (bin < 0 || col < 0 || row < 0 || col >= static_cast<double>(frustum.width) ||
        row >= static_cast<double>(frustum.height)) {
      continue;
    }
    occ.at(static_cast<std::size_t>(row), static_cast<std::size_t>(col), static_cast<std::size_t>(bin)) =
      1.0f;
  }
  return occ;
}

Tensor crn_frustum_occupancy(
  const RadarPointCloud & cloud, const CalibrationSet & calib, const FrustumGridSpec & frustum,
  const Tensor & centers, const DepthBinSpec & bins)
{
  const Shape grid = grid_shape_of(centers);
  std::vector<FeatureLevel> level = {{frustum_occupancy(cloud, calib, frustum, bins), frustum.stride}};
  return trilinear_sample_depth(level, project_voxels(centers, calib), grid, bins).reshaped(grid);
}

Tensor radar_depth_map(const RadarPointCloud & cloud, const CalibrationSet & calib)
{
  const Projector projector(calib);
  const auto w = static_cast<std::size_t>(calib.intrinsics.image_width);
  const auto h = static_cast<std::size_t>(calib.intrinsics.image_height);
  std::vector<double> sum(w * h, 0.0);
  std::vector<std::uint32_t> count(w * h, 0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = projector.project(
      {cloud.positions[3 * i], cloud.positions[3 * i + 1], cloud.positions[3 * i + 2]});
    if (!p.valid) continue;
    const double col = std::floor(p.u + 0.5), row = std::floor(p.v + 0.5);
    if (col >= static_cast<double>(w) || row >= static_cast<double>(h)) continue;
    const std::size_t idx = static_cast<std::size_t>(row) * w + static_cast<std::size_t>(col);
    sum[idx] += p.d;
    ++count[idx];
  }
  Tensor out({h, w});
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (count[i]) out[i] = static_cast<float>(sum[i] / count[i]);
  }
  return out;
}

Tensor in_view_bev_mask(const std::vector<ImageProjection> & projections, const Shape & grid_shape)
{
  if (grid_shape.size() != 3 || projections.size() != element_count(grid_shape)) {
    throw InvalidArgument("in_view_bev_mask: projection count does not match grid");
  }
  const std::size_t nz = grid_shape[2];
  Tensor mask({grid_shape[0], grid_shape[1]});
  for (std::size_t col = 0; col < mask.size(); ++col) {
    for (std::size_t z = 0; z < nz; ++z) {
      if (projections[col * nz + z].valid) {
        mask[col] = 1.0f;
        break;
      }
    }
  }
  return mask;
}

double empty_fraction_in_band(
  const Tensor & covered, const Tensor & in_view, const GridSpec & spec, double r_min, double r_max)
{
  const std::size_t nx = spec.nx(), ny = spec.ny();
  if (covered.shape() != Shape{nx, ny} || in_view.shape() != Shape{nx, ny}) {
    throw InvalidArgument("empty_fraction_in_band: masks must be X x Y");
  }
  std::size_t total = 0, empty = 0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      if (in_view[i * ny + j] == 0.0f) continue;
      const Eigen::Vector3d c = spec.center(i, j, 0);
      const double r = std::hypot(c.x(), c.y());
      if (r < r_min || r >= r_max) continue;
      ++total;
      if (covered[i * ny + j] == 0.0f) ++empty;
    }
  }
  return total ? static_cast<double>(empty) / static_cast<double>(total) : 0.0;
}

}  // namespace bevlift
