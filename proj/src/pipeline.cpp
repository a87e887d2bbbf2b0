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


#include "bevlift/pipeline.hpp"

#include <cmath>
#include <exception>
#include <utility>

#include "bevlift/error.hpp"
#include "bevlift/head.hpp"
#include "bevlift/parallel.hpp"
#include "bevlift/rng.hpp"

namespace bevlift
{
namespace
{

[[noreturn]] void rethrow_in_stage(const Error & e, const std::string & stage)
{
  const std::string msg = "stage '" + stage + "': " + e.what();
  switch (e.kind()) {
    case ErrorKind::kConfig:
      throw ConfigError(msg);
    case ErrorKind::kData:
      throw DataError(msg);
    case ErrorKind::kNumerical:
      throw NumericalError(msg);
    case ErrorKind::kInvalidArgument:
      break;
  }
  throw InvalidArgument(msg);
}

/// Runs fn, prefixes library errors with the stage name and NaN-checks the result.
template <typename Fn>
auto stage(const std::string & name, Fn && fn)
{
  try {
    auto out = fn();
    if constexpr (std::is_same_v<decltype(out), Tensor>) check_finite(out, name);
    return out;
  } catch (const NumericalError &) {
    throw;
  } catch (const Error & e) {
    rethrow_in_stage(e, name);
  }
}

void expect_shape(const Conv1x1Weights & w, std::size_t out, std::size_t in, const std::string & key)
{
  if (w.weight.shape() != Shape{out, in} || w.bias.shape() != Shape{out}) {
    throw DataError(
      "weights '" + key + "': expected " + std::to_string(out) + "x" + std::to_string(in) + ", got " +
      shape_to_string(w.weight.shape()) + " / " + shape_to_string(w.bias.shape()));
  }
}

Conv1x1Weights random_conv(std::size_t out, std::size_t in, std::uint64_t seed, std::uint64_t stream)
{
  Rng rng(seed, stream);
  Conv1x1Weights w = Conv1x1Weights::zeros(out, in);
  const double a = 1.0 / std::sqrt(static_cast<double>(in));
  for (auto & v : w.weight.values()) v = static_cast<float>(rng.uniform(-a, a));
  return w;
}

}  // namespace

void check_finite(const Tensor & t, const std::string & name)
{
  if (!t.all_finite()) throw NumericalError("stage '" + name + "' produced non-finite values");
}

std::size_t PillarMeanProvider::channels(const PipelineConfig & config) const
{
  return config.radar_bev_channels();
}

Tensor PillarMeanProvider::encode(const RadarPointCloud & cloud, const PipelineConfig & config) const
{
  const GridSpec pg = config.pillar_grid();
  const Tensor pillars = pillar_features(cloud, pillarize(cloud, pg), pg);
  const std::size_t s = config.radar_stride;
  const std::size_t px = pillars.dim(0), py = pillars.dim(1), c = pillars.dim(2);
  const std::size_t nx = px / s, ny = py / s;
  Tensor out({nx, ny, c});
  const double inv = 1.0 / static_cast<double>(s * s);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t k = 0; k < c; ++k) {
        double acc = 0.0;
        for (std::size_t a = 0; a < s; ++a) {
          for (std::size_t b = 0; b < s; ++b) acc += pillars[((i * s + a) * py + j * s + b) * c + k];
        }
        out[(i * ny + j) * c + k] = static_cast<float>(acc * inv);
      }
    }
  }
  return out;
}

void PipelineWeights::check(const PipelineConfig & config) const
{
  const GridSpec g = config.view_grid();
  const std::size_t z = g.nz(), cp = config.radar_bev_channels(), ci = config.image_channels;
  const std::size_t cb = config.compress_channels, cf = config.fuse_channels;
  expect_shape(occ, z, cp, "occ");
  if (depth.size() != config.strides.size()) {
    throw DataError(
      "weights: " + std::to_string(depth.size()) + " depth levels for " +
      std::to_string(config.strides.size()) + " image levels");
  }
  for (std::size_t l = 0; l < depth.size(); ++l) {
    expect_shape(depth[l], config.bins.count, ci, "depth." + std::to_string(l));
  }
  expect_shape(compress, cb, z * 2 * ci, "compress");
  expect_shape(fuse, cf, cp + cb, "fuse");
  expect_shape(head_heatmap, config.classes.size(), cf, "head.heatmap");
  expect_shape(head_reg, kRegressionChannels, cf, "head.reg");
}

PipelineWeights PipelineWeights::from_archive(const TensorArchive & archive, const PipelineConfig & config)
{
  PipelineWeights w;
  w.occ = Conv1x1Weights::from_archive(archive, "occ");
  for (std::size_t l = 0; l < config.strides.size(); ++l) {
    w.depth.push_back(Conv1x1Weights::from_archive(archive, "depth." + std::to_string(l)));
  }
  w.compress = Conv1x1Weights::from_archive(archive, "compress");
  w.fuse = Conv1x1Weights::from_archive(archive, "fuse");
  w.head_heatmap = Conv1x1Weights::from_archive(archive, "head.heatmap");
  w.head_reg = Conv1x1Weights::from_archive(archive, "head.reg");
  w.check(config);
  return w;
}

TensorArchive PipelineWeights::to_archive() const
{
  TensorArchive a;
  occ.store(a, "occ");
  for (std::size_t l = 0; l < depth.size(); ++l) depth[l].store(a, "depth." + std::to_string(l));
  compress.store(a, "compress");
  fuse.store(a, "fuse");
  head_heatmap.store(a, "head.heatmap");
  head_reg.store(a, "head.reg");
  return a;
}

PipelineWeights default_weights(const PipelineConfig & config, std::uint64_t seed)
{
  const GridSpec g = config.view_grid();
  const std::size_t z = g.nz(), cp = config.radar_bev_channels(), ci = config.image_channels;
  const std::size_t cb = config.compress_channels, cf = config.fuse_channels;
  PipelineWeights w;
  std::uint64_t stream = 0;
  w.occ = random_conv(z, cp, seed, stream++);
  for (std::size_t l = 0; l < config.strides.size(); ++l) {
    w.depth.push_back(random_conv(config.bins.count, ci, seed, stream++));
  }
  w.compress = random_conv(cb, z * 2 * ci, seed, stream++);
  w.fuse = random_conv(cf, cp + cb, seed, stream++);
  w.head_heatmap = random_conv(config.classes.size(), cf, seed, stream++);
  w.head_heatmap.bias.fill(-4.0f);
  w.head_reg = random_conv(kRegressionChannels, cf, seed, stream++);
  return w;
}

PipelineWeights load_weights(const PipelineConfig & config)
{
  if (config.weights.empty()) return default_weights(config);
  return PipelineWeights::from_archive(load_archive(config.weights), config);
}

LiftedVolumes lift_features(LiftStrategy strategy, const LiftInputs & in)
{
  if (!in.features || !in.calib) throw InvalidArgument("lift_features: features and calibration are required");
  const Tensor centers = voxel_centers(in.grid);
  const Shape grid = {in.grid.nx(), in.grid.ny(), in.grid.nz()};
  const bool needs_depth = strategy != LiftStrategy::kSampling;
  if (needs_depth && !in.depth) throw InvalidArgument("lift_features: depth distributions are required");

  LiftedVolumes out;
  if (strategy == LiftStrategy::kSplatting) {
    auto splat = splat_lift(*in.features, *in.depth, *in.calib, in.grid, in.bins);
    const std::size_t c = splat.volume.dim(3);
    Shape five = {1, grid[0], grid[1], grid[2], c};
    out.depth_assisted = splat.volume.reshaped(five);
    out.occupancy_assisted = out.depth_assisted;
    out.bev_mask = std::move(splat.bev_mask);
    return out;
  }

  const auto projections = project_voxels(centers, *in.calib);
  out.bev_mask = in_view_bev_mask(projections, grid);
  Tensor sampled = sample_lift(*in.features, projections, grid);
  if (strategy == LiftStrategy::kSampling) {
    out.depth_assisted = sampled;
    out.occupancy_assisted = std::move(sampled);
    return out;
  }
  out.depth_assisted = depth_weight(sampled, trilinear_sample_depth(*in.depth, projections, grid, in.bins));
  switch (strategy) {
    case LiftStrategy::kDepthSampling:
      out.occupancy_assisted = std::move(sampled);
      break;
    case LiftStrategy::kOccDepthSampling:
      if (!in.occupancy) throw InvalidArgument("occ-depth-sampling needs an occupancy grid");
      out.occupancy_assisted = occupancy_weight(sampled, *in.occupancy);
      break;
    case LiftStrategy::kCrnOccSampling: {
      if (!in.cloud) throw InvalidArgument("crn-occ-sampling needs the radar cloud");
      const auto & level0 = in.features->front();
      const FrustumGridSpec frustum{level0.map.dim(0), level0.map.dim(1), level0.stride};
      const Tensor occ = crn_frustum_occupancy(*in.cloud, *in.calib, frustum, centers, in.bins);
      out.occupancy_assisted = occupancy_weight(sampled, occ);
      break;
    }
    default:
      break;
  }
  return out;
}

PipelineOutput run_pipeline(
  const PipelineConfig & config, const FrameData & frame, const PipelineWeights & weights,
  const RadarFeatureProvider & provider)
{
  stage("weights", [&] {
    weights.check(config);
    return 0;
  });
  const GridSpec grid = config.view_grid();
  const PointLayout layout = config.layout();

  const Tensor normalized = stage("normalize", [&] {
    if (frame.radar.rank() != 2 || (frame.radar.dim(0) > 0 && frame.radar.dim(1) != layout.channel_count())) {
      throw DataError(
        "radar matrix " + shape_to_string(frame.radar.shape()) + " does not match " +
        std::to_string(layout.channel_count()) + " layout channels");
    }
    if (frame.radar.dim(0) == 0) return Tensor({0, layout.channel_count()});
    return normalize(frame.radar, config.radar_stats(), layout.spatial_temporal_channels());
  });
  const RadarPointCloud cropped = stage("crop", [&] {
    return crop_to_range(RadarPointCloud::from_matrix(normalized, layout), config.pillar_grid());
  });
  const RadarPointCloud cloud = stage("fov_filter", [&] { return fov_filter(cropped, {}, frame.calib).cloud; });

  PipelineOutput out;
  out.radar_bev = stage("radar_features", [&] { return provider.encode(cloud, config); });
  out.occupancy = stage("occupancy_net", [&] { return occupancy_net(out.radar_bev, weights.occ); });

  std::vector<FeatureLevel> features;
  std::vector<FeatureLevel> depth;
  stage("depth_net", [&] {
    if (frame.image_levels.size() != config.strides.size()) {
      throw DataError(
        "frame has " + std::to_string(frame.image_levels.size()) + " image levels, config expects " +
        std::to_string(config.strides.size()));
    }
    for (std::size_t l = 0; l < config.strides.size(); ++l) {
      if (!frame.image_levels[l].all_finite()) {
        throw NumericalError("stage 'depth_net': image level " + std::to_string(l) + " has non-finite values");
      }
      features.push_back({frame.image_levels[l], config.strides[l]});
      Tensor d = depth_net(frame.image_levels[l], weights.depth[l]);
      check_finite(d, "depth_net");
      depth.push_back({std::move(d), config.strides[l]});
    }
    return 0;
  });

  LiftInputs in;
  in.features = &features;
  in.depth = &depth;
  in.occupancy = &out.occupancy;
  in.cloud = &cloud;
  in.calib = &frame.calib;
  in.grid = grid;
  in.bins = config.bins;
  LiftedVolumes lifted = stage("lift", [&] {
    auto v = lift_features(config.strategy, in);
    check_finite(v.depth_assisted, "lift");
    check_finite(v.occupancy_assisted, "lift");
    return v;
  });
  out.bev_mask = std::move(lifted.bev_mask);
  out.image_bev = stage("height_compress", [&] {
    return height_compress(lifted.depth_assisted, lifted.occupancy_assisted, weights.compress);
  });
  out.fused = stage("fuse_bev", [&] { return fuse_bev(out.radar_bev, out.image_bev, weights.fuse); });

  const std::size_t nx = grid.nx(), ny = grid.ny(), k = config.classes.size();
  out.heatmap = stage("head", [&] {
    const Tensor logits = conv1x1(out.fused, weights.head_heatmap);
    Tensor heat({k, nx, ny});
    for (std::size_t cell = 0; cell < nx * ny; ++cell) {
      for (std::size_t c = 0; c < k; ++c) heat[c * nx * ny + cell] = strict_sigmoid(logits[cell * k + c]);
    }
    return heat;
  });
  out.regression = stage("head", [&] { return conv1x1(out.fused, weights.head_reg); });

  out.detections = stage("decode", [&] {
    DetectionSet dets;
    for (auto & d : decode_detections(out.heatmap, out.regression, grid, config.top_k)) {
      if (d.score >= config.score_threshold) dets.push_back(d);
    }
    return dets;
  });
  out.detections = stage("nms", [&] { return distance_nms(out.detections, config.nms_thresholds()); });
  for (const auto & d : out.detections) {
    if (!d.center.allFinite() || !d.size.allFinite() || !std::isfinite(d.yaw)) {
      throw NumericalError("stage 'decode' produced a non-finite box");
    }
  }
  return out;
}

std::vector<PipelineOutput> run_frames(
  const PipelineConfig & config, const std::vector<FrameData> & frames, const PipelineWeights & weights)
{
  std::vector<PipelineOutput> out(frames.size());
  parallel_for(0, frames.size(), [&](std::size_t i) { out[i] = run_pipeline(config, frames[i], weights); });
  return out;
}

}  // namespace bevlift
