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

#include "bevlift/nets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bevlift/error.hpp"
#include "bevlift/parallel.hpp"

namespace bevlift
{
namespace
{

constexpr std::size_t kRowsPerTask = 256;

void check_input(const Tensor & input, const Conv1x1Weights & w, const char * op)
{
  w.validate();
  if (input.rank() == 0 || input.shape().back() != w.in_channels()) {
    throw InvalidArgument(
      std::string(op) + ": channel mismatch, input " + shape_to_string(input.shape()) +
      " vs weight " + shape_to_string(w.weight.shape()));
  }
}

/// Runs fn(row, out_row) with the linear map already applied into `acc`.
template <typename Fn>
Tensor map_rows(const Tensor & input, const Conv1x1Weights & w, Fn && finish)
{
  const std::size_t cin = w.in_channels(), cout = w.out_channels();
  const std::size_t rows = input.size() / cin;
  Shape shape = input.shape();
  shape.back() = cout;
  Tensor out(shape);
  const std::size_t tasks = (rows + kRowsPerTask - 1) / kRowsPerTask;
  parallel_for(0, tasks, [&](std::size_t task) {
    std::vector<double> acc(cout);
    const std::size_t end = std::min(rows, (task + 1) * kRowsPerTask);
    for (std::size_t r = task * kRowsPerTask; r < end; ++r) {
      const float * in = input.data() + r * cin;
      for (std::size_t o = 0; o < cout; ++o) {
        const float * wrow = w.weight.data() + o * cin;
        double s = w.bias[o];
        for (std::size_t i = 0; i < cin; ++i) s += static_cast<double>(wrow[i]) * in[i];
        acc[o] = s;
      }
      finish(acc, out.data() + r * cout);
    }
  });
  return out;
}

}  // namespace

void Conv1x1Weights::validate() const
{
  if (weight.rank() != 2 || bias.rank() != 1 || bias.dim(0) != weight.dim(0)) {
    throw InvalidArgument(
      "conv1x1 weights: inconsistent shapes " + shape_to_string(weight.shape()) + " / " +
      shape_to_string(bias.shape()));
  }
  if (!weight.all_finite() || !bias.all_finite()) {
    throw InvalidArgument("conv1x1 weights: non-finite entries");
  }
}

Conv1x1Weights Conv1x1Weights::zeros(std::size_t out_channels, std::size_t in_channels)
{
  return {Tensor({out_channels, in_channels}), Tensor({out_channels})};
}

Conv1x1Weights Conv1x1Weights::from_archive(const TensorArchive & archive, const std::string & prefix)
{
  Conv1x1Weights w{archive_get(archive, prefix + ".weight"), archive_get(archive, prefix + ".bias")};
  try {
    w.validate();
  } catch (const InvalidArgument & e) {
    throw DataError(prefix + ": " + e.what());
  }
  return w;
}

void Conv1x1Weights::store(TensorArchive & archive, const std::string & prefix) const
{
  archive[prefix + ".weight"] = weight;
  archive[prefix + ".bias"] = bias;
}

void DepthBinSpec::validate() const
{
  if (!(d_min > 0.0) || !(d_max > d_min) || count == 0) {
    throw InvalidArgument("depth bins need 0 < d_min < d_max and at least one bin");
  }
}

long DepthBinSpec::bin_of(double d) const
{
  if (!(d >= d_min) || !(d < d_max)) return -1;
  const auto k = static_cast<long>(std::floor((d - d_min) / width()));
  return std::min(k, static_cast<long>(count) - 1);
}

float strict_sigmoid(double x)
{
  const double s = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  constexpr float kLow = std::numeric_limits<float>::denorm_min();
  const float kHigh = std::nextafter(1.0f, 0.0f);
  return std::clamp(static_cast<float>(s), kLow, kHigh);
}

Tensor conv1x1(const Tensor & input, const Conv1x1Weights & w)
{
  check_input(input, w, "conv1x1");
  return map_rows(input, w, [](const std::vector<double> & acc, float * out) {
    for (std::size_t o = 0; o < acc.size(); ++o) out[o] = static_cast<float>(acc[o]);
  });
}

Tensor occupancy_net(const Tensor & radar_bev, const Conv1x1Weights & w)
{
  if (radar_bev.rank() != 3) throw InvalidArgument("occupancy_net expects X x Y x C_P");
  check_input(radar_bev, w, "occupancy_net");
  return map_rows(radar_bev, w, [](const std::vector<double> & acc, float * out) {
    for (std::size_t o = 0; o < acc.size(); ++o) out[o] = strict_sigmoid(acc[o]);
  });
}

Tensor depth_net(const Tensor & pv_features, const Conv1x1Weights & w)
{
  if (pv_features.rank() != 3) throw InvalidArgument("depth_net expects H x W x C_I");
  check_input(pv_features, w, "depth_net");
  return map_rows(pv_features, w, [](const std::vector<double> & acc, float * out) {
    const double peak = *std::max_element(acc.begin(), acc.end());
    double total = 0.0;
    for (double a : acc) total += std::exp(a - peak);
    for (std::size_t o = 0; o < acc.size(); ++o) {
      out[o] = static_cast<float>(std::exp(acc[o] - peak) / total);
    }
  });
}

std::vector<Tensor> depth_net(
  const std::vector<Tensor> & pv_levels, const std::vector<Conv1x1Weights> & w)
{
  if (pv_levels.size() != w.size()) {
    throw InvalidArgument("depth_net: one weight set per level required");
  }
  std::vector<Tensor> out;
  out.reserve(pv_levels.size());
  for (std::size_t l = 0; l < pv_levels.size(); ++l) out.push_back(depth_net(pv_levels[l], w[l]));
  return out;
}

Tensor fuse_bev(const Tensor & radar_bev, const Tensor & image_bev, const Conv1x1Weights & w)
{
  if (radar_bev.rank() != 3 || image_bev.rank() != 3 || radar_bev.dim(0) != image_bev.dim(0) ||
      radar_bev.dim(1) != image_bev.dim(1)) {
    throw InvalidArgument(
      "fuse_bev: spatial shape mismatch " + shape_to_string(radar_bev.shape()) + " vs " +
      shape_to_string(image_bev.shape()));
  }
  const std::size_t nx = radar_bev.dim(0), ny = radar_bev.dim(1);
  const std::size_t cp = radar_bev.dim(2), ci = image_bev.dim(2);
  Tensor concat({nx, ny, cp + ci});
  for (std::size_t cell = 0; cell < nx * ny; ++cell) {
    std::copy_n(radar_bev.data() + cell * cp, cp, concat.data() + cell * (cp + ci));
    std::copy_n(image_bev.data() + cell * ci, ci, concat.data() + cell * (cp + ci) + cp);
  }
  check_input(concat, w, "fuse_bev");
  return conv1x1(concat, w);
}

}  // namespace bevlift
