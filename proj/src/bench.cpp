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


#include "bevlift/bench.hpp"

#include <chrono>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "bevlift/error.hpp"
#include "bevlift/lifting.hpp"
#include "bevlift/parallel.hpp"
#include "bevlift/rng.hpp"
#include "bevlift/synth.hpp"

namespace bevlift
{

std::array<std::size_t, 3> parse_grid_size(const std::string & text)
{
  std::array<std::size_t, 3> out{};
  std::stringstream ss(text);
  std::string part;
  std::size_t n = 0;
  while (std::getline(ss, part, 'x')) {
    if (n == 3 || part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("bad grid size '" + text + "', expected XxYxZ");
    }
    out[n++] = std::stoul(part);
    if (out[n - 1] == 0) throw ConfigError("grid size entries must be positive");
  }
  if (n != 3) throw ConfigError("bad grid size '" + text + "', expected XxYxZ");
  return out;
}

std::vector<BenchRow> run_benchmarks(
  const std::vector<std::string> & kernels, const std::vector<std::array<std::size_t, 3>> & sizes,
  std::size_t repeats)
{
  if (repeats == 0) throw ConfigError("bench repeats must be positive");
  for (const auto & k : kernels) {
    if (k != "sample" && k != "trilinear" && k != "splat") throw ConfigError("unknown bench kernel '" + k + "'");
  }
  const CalibrationSet calib = synthetic_calibration("vod");
  const DepthBinSpec bins;
  std::vector<FeatureLevel> features, depth;
  Rng rng(7, 0);
  for (double s : {8.0, 16.0, 32.0}) {
    const auto h = static_cast<std::size_t>((calib.intrinsics.image_height - 1) / s) + 1;
    const auto w = static_cast<std::size_t>((calib.intrinsics.image_width - 1) / s) + 1;
    Tensor f({h, w, 8});
    for (auto & v : f.values()) v = static_cast<float>(rng.uniform(-1, 1));
    features.push_back({std::move(f), s});
    depth.push_back({Tensor({h, w, bins.count}, 1.0f / static_cast<float>(bins.count)), s});
  }

  std::vector<BenchRow> rows;
  for (const auto & size : sizes) {
    GridSpec g{0, 51.2, -25.6, 25.6, -3, 2, 51.2 / size[0], 51.2 / size[1], 5.0 / size[2]};
    const Tensor centers = voxel_centers(g);
    const Shape grid = {size[0], size[1], size[2]};
    const std::string name =
      std::to_string(size[0]) + "x" + std::to_string(size[1]) + "x" + std::to_string(size[2]);
    for (const auto & kernel : kernels) {
      const auto start = std::chrono::steady_clock::now();
      for (std::size_t r = 0; r < repeats; ++r) {
        if (kernel == "sample") {
          sample_lift(features, project_voxels(centers, calib), grid);
        } else if (kernel == "trilinear") {
          trilinear_sample_depth(depth, project_voxels(centers, calib), grid, bins);
        } else {
          splat_lift(features, depth, calib, g, bins);
        }
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      BenchRow row;
      row.kernel = kernel;
      row.grid = name;
      row.voxels = element_count(grid);
      row.threads = num_threads();
      row.repeats = repeats;
      row.seconds = secs;
      row.voxels_per_second = secs > 0 ? static_cast<double>(row.voxels * repeats) / secs : 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_bench_csv(std::ostream & os, const std::vector<BenchRow> & rows)
{
  os << "kernel,grid,voxels,threads,repeats,seconds,voxels_per_second\n";
  for (const auto & r : rows) {
    os << r.kernel << ',' << r.grid << ',' << r.voxels << ',' << r.threads << ',' << r.repeats << ','
       << std::setprecision(6) << r.seconds << ',' << std::setprecision(6) << r.voxels_per_second << '\n';
  }
}

}  // namespace bevlift
