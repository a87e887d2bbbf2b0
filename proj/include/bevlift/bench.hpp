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


#ifndef BEVLIFT__BENCH_HPP_
#define BEVLIFT__BENCH_HPP_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace bevlift
{

struct BenchRow
{
  std::string kernel;
  std::string grid;
  std::size_t voxels = 0;
  std::size_t threads = 0;
  std::size_t repeats = 0;
  double seconds = 0.0;
  double voxels_per_second = 0.0;
};

/// "160x160x10" -> {160, 160, 10}. Throws ConfigError on malformed input.
std::array<std::size_t, 3> parse_grid_size(const std::string & text);

/// Times the lifting kernels ("sample", "trilinear", "splat") on the VoD
/// range divided into each grid size, with the synthetic VoD camera, three
/// 8-channel levels at strides 8/16/32 and 64 uniform depth bins.
std::vector<BenchRow> run_benchmarks(
  const std::vector<std::string> & kernels, const std::vector<std::array<std::size_t, 3>> & sizes,
  std::size_t repeats = 3);

/// Columns: kernel,grid,voxels,threads,repeats,seconds,voxels_per_second.
void write_bench_csv(std::ostream & os, const std::vector<BenchRow> & rows);

}  // namespace bevlift

#endif  // BEVLIFT__BENCH_HPP_
