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


#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bevlift/bench.hpp"
#include "bevlift/config.hpp"
#include "bevlift/error.hpp"
#include "bevlift/eval.hpp"
#include "bevlift/frame_io.hpp"
#include "bevlift/parallel.hpp"
#include "bevlift/pipeline.hpp"
#include "bevlift/rng.hpp"
#include "bevlift/synth.hpp"
#include "bevlift/tensor_io.hpp"

namespace fs = std::filesystem;
using namespace bevlift;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

std::vector<std::string> split(const std::string & s, char sep)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

PipelineConfig config_with_weights(const std::string & config_path, const std::string & weights)
{
  PipelineConfig config = load_config(config_path);
  if (!weights.empty()) config.weights = weights;
  return config;
}

/// 1 where a BEV cell received no image feature.
Tensor empty_mask(const Tensor & coverage)
{
  Tensor out(coverage.shape());
  for (std::size_t i = 0; i < coverage.size(); ++i) out[i] = coverage[i] == 0.0f ? 1.0f : 0.0f;
  return out;
}

struct LiftArgs
{
  std::string config, frame, strategy, out, mask, weights;
};

int run_lift(const LiftArgs & a)
{
  PipelineConfig config = config_with_weights(a.config, a.weights);
  if (!a.strategy.empty()) config.strategy = parse_strategy(a.strategy);
  const auto frame = load_frame(a.frame, config.layout(), config.class_names());
  const auto result = run_pipeline(config, frame, load_weights(config));
  save_lxt(a.out, result.image_bev);
  if (!a.mask.empty()) save_lxt(a.mask, empty_mask(result.bev_mask));
  std::cout << "lift: " << strategy_name(config.strategy) << " -> " << a.out << " "
            << shape_to_string(result.image_bev.shape()) << "\n";
  return kExitOk;
}

struct DetectArgs
{
  std::string config, frames, weights, out;
};

int run_detect(const DetectArgs & a)
{
  const PipelineConfig config = config_with_weights(a.config, a.weights);
  const auto weights = load_weights(config);
  std::vector<FrameData> frames;
  for (const auto & dir : list_frame_dirs(a.frames)) {
    frames.push_back(load_frame(dir, config.layout(), config.class_names()));
  }
  const auto outputs = run_frames(config, frames, weights);
  FrameTable table;
  std::size_t total = 0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    table[frames[i].id].boxes = outputs[i].detections;
    total += outputs[i].detections.size();
  }
  save_boxes_csv(a.out, table, config.class_names(), true);
  std::cout << "detect: " << frames.size() << " frames, " << total << " detections -> " << a.out << "\n";
  return kExitOk;
}

struct EvalArgs
{
  std::string dets, gt, config, regions = "eaa,roi,bands", out, pr_svg, calib, frames;
};

int run_eval(const EvalArgs & a)
{
  const PipelineConfig config = load_config(a.config);
  const auto names = config.class_names();
  const FrameTable dets = load_boxes_csv(a.dets, names, true);
  const FrameTable gts = load_boxes_csv(a.gt, names, false);
  const auto regions = parse_regions(a.regions);
  CalibrationLookup calib;
  if (!a.calib.empty()) calib.shared = load_calibration(a.calib);
  if (!a.frames.empty()) {
    for (const auto & dir : list_frame_dirs(a.frames)) {
      calib.per_frame[dir.filename().string()] = load_calibration(dir / "calib.txt");
    }
  }
  for (const auto & r : regions) {
    if (r.needs_calibration() && !calib.shared && calib.per_frame.empty()) {
      throw ConfigError("region 'roi' needs --calib or --frames");
    }
  }
  const EvalReport report = evaluate(dets, gts, names, config.match_config(), regions, calib);
  save_report_csv(a.out, report);
  if (!a.pr_svg.empty()) save_pr_plots(a.pr_svg, report);
  for (const auto & r : regions) {
    std::cout << "eval: " << r.name() << " mAP " << std::fixed << std::setprecision(4)
              << report.mean_ap(r.name()) << "\n";
  }
  return kExitOk;
}

struct SynthArgs
{
  std::uint64_t seed = 0;
  std::string preset = "vod", out;
  std::size_t frames = 1;
  std::size_t objects = 0;
};

int run_synth(const SynthArgs & a)
{
  PipelineConfig config = preset_config(a.preset);
  config.radar_channels = synth_radar_channels();
  config.radar_mean.assign(config.radar_channels.size(), 0.0);
  config.radar_std.assign(config.radar_channels.size(), 1.0);
  config.image_channels = kSynthImageChannels;
  config.weights = "weights.lxta";
  config.validate();

  const fs::path root(a.out);
  fs::create_directories(root);
  SceneSpec spec;
  spec.priors = default_class_priors(config.classes.size() > 3);
  spec.calib = synthetic_calibration(a.preset);
  spec.spec = config.view_grid();
  const std::vector<std::size_t> defaults = {4, 3, 2, 1};
  for (std::size_t c = 0; c < config.classes.size(); ++c) {
    spec.counts.push_back(a.objects ? a.objects : defaults[c]);
  }

  FrameTable gt;
  for (std::size_t k = 0; k < a.frames; ++k) {
    std::uint64_t state = a.seed + k;
    spec.seed = splitmix64(state);
    const Scene scene = generate_scene(spec);
    FrameData frame;
    std::ostringstream id;
    id << std::setw(6) << std::setfill('0') << k;
    frame.id = id.str();
    frame.radar = scene.radar_matrix();
    frame.calib = spec.calib;
    frame.image_levels = synthetic_image_features(scene, config.strides, spec.seed);
    frame.depth = scene.depth_map;
    frame.boxes = scene.boxes;
    frame.tags = {k % 2 ? "night" : "day"};
    save_frame(root / frame.id, frame, config.class_names());
    gt[frame.id] = {frame.boxes, frame.tags};
  }
  save_boxes_csv(root / "gt.csv", gt, config.class_names(), false);
  save_archive(root / "weights.lxta", default_weights(config, a.seed).to_archive());
  std::ofstream cfg(root / "pipeline.cfg");
  write_config(cfg, config);
  std::cout << "synth: " << a.frames << " frames -> " << root.string() << "\n";
  return kExitOk;
}

struct BenchArgs
{
  std::string kernels = "sample,trilinear,splat", sizes = "160x160x10", out;
  std::size_t repeats = 3;
};

int run_bench(const BenchArgs & a)
{
  std::vector<std::array<std::size_t, 3>> sizes;
  for (const auto & s : split(a.sizes, ',')) sizes.push_back(parse_grid_size(s));
  const auto rows = run_benchmarks(split(a.kernels, ','), sizes, a.repeats);
  std::ofstream os(a.out);
  if (!os) throw DataError("cannot write " + a.out);
  write_bench_csv(os, rows);
  write_bench_csv(std::cout, rows);
  return kExitOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"bevlift: radar-camera BEV lifting, detection decoding and evaluation"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");

  LiftArgs lift;
  auto * lift_cmd = app.add_subcommand("lift", "Lift one frame's image features into BEV");
  lift_cmd->add_option("--config", lift.config)->required()->check(CLI::ExistingFile);
  lift_cmd->add_option("--frame", lift.frame)->required()->check(CLI::ExistingDirectory);
  lift_cmd->add_option("--strategy", lift.strategy, "Overrides lift.strategy");
  lift_cmd->add_option("--out", lift.out)->required();
  lift_cmd->add_option("--mask", lift.mask, "Empty-cell mask output (1 = no image feature)");
  lift_cmd->add_option("--weights", lift.weights)->check(CLI::ExistingFile);

  DetectArgs detect;
  auto * detect_cmd = app.add_subcommand("detect", "Run the full pipeline on a directory of frames");
  detect_cmd->add_option("--config", detect.config)->required()->check(CLI::ExistingFile);
  detect_cmd->add_option("--frames", detect.frames)->required()->check(CLI::ExistingDirectory);
  detect_cmd->add_option("--weights", detect.weights)->required()->check(CLI::ExistingFile);
  detect_cmd->add_option("--out", detect.out)->required();

  EvalArgs eval;
  auto * eval_cmd = app.add_subcommand("eval", "Evaluate detections against ground truth");
  eval_cmd->add_option("--dets", eval.dets)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--gt", eval.gt)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--config", eval.config)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--regions", eval.regions, "eaa,roi,bands,band:a-b,tag:X");
  eval_cmd->add_option("--out", eval.out)->required();
  eval_cmd->add_option("--pr-svg", eval.pr_svg, "Directory for precision-recall plots");
  eval_cmd->add_option("--calib", eval.calib, "Calibration shared by all frames")->check(CLI::ExistingFile);
  eval_cmd->add_option("--frames", eval.frames, "Frame directories with calib.txt")->check(CLI::ExistingDirectory);

  SynthArgs synth;
  auto * synth_cmd = app.add_subcommand("synth", "Write synthetic frames, ground truth and weights");
  synth_cmd->add_option("--seed", synth.seed)->required();
  synth_cmd->add_option("--preset", synth.preset)->check(CLI::IsMember({"vod", "tj4d"}));
  synth_cmd->add_option("--out", synth.out)->required();
  synth_cmd->add_option("--frames", synth.frames)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--objects", synth.objects, "Objects per class (default 4/3/2/1)");

  BenchArgs bench;
  auto * bench_cmd = app.add_subcommand("bench", "Time the lifting kernels");
  bench_cmd->add_option("--kernels", bench.kernels);
  bench_cmd->add_option("--sizes", bench.sizes, "Comma list of XxYxZ grids");
  bench_cmd->add_option("--repeats", bench.repeats)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    set_num_threads(threads);
    if (*lift_cmd) return run_lift(lift);
    if (*detect_cmd) return run_detect(detect);
    if (*eval_cmd) return run_eval(eval);
    if (*synth_cmd) return run_synth(synth);
    if (*bench_cmd) return run_bench(bench);
  } catch (const Error & e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::kData:
        return kExitData;
      case ErrorKind::kNumerical:
        return kExitNumerical;
      case ErrorKind::kConfig:
      case ErrorKind::kInvalidArgument:
        return kExitConfig;
    }
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
