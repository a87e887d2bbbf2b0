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


#ifndef BEVLIFT__PIPELINE_HPP_
#define BEVLIFT__PIPELINE_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bevlift/config.hpp"
#include "bevlift/frame_io.hpp"
#include "bevlift/lifting.hpp"
#include "bevlift/nets.hpp"
#include "bevlift/tensor_io.hpp"

namespace bevlift
{

/// Turns a filtered radar cloud into X x Y x C_P features on the view grid.
class RadarFeatureProvider
{
public:
  virtual ~RadarFeatureProvider() = default;
  virtual std::size_t channels(const PipelineConfig & config) const = 0;
  virtual Tensor encode(const RadarPointCloud & cloud, const PipelineConfig & config) const = 0;
};

/// Pillar means on the pillar grid, average-pooled by radar.stride.
class PillarMeanProvider : public RadarFeatureProvider
{
public:
  std::size_t channels(const PipelineConfig & config) const override;
  Tensor encode(const RadarPointCloud & cloud, const PipelineConfig & config) const override;
};

/// Every learned map of the pipeline. Archive keys: occ, depth.<level>,
/// compress, fuse, head.heatmap, head.reg (each with .weight and .bias).
struct PipelineWeights
{
  Conv1x1Weights occ;
  std::vector<Conv1x1Weights> depth;
  Conv1x1Weights compress;
  Conv1x1Weights fuse;
  Conv1x1Weights head_heatmap;
  Conv1x1Weights head_reg;

  /// Throws DataError naming the key whose shape disagrees with `config`.
  static PipelineWeights from_archive(const TensorArchive & archive, const PipelineConfig & config);
  TensorArchive to_archive() const;
  void check(const PipelineConfig & config) const;
};

/// Deterministic small random weights (uniform in +-1/sqrt(C_in)) with zero
/// biases, except the heatmap bias of -4 so that a blank frame scores below
/// the default threshold.
PipelineWeights default_weights(const PipelineConfig & config, std::uint64_t seed = 0);

/// Loads config.weights, or falls back to default_weights when it is empty.
PipelineWeights load_weights(const PipelineConfig & config);

/// The two voxel tensors handed to height_compress (N_lvl x X x Y x Z x C).
struct LiftedVolumes
{
  Tensor depth_assisted;
  Tensor occupancy_assisted;
  Tensor bev_mask;  ///< X x Y: splat coverage, or in-view columns for sampling strategies
};

struct LiftInputs
{
  const std::vector<FeatureLevel> * features = nullptr;  ///< H_l x W_l x C_I
  const std::vector<FeatureLevel> * depth = nullptr;     ///< H_l x W_l x D
  const Tensor * occupancy = nullptr;                    ///< X x Y x Z
  const RadarPointCloud * cloud = nullptr;               ///< for crn-occ-sampling
  const CalibrationSet * calib = nullptr;
  GridSpec grid;
  DepthBinSpec bins;
};

/// Slot semantics per strategy (F = sampled features, Ds = sampled depth,
/// O = occupancy, S = splat volume):
///   sampling            (F, F)
///   depth-sampling      (F * Ds, F)
///   occ-depth-sampling  (F * Ds, F * O)
///   crn-occ-sampling    (F * Ds, F * O_frustum)
///   splatting           (S, S)
LiftedVolumes lift_features(LiftStrategy strategy, const LiftInputs & in);

struct PipelineOutput
{
  Tensor radar_bev;  ///< X x Y x C_P
  Tensor occupancy;  ///< X x Y x Z
  Tensor image_bev;  ///< X x Y x compress.channels
  Tensor bev_mask;   ///< X x Y
  Tensor fused;      ///< X x Y x fuse.channels
  Tensor heatmap;    ///< K x X x Y
  Tensor regression; ///< X x Y x 8
  DetectionSet detections;
};

/// normalize -> crop -> FOV filter -> radar features -> occupancy -> depth ->
/// lift -> height compression -> fusion -> head -> decode -> NMS. Every stage
/// output is checked for NaN/Inf (NumericalError naming the stage); other
/// errors are re-thrown with the stage name prefixed.
PipelineOutput run_pipeline(
  const PipelineConfig & config, const FrameData & frame, const PipelineWeights & weights,
  const RadarFeatureProvider & provider = PillarMeanProvider());

/// Runs every frame in parallel; results are in input order.
std::vector<PipelineOutput> run_frames(
  const PipelineConfig & config, const std::vector<FrameData> & frames, const PipelineWeights & weights);

/// Throws NumericalError if any entry is NaN or infinite.
void check_finite(const Tensor & t, const std::string & stage);

}  // namespace bevlift

#endif  // BEVLIFT__PIPELINE_HPP_
