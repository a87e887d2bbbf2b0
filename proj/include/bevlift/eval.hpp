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


#ifndef BEVLIFT__EVAL_HPP_
#define BEVLIFT__EVAL_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bevlift/box.hpp"
#include "bevlift/geometry.hpp"

namespace bevlift
{

enum class IouMode
{
  kBev,
  k3d,
};

/// Rotated-box IoU. BEV mode clips one footprint polygon against the other;
/// 3D mode multiplies the BEV intersection by the vertical overlap. Throws
/// InvalidArgument for boxes with a non-positive or non-finite size.
double box_iou(const Box3D & a, const Box3D & b, IouMode mode = IouMode::kBev);

/// Area of the intersection of two convex counter-clockwise polygons.
double convex_intersection_area(
  const std::vector<Eigen::Vector2d> & subject, const std::vector<Eigen::Vector2d> & clip);

enum class RegionKind
{
  kEntireArea,
  kCorridor,
  kDistanceBand,
  kSubsetTag,
};

struct EvalRegion
{
  RegionKind kind = RegionKind::kEntireArea;
  /// Corridor bounds in the camera frame.
  double corridor_x_min = -4.0;
  double corridor_x_max = 4.0;
  double corridor_z_max = 25.0;
  /// Band [r_min, r_max) on the BEV range sqrt(x^2 + y^2) of the radar frame.
  double r_min = 0.0;
  double r_max = 0.0;
  std::string tag;

  static EvalRegion entire_area() { return {}; }
  static EvalRegion corridor();
  static EvalRegion band(double r_min, double r_max);
  static EvalRegion subset(const std::string & tag);

  /// "eaa", "roi", "band_0_25", "tag:night".
  std::string name() const;
  bool needs_calibration() const { return kind == RegionKind::kCorridor; }
};

/// Region predicate for one box center. `calib` is required for the corridor;
/// `frame_tags` for subset regions.
bool in_region(
  const Box3D & box, const EvalRegion & region, const CalibrationSet * calib,
  const std::set<std::string> & frame_tags = {});

std::vector<Box3D> region_filter(
  const std::vector<Box3D> & boxes, const EvalRegion & region, const CalibrationSet * calib,
  const std::set<std::string> & frame_tags = {});

struct MatchConfig
{
  std::map<int, double> iou_thresholds;
  IouMode iou_mode = IouMode::kBev;

  void validate() const;
};

/// Calibration per frame, with an optional fallback shared by all frames.
struct CalibrationLookup
{
  std::optional<CalibrationSet> shared;
  std::map<std::string, CalibrationSet> per_frame;

  const CalibrationSet * find(const std::string & frame) const;
};

/// 40-point interpolated AP: mean over r = 1/40 .. 40/40 of the maximum
/// precision at recall >= r (0 when unreached).
double interpolated_ap40(const std::vector<double> & recall, const std::vector<double> & precision);

struct ApResult
{
  double ap = 0.0;
  bool empty = false;  ///< no ground truth in the region; ap is 0
  std::size_t num_gt = 0;
  std::size_t num_det = 0;
  /// Cumulative curve over detections in descending score order.
  std::vector<double> recall;
  std::vector<double> precision;
};

/// AP for one class. Detections and ground truth are both filtered by the
/// region; within a frame, detections are matched in descending score order
/// to the unmatched ground-truth box of highest IoU, TP iff IoU >= the class
/// threshold.
ApResult average_precision(
  const FrameTable & dets, const FrameTable & gts, int class_id, const MatchConfig & cfg,
  const EvalRegion & region, const CalibrationLookup & calib = {});

struct ReportRow
{
  std::string class_name;  ///< "mAP" for the class mean
  std::string region;
  ApResult result;
};

struct EvalReport
{
  std::vector<ReportRow> rows;

  /// Arithmetic mean of the per-class APs for a region (empty classes count as 0).
  double mean_ap(const std::string & region) const;
};

/// Evaluates every (class, region) pair and appends one mAP row per region.
EvalReport evaluate(
  const FrameTable & dets, const FrameTable & gts, const std::vector<std::string> & class_names,
  const MatchConfig & cfg, const std::vector<EvalRegion> & regions, const CalibrationLookup & calib = {});

/// CSV columns: class,region,ap,num_gt,num_det,empty.
void write_report_csv(std::ostream & os, const EvalReport & report);
void save_report_csv(const std::filesystem::path & path, const EvalReport & report);

/// One SVG per class with a precision-recall polyline per region.
void save_pr_plots(const std::filesystem::path & dir, const EvalReport & report);

/// Parses "eaa,roi,bands,tag:X" (also "band:a-b") into regions.
std::vector<EvalRegion> parse_regions(const std::string & list);

}  // namespace bevlift

#endif  // BEVLIFT__EVAL_HPP_
