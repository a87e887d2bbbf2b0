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


#include "bevlift/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "bevlift/error.hpp"
#include "bevlift/parallel.hpp"

namespace bevlift
{
namespace
{

double cross(const Eigen::Vector2d & a, const Eigen::Vector2d & b) { return a.x() * b.y() - a.y() * b.x(); }

double polygon_area(const std::vector<Eigen::Vector2d> & poly)
{
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) s += cross(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * s;
}

void check_box(const Box3D & b)
{
  if (!b.center.allFinite() || !std::isfinite(b.yaw) || !b.size.allFinite() || !(b.size.minCoeff() > 0)) {
    throw InvalidArgument("box_iou: degenerate box");
  }
}

std::string format_number(double v)
{
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

double convex_intersection_area(
  const std::vector<Eigen::Vector2d> & subject, const std::vector<Eigen::Vector2d> & clip)
{
  std::vector<Eigen::Vector2d> out = subject;
  for (std::size_t e = 0; e < clip.size() && !out.empty(); ++e) {
    const Eigen::Vector2d & a = clip[e];
    const Eigen::Vector2d & b = clip[(e + 1) % clip.size()];
    const Eigen::Vector2d edge = b - a;
    const auto side = [&](const Eigen::Vector2d & p) { return cross(edge, p - a); };
    std::vector<Eigen::Vector2d> next;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const Eigen::Vector2d & p = out[i];
      const Eigen::Vector2d & q = out[(i + 1) % out.size()];
      const double sp = side(p), sq = side(q);
      if (sp >= 0) next.push_back(p);
      if ((sp >= 0) != (sq >= 0)) next.push_back(p + (q - p) * (sp / (sp - sq)));
    }
    out = std::move(next);
  }
  return out.size() < 3 ? 0.0 : std::max(0.0, polygon_area(out));
}

double box_iou(const Box3D & a, const Box3D & b, IouMode mode)
{
  check_box(a);
  check_box(b);
  const auto ca = a.bev_corners();
  const auto cb = b.bev_corners();
  const double inter = convex_intersection_area({ca.begin(), ca.end()}, {cb.begin(), cb.end()});
  const double area_a = a.size.x() * a.size.y(), area_b = b.size.x() * b.size.y();
  if (mode == IouMode::kBev) return std::clamp(inter / (area_a + area_b - inter), 0.0, 1.0);
  const double top = std::min(a.center.z() + a.size.z() / 2, b.center.z() + b.size.z() / 2);
  const double bottom = std::max(a.center.z() - a.size.z() / 2, b.center.z() - b.size.z() / 2);
  const double inter3 = inter * std::max(0.0, top - bottom);
  return std::clamp(inter3 / (a.volume() + b.volume() - inter3), 0.0, 1.0);
}

EvalRegion EvalRegion::corridor()
{
  EvalRegion r;
  r.kind = RegionKind::kCorridor;
  return r;
}

EvalRegion EvalRegion::band(double r_min, double r_max)
{
  if (!(r_min >= 0) || !(r_max > r_min)) throw InvalidArgument("distance band needs 0 <= r_min < r_max");
  EvalRegion r;
  r.kind = RegionKind::kDistanceBand;
  r.r_min = r_min;
  r.r_max = r_max;
  return r;
}

EvalRegion EvalRegion::subset(const std::string & tag)
{
  if (tag.empty()) throw InvalidArgument("subset region needs a tag");
  EvalRegion r;
  r.kind = RegionKind::kSubsetTag;
  r.tag = tag;
  return r;
}

std::string EvalRegion::name() const
{
  switch (kind) {
    case RegionKind::kEntireArea:
      return "eaa";
    case RegionKind::kCorridor:
      return "roi";
    case RegionKind::kDistanceBand:
      return "band_" + format_number(r_min) + "_" + format_number(r_max);
    case RegionKind::kSubsetTag:
      return "tag:" + tag;
  }
  return "?";
}

bool in_region(
  const Box3D & box, const EvalRegion & region, const CalibrationSet * calib,
  const std::set<std::string> & frame_tags)
{
  switch (region.kind) {
    case RegionKind::kEntireArea:
      return true;
    case RegionKind::kCorridor: {
      if (!calib) throw InvalidArgument("corridor region requires a calibration");
      const Eigen::Vector3d p = calib->radar_to_camera.apply(box.center);
      return p.x() > region.corridor_x_min && p.x() < region.corridor_x_max && p.z() < region.corridor_z_max;
    }
    case RegionKind::kDistanceBand: {
      const double r = std::hypot(box.center.x(), box.center.y());
      return r >= region.r_min && r < region.r_max;
    }
    case RegionKind::kSubsetTag:
      return frame_tags.count(region.tag) > 0;
  }
  return false;
}

std::vector<Box3D> region_filter(
  const std::vector<Box3D> & boxes, const EvalRegion & region, const CalibrationSet * calib,
  const std::set<std::string> & frame_tags)
{
  std::vector<Box3D> out;
  for (const auto & b : boxes) {
    if (in_region(b, region, calib, frame_tags)) out.push_back(b);
  }
  return out;
}

void MatchConfig::validate() const
{
  for (const auto & [cls, thr] : iou_thresholds) {
    if (!(thr > 0.0) || thr > 1.0) {
      throw InvalidArgument("IoU threshold for class " + std::to_string(cls) + " must be in (0, 1]");
    }
  }
}

const CalibrationSet * CalibrationLookup::find(const std::string & frame) const
{
  const auto it = per_frame.find(frame);
  if (it != per_frame.end()) return &it->second;
  return shared ? &*shared : nullptr;
}

double interpolated_ap40(const std::vector<double> & recall, const std::vector<double> & precision)
{
  if (recall.size() != precision.size()) throw InvalidArgument("interpolated_ap40: curve size mismatch");
  // Suffix maximum of precision gives the interpolated curve.
  std::vector<double> best(precision.size() + 1, 0.0);
  for (std::size_t i = precision.size(); i-- > 0;) best[i] = std::max(best[i + 1], precision[i]);
  double sum = 0.0;
  std::size_t i = 0;
  for (int k = 1; k <= 40; ++k) {
    const double r = k / 40.0;
    while (i < recall.size() && recall[i] < r - 1e-12) ++i;
    sum += best[i];
  }
  return sum / 40.0;
}

ApResult average_precision(
  const FrameTable & dets, const FrameTable & gts, int class_id, const MatchConfig & cfg,
  const EvalRegion & region, const CalibrationLookup & calib)
{
  cfg.validate();
  const auto thr_it = cfg.iou_thresholds.find(class_id);
  if (thr_it == cfg.iou_thresholds.end()) {
    throw InvalidArgument("average_precision: no IoU threshold for class " + std::to_string(class_id));
  }
  const double threshold = thr_it->second;

  struct Scored
  {
    double score;
    bool tp;
  };
  std::vector<Scored> scored;
  ApResult result;
  std::set<std::string> frames;
  for (const auto & kv : gts) frames.insert(kv.first);
  for (const auto & kv : dets) frames.insert(kv.first);

  for (const auto & frame : frames) {
    const auto g_it = gts.find(frame);
    const auto d_it = dets.find(frame);
    const std::set<std::string> no_tags;
    const auto & tags = g_it != gts.end() ? g_it->second.tags : no_tags;
    const CalibrationSet * cal = region.needs_calibration() ? calib.find(frame) : nullptr;
    if (region.needs_calibration() && !cal) {
      throw InvalidArgument("corridor region: no calibration for frame " + frame);
    }
    std::vector<Box3D> g, d;
    if (g_it != gts.end()) {
      for (const auto & b : g_it->second.boxes) {
        if (b.class_id == class_id && in_region(b, region, cal, tags)) g.push_back(b);
      }
    }
    if (d_it != dets.end()) {
      for (const auto & b : d_it->second.boxes) {
        if (b.class_id == class_id && in_region(b, region, cal, tags)) d.push_back(b);
      }
    }
    result.num_gt += g.size();
    std::stable_sort(d.begin(), d.end(), [](const Box3D & a, const Box3D & b) { return a.score > b.score; });
    std::vector<bool> used(g.size(), false);
    for (const auto & det : d) {
      double best = -1.0;
      std::size_t best_j = g.size();
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (used[j]) continue;
        const double iou = box_iou(det, g[j], cfg.iou_mode);
        if (iou >= threshold && iou > best) {
          best = iou;
          best_j = j;
        }
      }
      if (best_j < g.size()) used[best_j] = true;
      scored.push_back({det.score, best_j < g.size()});
    }
  }
  result.num_det = scored.size();
  if (result.num_gt == 0) {
    result.empty = true;
    return result;
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored & a, const Scored & b) { return a.score > b.score; });
  std::size_t tp = 0;
  for (std::size_t n = 0; n < scored.size(); ++n) {
    tp += scored[n].tp ? 1 : 0;
    result.recall.push_back(static_cast<double>(tp) / static_cast<double>(result.num_gt));
    result.precision.push_back(static_cast<double>(tp) / static_cast<double>(n + 1));
  }
  result.ap = interpolated_ap40(result.recall, result.precision);
  return result;
}

double EvalReport::mean_ap(const std::string & region) const
{
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto & row : rows) {
    if (row.region == region && row.class_name != "mAP") {
      sum += row.result.ap;
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

EvalReport evaluate(
  const FrameTable & dets, const FrameTable & gts, const std::vector<std::string> & class_names,
  const MatchConfig & cfg, const std::vector<EvalRegion> & regions, const CalibrationLookup & calib)
{
  const std::size_t nc = class_names.size();
  std::vector<ApResult> results(nc * regions.size());
  parallel_for(0, results.size(), [&](std::size_t n) {
    results[n] = average_precision(dets, gts, static_cast<int>(n % nc), cfg, regions[n / nc], calib);
  });
  EvalReport report;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const std::string name = regions[r].name();
    for (std::size_t c = 0; c < nc; ++c) report.rows.push_back({class_names[c], name, results[r * nc + c]});
    ApResult mean;
    mean.ap = report.mean_ap(name);
    for (std::size_t c = 0; c < nc; ++c) {
      mean.num_gt += results[r * nc + c].num_gt;
      mean.num_det += results[r * nc + c].num_det;
    }
    mean.empty = mean.num_gt == 0;
    report.rows.push_back({"mAP", name, mean});
  }
  return report;
}

void write_report_csv(std::ostream & os, const EvalReport & report)
{
  os << "class,region,ap,num_gt,num_det,empty\n";
  os << std::setprecision(6) << std::fixed;
  for (const auto & row : report.rows) {
    os << row.class_name << ',' << row.region << ',' << row.result.ap << ',' << row.result.num_gt << ','
       << row.result.num_det << ',' << (row.result.empty ? 1 : 0) << '\n';
  }
}

void save_report_csv(const std::filesystem::path & path, const EvalReport & report)
{
  std::ofstream os(path);
  if (!os) throw DataError("cannot write " + path.string());
  write_report_csv(os, report);
}

void save_pr_plots(const std::filesystem::path & dir, const EvalReport & report)
{
  static const char * kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};
  std::filesystem::create_directories(dir);
  std::map<std::string, std::vector<const ReportRow *>> by_class;
  for (const auto & row : report.rows) {
    if (row.class_name != "mAP") by_class[row.class_name].push_back(&row);
  }
  constexpr double kSize = 400, kPad = 40;
  for (const auto & [cls, rows] : by_class) {
    std::ofstream os(dir / ("pr_" + cls + ".svg"));
    if (!os) throw DataError("cannot write PR plot in " + dir.string());
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize + 2 * kPad << "\" height=\""
       << kSize + 2 * kPad << "\">\n";
    os << "<text x=\"" << kPad << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << cls
       << " precision-recall</text>\n";
    os << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kSize << "\" height=\"" << kSize
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << std::setprecision(2) << std::fixed;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto & res = rows[k]->result;
      const char * color = kColors[k % std::size(kColors)];
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
      for (std::size_t n = 0; n < res.recall.size(); ++n) {
        os << kPad + res.recall[n] * kSize << ',' << kPad + (1.0 - res.precision[n]) * kSize << ' ';
      }
      os << "\"/>\n";
      os << "<text x=\"" << kPad + 5 + 110.0 * k << "\" y=\"" << kPad + kSize + 15
         << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">" << rows[k]->region
         << " AP " << std::setprecision(3) << res.ap << std::setprecision(2) << "</text>\n";
    }
    os << "</svg>\n";
  }
}

std::vector<EvalRegion> parse_regions(const std::string & list)
{
  std::vector<EvalRegion> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "eaa") {
      out.push_back(EvalRegion::entire_area());
    } else if (item == "roi") {
      out.push_back(EvalRegion::corridor());
    } else if (item == "bands") {
      out.push_back(EvalRegion::band(0, 25));
      out.push_back(EvalRegion::band(25, 50));
      out.push_back(EvalRegion::band(50, 70));
    } else if (item.rfind("tag:", 0) == 0) {
      out.push_back(EvalRegion::subset(item.substr(4)));
    } else if (item.rfind("band:", 0) == 0) {
      const auto dash = item.find('-', 5);
      if (dash == std::string::npos) throw ConfigError("bad band region '" + item + "', expected band:a-b");
      try {
        out.push_back(EvalRegion::band(std::stod(item.substr(5, dash - 5)), std::stod(item.substr(dash + 1))));
      } catch (const std::logic_error &) {
        throw ConfigError("bad band region '" + item + "'");
      }
    } else {
      throw ConfigError("unknown region '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("no evaluation regions given");
  return out;
}

}  // namespace bevlift
