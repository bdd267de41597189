#include "kts/det.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "kts/error.hpp"
#include "kts/io_util.hpp"

namespace kts {

DetCurve compute_det(const std::vector<double>& scores_pos,
                     const std::vector<double>& scores_neg) {
  if (scores_pos.empty() || scores_neg.empty()) {
    throw EmptyInput("compute_det: both score sets must be non-empty");
  }
  std::vector<double> pos = scores_pos;
  std::vector<double> neg = scores_neg;
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());

  std::vector<double> thresholds;
  thresholds.reserve(pos.size() + neg.size());
  thresholds.insert(thresholds.end(), pos.begin(), pos.end());
  thresholds.insert(thresholds.end(), neg.begin(), neg.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  DetCurve curve;
  curve.reserve(thresholds.size());
  const double np = static_cast<double>(pos.size());
  const double nn = static_cast<double>(neg.size());
  for (const double t : thresholds) {
    DetPoint point;
    point.threshold = t;
    const auto below_pos = std::lower_bound(pos.begin(), pos.end(), t) - pos.begin();
    const auto below_neg = std::lower_bound(neg.begin(), neg.end(), t) - neg.begin();
    point.miss_rate = static_cast<double>(below_pos) / np;
    point.false_positive_rate = (nn - static_cast<double>(below_neg)) / nn;
    curve.push_back(point);
  }
  return curve;
}

double area_under_det(const DetCurve& curve, double fpr_lo, double fpr_hi) {
  if (curve.empty()) throw EmptyInput("area_under_det: empty curve");
  if (!(fpr_lo > 0.0) || !(fpr_hi > fpr_lo)) {
    throw Error("E_BAD_ARGUMENT", "area_under_det: need 0 < fpr_lo < fpr_hi");
  }

  // Achievable operating points as (fpr, best miss), ascending in fpr.
  // Thresholds ascend along the curve while fpr descends, so reversing gives
  // ascending fpr; duplicate fpr values keep their lowest miss.
  std::vector<std::pair<double, double>> pts;
  for (auto it = curve.rbegin(); it != curve.rend(); ++it) {
    if (!pts.empty() && pts.back().first == it->false_positive_rate) {
      pts.back().second = std::min(pts.back().second, it->miss_rate);
    } else {
      pts.push_back({it->false_positive_rate, it->miss_rate});
    }
  }

  // Piecewise-linear miss(fpr), extended flat beyond the achieved range.
  auto miss_at = [&pts](double q) {
    if (q <= pts.front().first) return pts.front().second;
    if (q >= pts.back().first) return pts.back().second;
    auto hi = std::lower_bound(pts.begin(), pts.end(), q,
                               [](const auto& p, double v) { return p.first < v; });
    const auto lo = hi - 1;
    const double span = hi->first - lo->first;
    const double u = span > 0.0 ? (q - lo->first) / span : 0.0;
    return lo->second + u * (hi->second - lo->second);
  };

  // Trapezoids over log10(fpr) with breakpoints at the achieved fpr values.
  std::vector<double> grid{fpr_lo};
  for (const auto& [fpr, miss] : pts) {
    (void)miss;
    if (fpr > fpr_lo && fpr < fpr_hi) grid.push_back(fpr);
  }
  grid.push_back(fpr_hi);

  double area = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double width = std::log10(grid[i + 1]) - std::log10(grid[i]);
    area += 0.5 * width * (miss_at(grid[i]) + miss_at(grid[i + 1]));
  }
  return area / (std::log10(fpr_hi) - std::log10(fpr_lo));
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("E_FORMAT", "cannot format floating-point value");
  return std::string(buf, ptr);
}

}  // namespace

std::string det_csv_text(const DetCurve& curve) {
  std::string text = "threshold,miss_rate,false_positive_rate\n";
  for (const DetPoint& p : curve) {
    text += format_double(p.threshold);
    text += ',';
    text += format_double(p.miss_rate);
    text += ',';
    text += format_double(p.false_positive_rate);
    text += '\n';
  }
  return text;
}

void write_det_csv(const DetCurve& curve, const std::string& path) {
  write_file_atomic(path, det_csv_text(curve));
}

}  // namespace kts
