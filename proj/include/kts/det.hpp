#pragma once

#include <string>
#include <vector>

namespace kts {

/// One operating point of a detection error trade-off curve.
struct DetPoint {
  double threshold = 0.0;
  double miss_rate = 0.0;            // positives scored below threshold
  double false_positive_rate = 0.0;  // negatives scored at or above threshold
};

/// Threshold sweep over the union of scores: thresholds strictly increasing,
/// miss rate non-decreasing, false-positive rate non-increasing.
using DetCurve = std::vector<DetPoint>;

/// Compute the DET curve of two non-empty score sets. Every distinct score
/// becomes one threshold; a window is accepted when score >= threshold.
DetCurve compute_det(const std::vector<double>& scores_pos,
                     const std::vector<double>& scores_neg);

/// Scalar for ordering two detectors: mean miss rate over the false-positive
/// range [fpr_lo, fpr_hi], integrated on a log10(fpr) axis (trapezoidal,
/// with the curve extended flat beyond its achieved fpr range). Lower is
/// better.
double area_under_det(const DetCurve& curve, double fpr_lo = 1e-3, double fpr_hi = 0.5);

/// Serialize a curve as CSV: header `threshold,miss_rate,false_positive_rate`,
/// shortest round-trip decimal floats, LF line endings. Written atomically.
void write_det_csv(const DetCurve& curve, const std::string& path);

/// The CSV text itself (used by write_det_csv; byte-stable given the curve).
std::string det_csv_text(const DetCurve& curve);

}  // namespace kts
