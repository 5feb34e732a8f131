#pragma once

#include <functional>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace nlsprop::cli {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;  // measured values against targets, or the failure
  nlohmann::ordered_json data;
  double seconds = 0.0;
};

/// Scans `points` uniform samples of [lo, hi] for the first sign change of the
/// quantity and refines it with find_threshold. Evaluations include the scan.
/// The scanned (parameter, value) pairs go to `samples` when given.
ThresholdResult scan_threshold(ProblemFamily family, const std::string& quantity, double lo,
                               double hi, int points, double x_tolerance,
                               const PipelineOptions& options,
                               std::vector<std::pair<double, double>>* samples = nullptr);

/// Criteria 1..12. `only` restricts the run to the listed ids; `progress` is
/// called after each criterion.
std::vector<CriterionResult> run_acceptance(
    const CampaignConfig& config, const std::vector<int>& only = {},
    const std::function<void(const CriterionResult&)>& progress = {});

/// "[PASS] 7 thresholds, 3D NLS: ..." style summary line.
std::string format_line(const CriterionResult& r);

}  // namespace nlsprop::cli
