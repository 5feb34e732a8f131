#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "nlsprop/errors.hpp"
#include "nlsprop/verdict.hpp"

namespace nlsprop::cli {

// ParseError carries the offending line, ValidationError the offending field.
class ConfigError : public Error {
 public:
  ConfigError(ErrorKind kind, const std::string& what, int line, std::string field)
      : Error(kind, what), line_(line), field_(std::move(field)) {}

  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

struct CampaignConfig {
  // [problem]
  ProblemFamily family = ProblemFamily::Nls3d;
  double sigma = 1.0;
  double gamma = 0.01;
  double omega = 1.0;

  // [domains]
  double r_max_soliton = 100.0;
  double r_max_index_3d = 200.0;
  double r_max_index_1d = 100.0;

  // [tolerances]
  double soliton_tol_3d = 1e-12;
  double soliton_tol_1d = 1e-10;
  double index_tol = 1e-13;
  double products_tol_3d = 1e-12;
  double products_abs_tol_1d = 1e-8;
  double products_rel_tol_1d = 1e-10;
  double threshold_tol_3d = 1e-7;
  double threshold_tol_cq = 1e-8;
  double threshold_tol_1d = 1e-10;

  // [verdict]
  std::vector<double> delta0 = {0.0, 1e-4};
  double degeneracy_factor = 1e-8;
  int max_harmonic = 8;

  // [sweep]; points <= 0 selects the family's campaign grid.
  double sweep_lo = 0.0;
  double sweep_hi = 0.0;
  int sweep_points = 0;

  // [output]
  std::string out_dir = ".";

  /// The key = value lines that were read, in file order.
  std::vector<std::pair<std::string, std::string>> overrides;

  double parameter() const { return family == ProblemFamily::Cqnls ? gamma : sigma; }
  ProblemSpec spec() const { return family_spec(family, parameter(), omega); }
  double threshold_tolerance() const;
  /// Library options with this configuration's domains and tolerances.
  PipelineOptions pipeline_options(double delta0_value) const;
  PipelineOptions pipeline_options() const { return pipeline_options(delta0.front()); }
  /// Throws ValidationError naming the first invalid field.
  void validate() const;
};

CampaignConfig parse_config_text(const std::string& text);
CampaignConfig parse_config(const std::string& path);

/// Every field with its effective value, plus the list of overrides.
nlohmann::ordered_json config_echo(const CampaignConfig& config);

/// The campaign grid of each family: 41 points on [0.8, 1.2] (3D), 25 on
/// [0, 0.012] (cubic-quintic), 41 on [2.3, 6.3] (1D).
std::vector<double> campaign_grid(ProblemFamily family);

}  // namespace nlsprop::cli
