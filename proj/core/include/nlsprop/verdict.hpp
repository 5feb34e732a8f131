#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlsprop/eigen.hpp"
#include "nlsprop/index.hpp"
#include "nlsprop/products.hpp"
#include "nlsprop/soliton.hpp"

namespace nlsprop {

/// The three problem families of the campaign, parametrized by sigma or gamma.
enum class ProblemFamily { Nls1d, Nls3d, Cqnls };

ProblemFamily parse_family(const std::string& name);  // "nls1d", "nls3d", "cqnls"
std::string family_name(ProblemFamily family);
std::string parameter_name(ProblemFamily family);  // "sigma" or "gamma"
ProblemSpec family_spec(ProblemFamily family, double parameter, double omega = 1.0);

struct HarmonicVerdict {
  std::string tag;  // e.g. "B+^(0)"
  Sign sign = Sign::Plus;
  Sector sector;
  int index = 0;
  int negative_directions_found = 0;
  std::string decisive_name;
  double decisive_value = 0.0;
  bool positive_on_complement = false;
  bool degenerate = false;
  std::string reason;  // empty when positive
};

/// index 0: positive. Otherwise positive iff the Gram matrix has exactly `index`
/// eigenvalues below -degeneracy_tol and the decisive quantity is not within
/// degeneracy_tol of zero. A negative degeneracy_tol means 1e-8 * max|gram|.
HarmonicVerdict harmonic_verdict(const IndexReport& index, const GramData& gram,
                                 double degeneracy_tol = -1.0,
                                 const std::string& decisive_name = "",
                                 double decisive_value = 0.0);

/// Names of the Gram entries of one sector: K1_0, K2_0, K3_0, Kratio0,
/// J1_0, J2_0, J3_0, Jratio0, K1_1 (3D) and K1_e, K2_e, K3_e, Kratio_e, J1_e,
/// J2_e, J3_e, Jratio_e, K1_o (1D). Kratio0 divides by K1 for the cubic-quintic
/// problem and by K2 otherwise; the J ratios divide by J2.
std::map<std::string, double> sector_quantities(const ProblemSpec& spec, Sign sign, Sector sector,
                                                const GramData& gram);
/// Name of the decisive quantity of the sector ("" if none).
std::string decisive_quantity(const ProblemSpec& spec, Sign sign, Sector sector);

struct PipelineOptions {
  double delta0 = 0.0;
  SolitonOptions soliton;
  EigenOptions eigen;
  IndexOptions index;
  PotentialBvpOptions products;
  double degeneracy_factor = 1e-8;
  int max_harmonic = 8;
};

struct SectorResult {
  Sign sign = Sign::Plus;
  Sector sector;
  IndexReport index;
  std::optional<GramData> gram;
  HarmonicVerdict verdict;
};

struct SpectralVerdict {
  ProblemSpec spec;
  double delta0 = 0.0;
  std::vector<HarmonicVerdict> sector_verdicts;
  bool established = false;
  std::string coercivity_note;
  std::vector<std::string> reasons;
};

struct PipelineResult {
  SolitonData soliton;
  Eigenpair eigenpair;
  std::vector<SectorResult> sectors;
  std::map<std::string, double> quantities;
  SpectralVerdict verdict;
};

/// soliton -> eigenpair -> per-sector index and Gram data -> verdicts. 3D scans
/// k = 0, 1, ... for each sign until two consecutive index-0 sectors.
PipelineResult run_pipeline(const ProblemSpec& spec, const PipelineOptions& options = {});

SpectralVerdict spectral_verdict(const ProblemSpec& spec, double delta0 = 0.0);

/// Quantities accepted by evaluate_quantity for the family, plus "slope".
std::vector<std::string> known_quantities(ProblemFamily family);

/// Previous solutions used to seed the solves at a nearby parameter.
struct WarmStart {
  std::optional<SolitonData> soliton;
  std::optional<Eigenpair> eigenpair;
};

/// Evaluates one named quantity, solving only what it needs. When `warm` is
/// given, its contents seed the solves and are replaced by the new solutions.
double evaluate_quantity(ProblemFamily family, double parameter, const std::string& name,
                         const PipelineOptions& options = {}, WarmStart* warm = nullptr);

struct ThresholdResult {
  std::string quantity;
  std::string parameter;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
  int evaluations = 0;
};

/// Brent root of parameter -> quantity(parameter) in [lo, hi]; throws
/// NoSignChange unless the end values have opposite signs.
ThresholdResult find_threshold(const std::function<double(double)>& quantity, double lo,
                               double hi, double x_tolerance, const std::string& quantity_name = "",
                               const std::string& parameter = "");

ThresholdResult find_threshold(ProblemFamily family, const std::string& quantity, double lo,
                               double hi, double x_tolerance, const PipelineOptions& options = {});

struct SweepRow {
  double parameter = 0.0;
  bool ok = false;
  std::string error;
  double mu_star = 0.0;
  std::map<std::string, int> indexes;  // "B+^(0)" -> count
  std::map<std::string, double> quantities;
  std::map<std::string, bool> positive;  // per-sector verdicts
  bool established = false;
};

/// One row per grid point in order; failures are recorded in the row.
std::vector<SweepRow> sweep(ProblemFamily family, const std::vector<double>& grid,
                            const PipelineOptions& options = {});

/// n points uniformly spaced on [lo, hi], both ends included.
std::vector<double> uniform_grid(double lo, double hi, int n);

}  // namespace nlsprop
