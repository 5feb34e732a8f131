#pragma once

#include <string>
#include <vector>

#include "nlsprop/ivp.hpp"
#include "nlsprop/linops.hpp"

namespace nlsprop {

struct IndexOptions {
  double tolerance = 1e-13;
  /// Integration span; <= 0 selects 200 (3D) or 100 (1D).
  double r_max = 0.0;
  /// Start of the 3D integration (W(eps) = 1, W'(eps) = 0).
  double epsilon = 1e-6;
};

struct RootCount {
  int count = 0;
  std::vector<double> locations;
  std::vector<double> tangential;  // |U| < 1e-9 without a sign change
};

struct AsymptoticFit {
  double C0 = 0.0;
  double C1 = 0.0;
  double fit_lo = 0.0;
  double fit_hi = 0.0;
  bool clear = false;
  /// Positive root of the asymptote, or a negative value when it has none.
  double asymptote_root = -1.0;
};

struct IndexReport {
  std::string tag;  // operator label, e.g. "calL+^(0)"
  Sector sector;
  IvpTrajectory trajectory;
  int root_count = 0;
  std::vector<double> root_locations;
  std::vector<double> tangential;
  double C0 = 0.0;
  double C1 = 0.0;
  bool farfield_clear = false;
  double delta0_used = 0.0;
};

/// U for the sector of `op`: 1D even U(0)=1, U'(0)=0; 1D odd U(0)=0, U'(0)=1;
/// 3D harmonic k integrates W'' = -((2+2k)/r) W' + (V - delta0 e^{-r}) W from eps
/// and reports U = r^k W.
IvpTrajectory compute_index_function(const LinearOperator& op, const IndexOptions& options = {});

/// Sign changes of U on (0, r_max), each polished by bisection to 1e-10.
RootCount count_positive_roots(const IvpTrajectory& trajectory);

/// Matches U at 0.8 r_max and r_max to C0 r^k + C1 r^{2-d-k} (3D) or C0 + C1 x (1D).
AsymptoticFit fit_asymptotic_constants(const IvpTrajectory& trajectory, int dimension, int k);

/// Index function, roots and far-field fit. With `require_clear` an
/// uncertified far field raises Uncertified; otherwise the report is returned
/// with farfield_clear = false.
IndexReport index_of_sector(const LinearOperator& op, const IndexOptions& options = {},
                            bool require_clear = true);

/// True when the indexes are non-increasing in k; throws MonotonicityViolated otherwise.
bool check_monotonicity(const std::vector<int>& indexes_by_k);

}  // namespace nlsprop
