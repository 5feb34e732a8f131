#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlsprop/profile.hpp"
#include "nlsprop/soliton.hpp"

namespace nlsprop {

/// Unstable eigenpair of JL: L- phi2 = mu phi1, -L+ phi1 = mu phi2, mu > 0.
struct Eigenpair {
  double mu_star = 0.0;
  Profile phi1;  // values phi1, derivatives phi1'
  Profile phi2;
  double residual1 = 0.0;  // ||L- phi2 - mu phi1||
  double residual2 = 0.0;  // ||L+ phi1 + mu phi2||
  double normalization = 1.0;  // phi1(0)
  double tail = 0.0;           // max_i |phi_i(0.9 r_max)|
  int attempts = 0;            // BVP solves tried before acceptance

  /// (c phi1, c phi2) with the same mu.
  Eigenpair scaled(double c) const;
};

struct EigenOptions {
  double mu_guess = 1.0;
  /// Guesses tried after mu_guess, in order, until one converges to mu > 0.
  std::vector<double> mu_scan = {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  /// Negative means: the soliton's tolerances, capped at 1e-12.
  double abs_tol = -1.0;
  double rel_tol = -1.0;
  std::size_t max_nodes = 20000;
  /// Previous eigenpair (e.g. at a nearby parameter) used as the first guess.
  std::optional<Eigenpair> guess;
};

Eigenpair solve_unstable_eigenpair(const ProblemSpec& spec, const SolitonData& soliton,
                                   const EigenOptions& options = {});

struct AdjointReport {
  /// ||(JL)*(phi2, phi1) - mu (phi2, phi1)|| / ||phi||
  double swapped_plus = 0.0;
  /// ||(JL)*(phi2, -phi1) + mu (phi2, -phi1)|| / ||phi||
  double swapped_minus = 0.0;
  /// ||(JL)*(phi2, phi1) + mu (phi2, phi1)|| / ||phi|| as literally written in
  /// the source relation (equals 2 mu for a correct eigenpair).
  double literal_form = 0.0;
  /// ||L- L+ phi1 + mu^2 phi1|| / ||phi1||
  double composition = 0.0;
  std::map<std::string, double> pairings;
  bool finite = false;
};

AdjointReport check_adjoint_algebra(const Eigenpair& eigenpair, const ProblemSpec& spec,
                                    const SolitonData& soliton);

}  // namespace nlsprop
