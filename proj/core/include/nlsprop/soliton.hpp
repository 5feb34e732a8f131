#pragma once

#include <map>
#include <optional>
#include <string>

#include "nlsprop/model.hpp"
#include "nlsprop/profile.hpp"
#include "nlsprop/quadrature.hpp"

namespace nlsprop {

struct SolitonOptions {
  double r_max = 100.0;
  /// Collocation tolerances; negative means the dimension default
  /// (3D: 1e-12 / 1e-12, 1D: 1e-10 / 1e-10).
  double abs_tol = -1.0;
  double rel_tol = -1.0;
  std::size_t initial_intervals = 200;
  std::size_t max_nodes = 20000;
  double continuation_step = 0.05;
  /// Two-component (R, R') starting iterate; replaces the sech guess.
  std::optional<Profile> guess;
  bool compute_domega = true;
};

struct SolitonData {
  ProblemSpec spec;
  Profile R;        // values R, derivatives R'
  Profile R_prime;  // values R', derivatives R''
  Profile dOmegaR;  // values and r-derivatives of dR/domega
  double r_max = 0.0;
  double abs_tol = 0.0;
  double rel_tol = 0.0;
  /// Max over mesh intervals of h*|collocation defect| / (abs_tol/rel_tol + scale).
  double residual_norm = 0.0;
  /// Max nodal |R'' + (d-1)/r R' - omega R + f(R^2) R| / max|R| with R'' by
  /// finite differences of the stored R' values (independent of the collocation).
  double ode_residual = 0.0;
  std::map<std::string, double> abc_residuals;
  bool positivity_ok = false;
  /// Power law only: sup-norm gap between the analytic and the BVP dR/domega.
  double domega_crosscheck = -1.0;
  int newton_iterations = 0;
  int continuation_steps = 0;

  Weight weight() const { return spec.dim() == 3 ? Weight::Radial3D : Weight::Line; }
  const Mesh& mesh() const { return R.mesh(); }
  /// Two-component (R, R') profile, usable as a continuation guess.
  Profile state() const;
};

SolitonData solve_soliton(const ProblemSpec& spec, const SolitonOptions& options = {});

/// R(x) = ((sigma+1) omega sech^2(sigma sqrt(omega) x))^{1/(2 sigma)} on the mesh.
Profile closed_form_soliton_1d(double sigma, double omega, const Mesh& mesh);

/// dR/domega: analytic (1/(2 omega))((1/sigma) R + r R') for the power law,
/// linear BVP L+ u = -R otherwise.
Profile solve_domega_R(const ProblemSpec& spec, const SolitonData& soliton);
Profile domega_R_bvp(const ProblemSpec& spec, const SolitonData& soliton);
Profile domega_R_analytic(const ProblemSpec& spec, const SolitonData& soliton);

struct SlopeResult {
  double value = 0.0;              // 2 <R, dR/domega>
  double finite_difference = 0.0;  // central difference of <R, R> in omega
  double norm_squared = 0.0;       // <R, R>
  double relative_gap = 0.0;
  bool consistent = false;         // relative_gap <= 1e-3
};

SlopeResult slope_condition(const ProblemSpec& spec, double delta_omega = 1e-3,
                            const SolitonOptions& options = {});

/// Far-field diagnostics: the two artificial boundary conditions and the
/// relative tail sizes of R and dR/domega at r_max.
std::map<std::string, double> check_abc_residuals(const SolitonData& soliton);
bool abc_accepted(const std::map<std::string, double>& residuals, double limit = 1e-6);

}  // namespace nlsprop
