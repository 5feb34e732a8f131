#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nlsprop/profile.hpp"

namespace nlsprop {

/// First-order system y' = S y / r + F(r, y, p) on [0, r_max] with separated
/// boundary conditions and optional unknown constant parameters p.
///
/// S is a constant matrix; the solution is assumed regular at r = 0, so
/// S y(0) = 0 must be implied by the left boundary conditions. At the origin
/// the solver uses y'(0) = (I - S)^{-1} F(0, y(0), p) and never divides by r.
struct BvpSystem {
  using Rhs = std::function<void(double r, std::span<const double> y,
                                 std::span<const double> p, std::span<double> f)>;
  /// dF/dy (order x order, row-major) and dF/dp (order x parameters, row-major).
  using Jacobian =
      std::function<void(double r, std::span<const double> y, std::span<const double> p,
                         std::span<double> dfdy, std::span<double> dfdp)>;
  using Boundary = std::function<void(std::span<const double> y, std::span<const double> p,
                                      std::span<double> residual)>;

  std::size_t order = 0;
  std::size_t parameters = 0;
  std::vector<double> singular;  // order x order row-major; empty means S = 0
  Rhs rhs;
  Jacobian jacobian;  // optional: finite differences when empty
  std::size_t left_count = 0;  // right count = order + parameters - left_count
  Boundary left_bc;
  Boundary right_bc;
};

struct BvpOptions {
  /// Accept an interval when h * |defect_j| <= abs_tol + rel_tol * scale_j,
  /// with scale_j = max |y_j| over the mesh.
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_nodes = 20000;
  int max_newton = 40;
  int max_refinements = 40;
  /// Reciprocal condition estimate below which the Newton matrix is declared singular.
  double min_rcond = 1e-15;
  bool allow_coarsening = true;
  /// Retries from the original guess on uniformly refined meshes after a Newton failure.
  int max_restarts = 2;
};

struct BvpSolution {
  /// Components 0..order-1; derivative values are y'(r) from the ODE.
  Profile profile;
  std::vector<double> parameters;
  double max_defect = 0.0;      // max over intervals of h * |defect| (unscaled)
  double max_error_ratio = 0.0; // max scaled error estimate; <= 1 when accepted
  double max_relative_defect = 0.0;  // max h * |defect_j| / (1 + scale_j)
  double bc_residual = 0.0;
  int newton_iterations = 0;
  int refinements = 0;
  double rcond = 0.0;           // last reciprocal condition estimate
};

/// Fourth-order mono-implicit Runge-Kutta (Lobatto IIIA / Simpson) collocation
/// with damped Newton iteration and defect-driven mesh refinement.
BvpSolution solve_bvp(const BvpSystem& system, const Profile& guess,
                      std::vector<double> parameter_guess, const BvpOptions& options = {});

}  // namespace nlsprop
