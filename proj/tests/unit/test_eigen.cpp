#include <cmath>

#include "doctest.h"
#include "nlsprop/eigen.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace nlsprop;
using testing::cubic_quintic;
using testing::kind_of;
using testing::power;

namespace {

struct Case {
  SolitonData soliton;
  Eigenpair pair;
};

const Case& cubic_3d() {
  static const Case c = [] {
    Case out{solve_soliton(power(1.0)), {}};
    out.pair = solve_unstable_eigenpair(power(1.0), out.soliton);
    return out;
  }();
  return c;
}

double phi_norm(const Eigenpair& e, Weight w) {
  return weighted_norm(e.phi1, w) + weighted_norm(e.phi2, w);
}

double oracle_mu(const ProblemSpec& spec, const SolitonData& s) {
  const auto nl = spec.nonlinearity;
  return oracle::matrix_mu_star(
      spec.dim(), spec.omega, [nl](double x) { return eval_f(nl, x); },
      [nl](double x) { return eval_nonlinearity(nl, x).df; },
      [&s](double r) { return s.R.value(r); });
}

}  // namespace

TEST_CASE("3D cubic unstable eigenpair") {
  const auto& [s, e] = cubic_3d();
  CHECK(e.mu_star > 0.0);
  CHECK(e.normalization == 1.0);
  CHECK(e.phi1.node_value(0) == 1.0);
  const double n = phi_norm(e, s.weight());
  CHECK(e.residual1 <= 1e-8 * n);
  CHECK(e.residual2 <= 1e-8 * n);
  CHECK(e.tail <= 1e-6);
  CHECK(e.phi1.node_derivative(0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  CHECK(e.phi2.node_derivative(0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("mu* agrees with the matrix oracle") {
  const auto& [s, e] = cubic_3d();
  CHECK(e.mu_star == doctest::Approx(oracle_mu(power(1.0), s)).epsilon(1e-4));

  const auto spec = power(3.0, 1);
  const auto s1 = solve_soliton(spec);
  const auto e1 = solve_unstable_eigenpair(spec, s1);
  CHECK(e1.residual1 <= 1e-8 * phi_norm(e1, s1.weight()));
  CHECK(e1.residual2 <= 1e-8 * phi_norm(e1, s1.weight()));
  CHECK(e1.mu_star == doctest::Approx(oracle_mu(spec, s1)).epsilon(1e-4));
}

TEST_CASE("cubic-quintic with gamma=0 gives the cubic mu*") {
  const auto s = solve_soliton(cubic_quintic(0.0));
  const auto e = solve_unstable_eigenpair(cubic_quintic(0.0), s);
  CHECK(std::abs(e.mu_star - cubic_3d().pair.mu_star) <= 1e-6 * e.mu_star);
}

TEST_CASE("mu* does not move when r_max doubles") {
  SolitonOptions wide;
  wide.r_max = 200.0;
  const auto s = solve_soliton(power(1.0), wide);
  const auto e = solve_unstable_eigenpair(power(1.0), s);
  CHECK(std::abs(e.mu_star - cubic_3d().pair.mu_star) <= 1e-6 * e.mu_star);
}

TEST_CASE("warm start from a nearby eigenpair") {
  const auto spec = power(1.05);
  const auto s = solve_soliton(spec);
  EigenOptions opt;
  opt.guess = cubic_3d().pair;
  const auto warm = solve_unstable_eigenpair(spec, s, opt);
  CHECK(warm.attempts == 1);
  const auto cold = solve_unstable_eigenpair(spec, s);
  CHECK(warm.mu_star == doctest::Approx(cold.mu_star).epsilon(1e-9));
  CHECK(warm.mu_star > cubic_3d().pair.mu_star);
}

TEST_CASE("mu_guess must be positive") {
  const auto& s = cubic_3d().soliton;
  EigenOptions opt;
  opt.mu_guess = -1.0;
  CHECK(kind_of([&] { solve_unstable_eigenpair(power(1.0), s, opt); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("adjoint algebra") {
  const auto& [s, e] = cubic_3d();
  const auto rep = check_adjoint_algebra(e, power(1.0), s);
  CHECK(rep.finite);
  CHECK(rep.swapped_plus <= 1e-6);
  CHECK(rep.swapped_minus <= 1e-6);
  // The literally transcribed relation measures ||2 mu (phi2, phi1)|| / ||(phi2, phi1)||.
  CHECK(rep.literal_form == doctest::Approx(2.0 * e.mu_star).epsilon(1e-6));
  CHECK(rep.composition <= 1e-3);
  CHECK(std::abs(rep.pairings.at("phi1_R")) <= 1e-8);
  CHECK(std::abs(rep.pairings.at("phi2_dOmegaR")) <= 1e-8);

  const auto rep2 = check_adjoint_algebra(e.scaled(2.0), power(1.0), s);
  CHECK(rep2.swapped_plus == doctest::Approx(rep.swapped_plus).epsilon(1e-10));
  CHECK(rep2.composition == doctest::Approx(rep.composition).epsilon(1e-10));
  CHECK(rep2.pairings.at("phi1_phi2") ==
        doctest::Approx(4.0 * rep.pairings.at("phi1_phi2")).epsilon(1e-12));
}

TEST_CASE("adjoint report for the cubic-quintic gamma=0.01") {
  const auto spec = cubic_quintic(0.01);
  const auto s = solve_soliton(spec);
  const auto e = solve_unstable_eigenpair(spec, s);
  const auto rep = check_adjoint_algebra(e, spec, s);
  CHECK(rep.finite);
  CHECK(rep.pairings.size() == 5);
  CHECK(rep.swapped_plus <= 1e-6);
}

TEST_CASE("1D composition identity within the finite-difference floor") {
  const auto spec = power(3.0, 1);
  const auto s = solve_soliton(spec);
  const auto e = solve_unstable_eigenpair(spec, s);
  const auto rep = check_adjoint_algebra(e, spec, s);
  CHECK(rep.swapped_plus <= 1e-6);
  CHECK(rep.composition <= 1e-2);
}
