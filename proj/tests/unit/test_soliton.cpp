#include <cmath>

#include "doctest.h"
#include "nlsprop/linops.hpp"
#include "nlsprop/soliton.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace nlsprop;
using testing::cubic_quintic;
using testing::kind_of;
using testing::power;

namespace {

const SolitonData& cubic_3d() {
  static const SolitonData s = solve_soliton(power(1.0));
  return s;
}

// R'' for the closed form: A s (tanh^2 - sigma sech^2), z = sigma sqrt(omega) x.
double closed_form_second(double sigma, double omega, double x) {
  const double k = std::sqrt(omega);
  const double amp = std::pow((sigma + 1.0) * omega, 1.0 / (2.0 * sigma));
  const double z = sigma * k * x;
  const double s = std::pow(1.0 / std::cosh(z), 1.0 / sigma);
  const double t = std::tanh(z), sech = 1.0 / std::cosh(z);
  return amp * s * omega * (t * t - sigma * sech * sech);
}

double relative_norm(const Profile& residual, const Profile& reference, Weight w) {
  return weighted_norm(residual, w) / weighted_norm(reference, w);
}

}  // namespace

TEST_CASE("closed form: amplitudes and substitution residual") {
  const Mesh mesh = Mesh::uniform(40.0, 4000);
  for (double sigma : {1.0, 2.0, 3.5}) {
    for (double omega : {1.0, 2.0}) {
      const Profile R = closed_form_soliton_1d(sigma, omega, mesh);
      double worst = 0.0;
      for (std::size_t i = 0; i < mesh.size(); ++i) {
        const double x = mesh[i], u = R.node_value(i);
        const double res = closed_form_second(sigma, omega, x) - omega * u + std::pow(u, 2 * sigma + 1);
        worst = std::max(worst, std::abs(res));
      }
      CHECK(worst < 1e-12);
    }
  }
  CHECK(closed_form_soliton_1d(2.0, 1.0, Mesh::uniform(1.0, 2)).node_value(0) ==
        doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-15));
  CHECK(closed_form_soliton_1d(1.0, 1.0, Mesh::uniform(1.0, 2)).node_value(0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("closed form decays monotonically") {
  const Profile R = closed_form_soliton_1d(2.7, 1.3, Mesh::uniform(30.0, 600));
  for (std::size_t i = 1; i < R.size(); ++i) CHECK(R.node_value(i) <= R.node_value(i - 1));
  CHECK(R.node_value(R.size() - 1) < 1e-12);
  CHECK(kind_of([] { closed_form_soliton_1d(0.0, 1.0, Mesh::uniform(1.0, 2)); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("1D power sigma=2 matches the closed form") {
  const auto s = solve_soliton(power(2.0, 1));
  CHECK(s.R.node_value(0) == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-9));
  const Profile exact = closed_form_soliton_1d(2.0, 1.0, s.mesh());
  CHECK(sup_distance(s.R, exact) < 1e-9);
  CHECK(s.positivity_ok);
}

TEST_CASE("3D cubic amplitude agrees with an independent shooting oracle") {
  const double R0 =
      oracle::ground_state_amplitude(3, 1.0, [](double R) { return R * R * R; }, 3.0, 6.0);
  const auto& s = cubic_3d();
  CHECK(s.R.node_value(0) > 4.3);
  CHECK(s.R.node_value(0) < 4.4);
  CHECK(s.R.node_value(0) == doctest::Approx(R0).epsilon(1e-8));
  CHECK(s.residual_norm <= 1e-12);
  CHECK(s.ode_residual < 1e-6);
}

TEST_CASE("cubic-quintic with gamma=0 reproduces the cubic profile") {
  const auto cq = solve_soliton(cubic_quintic(0.0));
  CHECK(sup_distance(cq.R, cubic_3d().R) <= 1e-10);
}

TEST_CASE("dOmegaR: analytic and BVP routes agree") {
  const auto s1 = solve_soliton(power(2.0, 1));
  CHECK(s1.dOmegaR.node_value(0) ==
        doctest::Approx(0.5 * 0.5 * std::pow(3.0, 0.25)).epsilon(1e-9));

  const auto cq = solve_soliton(cubic_quintic(0.0));
  CHECK(sup_distance(cq.dOmegaR, cubic_3d().dOmegaR) <= 1e-6);
  CHECK(cubic_3d().domega_crosscheck <= 1e-6);
}

TEST_CASE("dOmegaR solves L+ u = -R") {
  for (const auto& spec : {power(1.0), cubic_quintic(0.01), power(3.0, 1)}) {
    const auto s = solve_soliton(spec);
    const Sector sec = spec.dim() == 3 ? Sector::harmonic(0) : Sector::even();
    const auto Lp = make_operator(spec, s, Sign::Plus, Family::L, sec);
    const Profile LpU = apply_operator(Lp, s.dOmegaR);
    std::vector<double> r(LpU.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = LpU.node_value(i) + s.R.node_value(i);
    const Profile res = Profile::from_values(s.mesh(), r);
    CHECK(relative_norm(res, s.R, s.weight()) <= 1e-6);
  }
}

TEST_CASE("kernel relations L- R = 0 and L+ R' = 0 in the translation sector") {
  for (const auto& spec : {power(1.0), cubic_quintic(0.01), power(3.0, 1), power(1.5, 1)}) {
    const auto s = solve_soliton(spec);
    const bool three = spec.dim() == 3;
    const auto Lm = make_operator(spec, s, Sign::Minus, Family::L,
                                  three ? Sector::harmonic(0) : Sector::even());
    CHECK(relative_norm(apply_operator(Lm, s.R), s.R, s.weight()) <= 1e-6);
    const auto Lp = make_operator(spec, s, Sign::Plus, Family::L,
                                  three ? Sector::harmonic(1) : Sector::odd());
    CHECK(relative_norm(apply_operator(Lp, s.R_prime), s.R_prime, s.weight()) <= 1e-6);
  }
}

TEST_CASE("slope condition signs and scaling value") {
  const auto cubic = slope_condition(power(1.0));
  CHECK(cubic.value < 0.0);
  CHECK(cubic.value / cubic.norm_squared == doctest::Approx(-0.5).epsilon(2e-4));
  CHECK(cubic.consistent);

  const auto sub = slope_condition(power(1.5, 1));
  CHECK(sub.value > 0.0);
  CHECK(sub.value / sub.norm_squared == doctest::Approx(1.0 / 1.5 - 0.5).epsilon(1e-4));
  CHECK(sub.consistent);

  CHECK(kind_of([] { slope_condition(power(1.0), 2.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("artificial boundary residuals") {
  const auto& s = cubic_3d();
  CHECK(abc_accepted(s.abc_residuals));
  CHECK(s.abc_residuals.count("dOmegaR_abc") == 1);

  SolitonOptions short_domain;
  short_domain.r_max = 10.0;
  const auto t = solve_soliton(power(1.0), short_domain);
  CHECK_FALSE(abc_accepted(check_abc_residuals(t)));

  // Closed form on [0, 100].
  SolitonData c;
  c.spec = power(2.0, 1);
  const Mesh mesh = Mesh::uniform(100.0, 2000);
  c.R = closed_form_soliton_1d(2.0, 1.0, mesh);
  std::vector<double> v(mesh.size()), d(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    v[i] = c.R.node_derivative(i);
    d[i] = closed_form_second(2.0, 1.0, mesh[i]);
  }
  c.R_prime = Profile(mesh, 1, v, d);
  for (const auto& [name, value] : check_abc_residuals(c)) CHECK(value <= 1e-12);
}

TEST_CASE("power-law scaling in omega") {
  const auto s4 = solve_soliton(power(1.0, 3, 4.0));
  const auto& s1 = cubic_3d();
  double worst = 0.0;
  for (std::size_t i = 0; i < s4.R.size(); ++i) {
    const double r = s4.mesh()[i];
    if (r > 50.0) break;
    worst = std::max(worst, std::abs(s4.R.node_value(i) - 2.0 * s1.R.value(2.0 * r)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("doubling r_max leaves R(0) unchanged") {
  SolitonOptions wide;
  wide.r_max = 200.0;
  const auto s = solve_soliton(power(1.0), wide);
  CHECK(std::abs(s.R.node_value(0) - cubic_3d().R.node_value(0)) <= 1e-8);
}

TEST_CASE("soliton input validation") {
  CHECK(kind_of([] { solve_soliton(cubic_quintic(0.2)); }) == ErrorKind::ValidationError);
  SolitonOptions bad;
  bad.r_max = -1.0;
  CHECK(kind_of([&] { solve_soliton(power(1.0), bad); }) == ErrorKind::InvalidArgument);
}
