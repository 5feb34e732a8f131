#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nlsprop/bvp.hpp"
#include "nlsprop/errors.hpp"
#include "nlsprop/ivp.hpp"
#include "nlsprop/quadrature.hpp"
#include "nlsprop/roots.hpp"

using namespace nlsprop;
using std::numbers::pi;

namespace {

Profile two_component_guess(const Mesh& mesh, double (*f)(double), double (*df)(double)) {
  std::vector<double> v(mesh.size() * 2), d(mesh.size() * 2, 0.0);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    v[2 * i] = f(mesh[i]);
    v[2 * i + 1] = df(mesh[i]);
  }
  return Profile(mesh, 2, std::move(v), std::move(d));
}

// y'' + (2/r) y' = -p y, y'(0) = 0, y(0) = 1, y(pi) = 0.
BvpSystem spherical_bessel_system() {
  BvpSystem sys;
  sys.order = 2;
  sys.parameters = 1;
  sys.singular = {0, 0, 0, -2};
  sys.rhs = [](double, std::span<const double> y, std::span<const double> p, std::span<double> f) {
    f[0] = y[1];
    f[1] = -p[0] * y[0];
  };
  sys.left_count = 2;
  sys.left_bc = [](std::span<const double> y, std::span<const double>, std::span<double> r) {
    r[0] = y[1];
    r[1] = y[0] - 1.0;
  };
  sys.right_bc = [](std::span<const double> y, std::span<const double>, std::span<double> r) {
    r[0] = y[0];
  };
  return sys;
}

double bessel_j0(double r) { return r == 0.0 ? 1.0 : std::sin(r) / r; }

}  // namespace

TEST_CASE("bvp: y'' = -y with initial data gives y(pi/2) = 1") {
  BvpSystem sys;
  sys.order = 2;
  sys.rhs = [](double, std::span<const double> y, std::span<const double>, std::span<double> f) {
    f[0] = y[1];
    f[1] = -y[0];
  };
  sys.left_count = 2;
  sys.left_bc = [](std::span<const double> y, std::span<const double>, std::span<double> r) {
    r[0] = y[0];
    r[1] = y[1] - 1.0;
  };
  sys.right_bc = [](std::span<const double>, std::span<const double>, std::span<double>) {};
  const auto guess = two_component_guess(
      Mesh::uniform(pi / 2, 10), [](double r) { return r; }, [](double) { return 1.0; });
  BvpOptions opt;
  opt.abs_tol = opt.rel_tol = 1e-10;
  const auto sol = solve_bvp(sys, guess, {}, opt);
  CHECK(sol.profile.value(pi / 2) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sol.max_error_ratio <= 1.0);
  CHECK(sol.bc_residual <= 1e-10);
}

TEST_CASE("bvp: spherical Bessel j0 through the singular origin") {
  const auto guess = two_component_guess(
      Mesh::uniform(pi, 20), [](double r) { return 1.0 - r / pi; }, [](double) { return -1 / pi; });
  BvpOptions opt;
  opt.abs_tol = opt.rel_tol = 1e-10;
  const auto sol = solve_bvp(spherical_bessel_system(), guess, {0.5}, opt);
  CHECK(sol.parameters[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sol.profile.node_value(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  double worst = 0.0;
  for (double r = 0.0; r <= pi; r += 0.01) worst = std::max(worst, std::abs(sol.profile(r) - bessel_j0(r)));
  CHECK(worst < 1e-8);
  // j0''(0) = -1/3 from the origin limit of the singular system
  CHECK(sol.profile.node_derivative(0, 1) == doctest::Approx(-1.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("bvp: Dirichlet eigenvalue recovered as an unknown parameter") {
  BvpSystem sys;
  sys.order = 2;
  sys.parameters = 1;
  sys.rhs = [](double, std::span<const double> y, std::span<const double> p, std::span<double> f) {
    f[0] = y[1];
    f[1] = -p[0] * y[0];
  };
  sys.left_count = 2;
  sys.left_bc = [](std::span<const double> y, std::span<const double>, std::span<double> r) {
    r[0] = y[0];
    r[1] = y[1] - 1.0;
  };
  sys.right_bc = [](std::span<const double> y, std::span<const double>, std::span<double> r) {
    r[0] = y[0];
  };
  const auto guess = two_component_guess(
      Mesh::uniform(1.0, 10), [](double r) { return r * (1 - r); },
      [](double r) { return 1 - 2 * r; });
  const auto sol = solve_bvp(sys, guess, {8.0});
  CHECK(std::abs(sol.parameters[0] - pi * pi) <= 1e-8);
}

TEST_CASE("bvp: tighter tolerance does not increase the defect") {
  const auto guess = two_component_guess(
      Mesh::uniform(pi, 20), [](double r) { return 1.0 - r / pi; }, [](double) { return -1 / pi; });
  double previous = 1e300;
  for (double tol : {1e-6, 5e-7, 2.5e-7, 1.25e-7}) {
    BvpOptions opt;
    opt.abs_tol = opt.rel_tol = tol;
    const auto sol = solve_bvp(spherical_bessel_system(), guess, {0.5}, opt);
    CHECK(sol.max_defect <= previous * (1 + 1e-6));
    previous = sol.max_defect;
  }
}

TEST_CASE("bvp: doubling the initial mesh moves inner products by at most 10x tolerance") {
  const double tol = 1e-9;
  BvpOptions opt;
  opt.abs_tol = opt.rel_tol = tol;
  double values[2];
  for (int pass = 0; pass < 2; ++pass) {
    const auto guess = two_component_guess(
        Mesh::uniform(pi, pass == 0 ? 16 : 32), [](double r) { return 1.0 - r / pi; },
        [](double) { return -1 / pi; });
    const auto sol = solve_bvp(spherical_bessel_system(), guess, {0.5}, opt);
    const auto y = sol.profile.component(0);
    values[pass] = inner_product(y, y, Weight::Radial3D);
  }
  CHECK(std::abs(values[0] - values[1]) <= 10 * tol);
  CHECK(values[0] == doctest::Approx(pi / 2).epsilon(1e-8));
}

TEST_CASE("bvp: node cap and divergence are reported") {
  BvpSystem sys;
  sys.order = 1;
  sys.rhs = [](double, std::span<const double> y, std::span<const double>, std::span<double> f) {
    f[0] = 1.0 + y[0] * y[0];
  };
  sys.left_count = 1;
  sys.left_bc = [](std::span<const double> y, std::span<const double>, std::span<double> r) {
    r[0] = y[0];
  };
  sys.right_bc = [](std::span<const double>, std::span<const double>, std::span<double>) {};
  const Mesh mesh = Mesh::uniform(2.0, 10);
  const Profile guess(mesh, 1, std::vector<double>(mesh.size(), 0.0),
                      std::vector<double>(mesh.size(), 0.0));
  BvpOptions opt;
  opt.max_nodes = 200;
  try {
    solve_bvp(sys, guess, {}, opt);
    FAIL("expected failure past the tan() pole");
  } catch (const Error& e) {
    const bool expected = e.kind() == ErrorKind::NonConvergence ||
                          e.kind() == ErrorKind::MeshOverflow;
    CHECK(expected);
  }

  const auto bessel_guess = two_component_guess(
      Mesh::uniform(pi, 20), [](double r) { return 1.0 - r / pi; }, [](double) { return -1 / pi; });
  BvpOptions tight;
  tight.abs_tol = tight.rel_tol = 1e-14;
  tight.max_nodes = 40;
  CHECK_THROWS_WITH_AS(solve_bvp(spherical_bessel_system(), bessel_guess, {1.0}, tight),
                       doctest::Contains("MeshOverflow"), Error);
}

TEST_CASE("ivp: constant, decaying exponential and sine") {
  auto flat = integrate_ivp([](double, double, double) { return 0.0; }, 0.0, 1.0, 0.0, 10.0);
  for (double r = 0; r <= 10; r += 0.37) CHECK(flat(r) == doctest::Approx(1.0).epsilon(1e-15));

  auto decay = integrate_ivp([](double, double u, double) { return u; }, 0.0, 1.0, -1.0, 5.0);
  CHECK(std::abs(decay(5.0) - std::exp(-5.0)) <= 1e-10 * std::exp(5.0));

  const double end = 10 * pi + 0.5;
  auto sine = integrate_ivp([](double, double u, double) { return -u; }, 0.0, 0.0, 1.0, end);
  int roots = 0;
  const auto& r = sine.samples();
  const auto& u = sine.values();
  for (std::size_t i = 1; i < r.size(); ++i)
    if (u[i - 1] != 0.0 && (u[i] > 0) != (u[i - 1] > 0)) ++roots;
  CHECK(roots == 10);
  CHECK(std::abs(sine(2.5) - std::sin(2.5)) < 1e-11);
  CHECK(std::abs(sine.derivative(2.5) - std::cos(2.5)) < 1e-10);
}

TEST_CASE("ivp: dense output reproduces the samples") {
  auto traj = integrate_ivp([](double r, double u, double du) { return -u - du / (1 + r); }, 0.0,
                            1.0, 0.0, 20.0);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    CHECK(traj.value(traj.samples()[i]) == traj.values()[i]);
    CHECK(traj.derivative(traj.samples()[i]) == doctest::Approx(traj.derivatives()[i]).epsilon(1e-13));
  }
  CHECK_THROWS_AS(integrate_ivp([](double, double, double) { return 0.0; }, 1.0, 0.0, 0.0, 1.0),
                  Error);
}

TEST_CASE("ivp: step size underflow near a blow-up") {
  CHECK_THROWS_WITH_AS(
      integrate_ivp([](double, double u, double) { return 6 * u * u; }, 0.0, 1.0, 2.0, 2.0),
      doctest::Contains("StepSizeUnderflow"), Error);
}

TEST_CASE("quadrature: Gamma integral, zero factor and sech^2") {
  const Mesh radial = Mesh::uniform(60.0, 6000);
  const auto e = Profile::from_function(
      radial, [](double r) { return std::exp(-r); }, [](double r) { return -std::exp(-r); });
  CHECK(std::abs(inner_product(e, e, Weight::Radial3D) - 0.25) <= 1e-10);

  const auto one = Profile::from_function(
      radial, [](double) { return 1.0; }, [](double) { return 0.0; });
  const auto zero = Profile::from_function(
      radial, [](double) { return 0.0; }, [](double) { return 0.0; });
  CHECK(inner_product(one, zero, Weight::Radial3D) == 0.0);

  const Mesh line = Mesh::uniform(40.0, 20000);
  const auto sech = Profile::from_function(
      line, [](double x) { return 1.0 / std::cosh(x); },
      [](double x) { return -std::tanh(x) / std::cosh(x); });
  CHECK(std::abs(inner_product(sech, sech, Weight::Line) - 2.0) <= 1e-12);
}

TEST_CASE("quadrature: symmetry and span checks") {
  const auto a = Profile::from_function(
      Mesh::graded(30.0, 300, 3.0), [](double r) { return std::exp(-r) * (1 + r); },
      [](double r) { return -r * std::exp(-r); });
  const auto b = Profile::from_function(
      Mesh::uniform(30.0, 170), [](double r) { return std::cos(r) * std::exp(-0.5 * r); },
      [](double r) { return -(std::sin(r) + 0.5 * std::cos(r)) * std::exp(-0.5 * r); });
  const double ab = inner_product(a, b, Weight::Radial3D);
  const double ba = inner_product(b, a, Weight::Radial3D);
  const double scale = inner_product(a, a, Weight::Radial3D) + inner_product(b, b, Weight::Radial3D);
  CHECK(std::abs(ab - ba) <= 1e-14 * scale);
  const auto c = Profile::from_function(
      Mesh::uniform(31.0, 10), [](double) { return 1.0; }, [](double) { return 0.0; });
  CHECK_THROWS_WITH_AS(inner_product(a, c, Weight::Line), doctest::Contains("SpanMismatch"), Error);
}

TEST_CASE("brent: square root of two and odd function") {
  auto res = brent_root([](double x) { return x * x - 2.0; }, 1.0, 2.0, 1e-12);
  CHECK(std::abs(res.x - std::sqrt(2.0)) <= 1e-12);
  CHECK(res.evaluations > 0);
  CHECK(res.evaluations == static_cast<int>(res.iterates.size()));
  CHECK(std::abs(brent_root([](double x) { return x; }, -1.0, 1.0).x) <= 1e-12);
}

TEST_CASE("brent: iterates invariant under positive scaling of fn") {
  auto f = [](double x) { return std::cos(x) - x * x * x; };
  const auto base = brent_root(f, 0.0, 2.0, 1e-13);
  for (double c : {2.0, 0.5}) {
    const auto scaled = brent_root([&](double x) { return c * f(x); }, 0.0, 2.0, 1e-13);
    CHECK(scaled.iterates == base.iterates);
  }
}

TEST_CASE("brent: errors") {
  CHECK_THROWS_WITH_AS(brent_root([](double x) { return x * x + 1; }, -1.0, 1.0),
                       doctest::Contains("NoSignChange"), Error);
  CHECK_THROWS_WITH_AS(brent_root([](double x) { return std::tanh(x - 0.3); }, -1e3, 1e3, 1e-15, 4),
                       doctest::Contains("MaxEvaluations"), Error);
}
