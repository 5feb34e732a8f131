#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the collocation or IVP code of the library.

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// Classical RK4 for R'' = -(d-1)/r R' + omega R - g(R) from a series start
// near r = 0. Returns +1 when R crosses zero (amplitude too large), -1 when
// R' turns positive while R > 0 (too small), 0 if neither before r_end.
inline int shoot(double R0, int dim, double omega, const std::function<double(double)>& g,
                 double h = 2e-4, double r_end = 30.0) {
  const double r0 = 1e-6;
  // R(r) ~ R0 + (omega R0 - g(R0)) r^2 / (2 d)
  const double c = (omega * R0 - g(R0)) / (2.0 * dim);
  double r = r0, y = R0 + c * r0 * r0, dy = 2.0 * c * r0;
  auto acc = [&](double rr, double u, double du) {
    return -(dim - 1.0) / rr * du + omega * u - g(u);
  };
  while (r < r_end) {
    const double k1 = dy, l1 = acc(r, y, dy);
    const double k2 = dy + 0.5 * h * l1, l2 = acc(r + 0.5 * h, y + 0.5 * h * k1, dy + 0.5 * h * l1);
    const double k3 = dy + 0.5 * h * l2, l3 = acc(r + 0.5 * h, y + 0.5 * h * k2, dy + 0.5 * h * l2);
    const double k4 = dy + h * l3, l4 = acc(r + h, y + h * k3, dy + h * l3);
    y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    dy += h / 6.0 * (l1 + 2 * l2 + 2 * l3 + l4);
    r += h;
    if (y < 0.0) return 1;
    if (dy > 0.0) return -1;
  }
  return 0;
}

// Ground-state amplitude R(0) by bisection on the shooting classification.
inline double ground_state_amplitude(int dim, double omega, const std::function<double(double)>& g,
                                     double lo, double hi, double tol = 1e-11) {
  if (shoot(lo, dim, omega, g) != -1 || shoot(hi, dim, omega, g) != 1)
    throw std::runtime_error("shooting bracket does not straddle the ground state");
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    const int s = shoot(mid, dim, omega, g);
    if (s == 0) return mid;
    (s > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Second-order radial (3D, v = r u, v(0) = 0) or even (1D, cell-centred grid
// with a reflecting origin) discretization on [0, r_max] with n unknowns.
struct Grid {
  int dim;
  int n;
  double h;
  double node(int i) const { return dim == 3 ? (i + 1) * h : (i + 0.5) * h; }
  double lap_diag(int i) const { return (dim == 1 && i == 0 ? 1.0 : 2.0) / (h * h); }
  double lap_off() const { return -1.0 / (h * h); }
};

inline Grid make_grid(int dim, double r_max, int n) {
  return {dim, n, dim == 3 ? r_max / (n + 1) : r_max / n};
}

// Thomas algorithm for a symmetric tridiagonal system (diagonal d, off-diagonal e).
inline void tridiagonal_solve(std::vector<double> d, double e, std::vector<double>& b) {
  const std::size_t n = d.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = e / d[i - 1];
    d[i] -= m * e;
    b[i] -= m * b[i - 1];
  }
  b[n - 1] /= d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) b[i] = (b[i] - e * b[i + 1]) / d[i];
}

// Discrete ground state on the grid (in the unknowns of the grid, i.e. v = r R
// in 3D) by Newton from `guess(r)` = R(r). g(R) = f(R^2) R, dg its derivative.
inline std::vector<double> discrete_ground_state(const Grid& grid, double omega,
                                                 const std::function<double(double)>& g,
                                                 const std::function<double(double)>& dg,
                                                 const std::function<double(double)>& guess) {
  const int n = grid.n;
  auto scale = [&](int i) { return grid.dim == 3 ? grid.node(i) : 1.0; };
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = scale(i) * std::max(guess(grid.node(i)), 1e-300);
  for (int it = 0; it < 50; ++it) {
    std::vector<double> F(n), J(n);
    for (int i = 0; i < n; ++i) {
      const double s = scale(i), R = v[i] / s;
      double lap = grid.lap_diag(i) * v[i];
      if (i > 0) lap += grid.lap_off() * v[i - 1];
      if (i + 1 < n) lap += grid.lap_off() * v[i + 1];
      F[i] = -(lap + omega * v[i] - s * g(R));
      J[i] = grid.lap_diag(i) + omega - dg(R);
    }
    tridiagonal_solve(J, grid.lap_off(), F);
    double step = 0.0, size = 0.0;
    for (int i = 0; i < n; ++i) {
      v[i] += F[i];
      step = std::max(step, std::abs(F[i]));
      size = std::max(size, std::abs(v[i]));
    }
    if (step <= 1e-14 * size) return v;
  }
  throw std::runtime_error("discrete ground state Newton did not converge");
}

// Most negative eigenvalue of the discretized L- L+ around the discrete ground
// state. Both operators are symmetric tridiagonal and L- is positive
// semidefinite with kernel R_h; with L- + eps = C C^T (C lower bidiagonal),
// L- L+ is similar to C^T L+ C, symmetric with bandwidth 2, and LAPACK dsbevx
// returns its smallest eigenvalue. f is the nonlinearity in s = R^2.
inline double most_negative_eigenvalue(int dim, double omega,
                                       const std::function<double(double)>& f,
                                       const std::function<double(double)>& df,
                                       const std::function<double(double)>& guess, double r_max,
                                       int n) {
  const Grid grid = make_grid(dim, r_max, n);
  auto g = [&](double R) { return f(R * R) * R; };
  auto dg = [&](double R) { return f(R * R) + 2.0 * df(R * R) * R * R; };
  const auto v = discrete_ground_state(grid, omega, g, dg, guess);
  const double eps = 1e-12;
  std::vector<double> pd(n), md(n);
  for (int i = 0; i < n; ++i) {
    const double R = v[i] / (dim == 3 ? grid.node(i) : 1.0);
    pd[i] = grid.lap_diag(i) + omega - dg(R);
    md[i] = grid.lap_diag(i) + omega - f(R * R) + eps;
  }
  const double off = grid.lap_off();
  std::vector<double> c(n), s(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double a = md[i];
    if (i > 0) {
      s[i] = off / c[i - 1];
      a -= s[i] * s[i];
    }
    if (!(a > 0.0)) throw std::runtime_error("discrete L- is not positive definite");
    c[i] = std::sqrt(a);
  }
  auto C = [&](int i, int j) -> double {
    if (i == j) return c[j];
    if (i == j + 1) return s[i];
    return 0.0;
  };
  auto P = [&](int i, int j) -> double {
    if (i == j) return pd[i];
    if (std::abs(i - j) == 1) return off;
    return 0.0;
  };
  const int kd = 2;
  std::vector<double> ab(static_cast<std::size_t>(kd + 1) * n, 0.0);  // upper band, col-major
  for (int j = 0; j < n; ++j)
    for (int i = std::max(0, j - kd); i <= j; ++i) {
      double m = 0.0;
      for (int a = i; a <= i + 1 && a < n; ++a)
        for (int b = j; b <= j + 1 && b < n; ++b) m += C(a, i) * P(a, b) * C(b, j);
      ab[static_cast<std::size_t>(kd + i - j) + static_cast<std::size_t>(j) * (kd + 1)] = m;
    }
  std::vector<double> w(n), z(1), q(1);
  std::vector<lapack_int> ifail(n);
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'I', 'U', n, kd, ab.data(), kd + 1, q.data(), 1, 0.0,
                     0.0, 1, 1, 0.0, &found, w.data(), z.data(), 1, ifail.data());
  if (info != 0 || found != 1) throw std::runtime_error("dsbevx failed");
  return w[0];
}

// mu* from the n- and 2n-point matrices with one Richardson step (the
// discretization error is O(h^2)).
inline double matrix_mu_star(int dim, double omega, const std::function<double(double)>& f,
                             const std::function<double(double)>& df,
                             const std::function<double(double)>& guess, double r_max = 100.0,
                             int n = 4000) {
  const double a = std::sqrt(-most_negative_eigenvalue(dim, omega, f, df, guess, r_max, n));
  const double b = std::sqrt(-most_negative_eigenvalue(dim, omega, f, df, guess, r_max, 2 * n));
  return (4.0 * b - a) / 3.0;
}

}  // namespace oracle
