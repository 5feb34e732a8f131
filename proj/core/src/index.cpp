#include "nlsprop/index.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlsprop/errors.hpp"
#include "nlsprop/roots.hpp"

namespace nlsprop {

namespace {

constexpr double kRootTolerance = 1e-10;
constexpr double kTangentialLevel = 1e-9;
constexpr double kFitFraction = 0.8;

double default_span(int dimension) { return dimension == 3 ? 200.0 : 100.0; }

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace

IvpTrajectory compute_index_function(const LinearOperator& op, const IndexOptions& options) {
  const double r_max = options.r_max > 0 ? options.r_max : default_span(op.dimension);
  IvpOptions ivp;
  ivp.tolerance = options.tolerance;

  if (op.dimension == 1) {
    if (!op.sector.is_parity())
      throw Error(ErrorKind::SectorMismatch, "1D index functions need a parity sector");
    const bool odd = op.sector.k == 1;
    auto g = [&op](double x, double u, double) { return op.total_potential(x) * u; };
    return integrate_ivp(g, 0.0, odd ? 0.0 : 1.0, odd ? 1.0 : 0.0, r_max, ivp);
  }

  if (op.sector.is_parity())
    throw Error(ErrorKind::SectorMismatch, "3D index functions need a harmonic sector");
  const int k = op.sector.k;
  const double a = 2.0 + 2.0 * k;
  auto g = [&op, a](double r, double w, double dw) {
    return -a / r * dw + op.total_potential(r) * w;
  };
  ivp.initial_step = std::min(ivp.initial_step, options.epsilon);
  return integrate_ivp(g, options.epsilon, 1.0, 0.0, r_max, ivp).times_power(k);
}

RootCount count_positive_roots(const IvpTrajectory& trajectory) {
  RootCount out;
  const auto& r = trajectory.samples();
  const auto& u = trajectory.values();
  const std::size_t n = r.size();
  std::size_t last = n;  // last sample with nonzero value
  for (std::size_t i = 0; i < n; ++i) {
    if (u[i] == 0.0) continue;
    if (last < n && sign_of(u[last]) != sign_of(u[i])) {
      const double x = bisect_root([&](double s) { return trajectory.value(s); }, r[last], r[i],
                                   kRootTolerance);
      if (x > 0.0 && x < trajectory.r_max()) out.locations.push_back(x);
    }
    last = i;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double a = std::abs(u[i]);
    if (a < kTangentialLevel && a < std::abs(u[i - 1]) && a <= std::abs(u[i + 1]) &&
        sign_of(u[i - 1]) == sign_of(u[i + 1]) && sign_of(u[i - 1]) != 0)
      out.tangential.push_back(r[i]);
  }
  out.count = static_cast<int>(out.locations.size());
  return out;
}

AsymptoticFit fit_asymptotic_constants(const IvpTrajectory& trajectory, int dimension, int k) {
  if (dimension != 1 && dimension != 3)
    throw Error(ErrorKind::InvalidArgument, "dimension must be 1 or 3");
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "k must be >= 0");
  AsymptoticFit fit;
  fit.fit_hi = trajectory.r_max();
  fit.fit_lo = kFitFraction * fit.fit_hi;
  if (!(fit.fit_lo > trajectory.r_min()) || fit.fit_hi - fit.fit_lo <= 1e-8 * fit.fit_hi)
    throw Error(ErrorKind::IllConditionedFit, "fit points too close or outside the trajectory");

  auto basis = [&](double r, double& b0, double& b1) {
    if (dimension == 1) {
      b0 = 1.0;
      b1 = r;
    } else {
      b0 = std::pow(r, k);
      b1 = std::pow(r, 2 - dimension - k);
    }
  };
  double a00, a01, a10, a11;
  basis(fit.fit_lo, a00, a01);
  basis(fit.fit_hi, a10, a11);
  // Column scaling so the determinant test measures linear independence.
  const double s0 = std::hypot(a00, a10), s1 = std::hypot(a01, a11);
  const double det = (a00 * a11 - a01 * a10) / (s0 * s1);
  if (!std::isfinite(det) || std::abs(det) < 1e-12)
    throw Error(ErrorKind::IllConditionedFit, "asymptotic basis is degenerate at the fit points");
  const double u0 = trajectory.value(fit.fit_lo), u1 = trajectory.value(fit.fit_hi);
  const double d = a00 * a11 - a01 * a10;
  fit.C0 = (u0 * a11 - u1 * a01) / d;
  fit.C1 = (a00 * u1 - a10 * u0) / d;

  // Roots of C0 b0(r) + C1 b1(r) for r > 0.
  if (fit.C0 == 0.0 && fit.C1 == 0.0) {
    throw Error(ErrorKind::IllConditionedFit, "index function vanishes at both fit points");
  } else if (dimension == 1) {
    fit.asymptote_root = fit.C1 != 0.0 ? -fit.C0 / fit.C1 : -1.0;
  } else if (fit.C0 == 0.0 || fit.C1 == 0.0) {
    fit.asymptote_root = -1.0;
  } else {
    const double q = -fit.C1 / fit.C0;  // r^{2k+d-2} = q
    const double p = 1.0 / (2 * k + dimension - 2);
    fit.asymptote_root = q > 0 ? std::pow(q, p) : -std::pow(-q, p);
  }
  fit.clear = fit.asymptote_root < fit.fit_lo;
  return fit;
}

IndexReport index_of_sector(const LinearOperator& op, const IndexOptions& options,
                            bool require_clear) {
  IndexReport rep;
  rep.tag = op.label();
  rep.sector = op.sector;
  rep.delta0_used = op.delta0;
  rep.trajectory = compute_index_function(op, options);
  auto roots = count_positive_roots(rep.trajectory);
  rep.root_count = roots.count;
  rep.root_locations = std::move(roots.locations);
  rep.tangential = std::move(roots.tangential);
  const int k = op.dimension == 3 ? op.sector.k : 0;
  auto fit = fit_asymptotic_constants(rep.trajectory, op.dimension, k);
  rep.C0 = fit.C0;
  rep.C1 = fit.C1;
  rep.farfield_clear = fit.clear;
  if (require_clear && !rep.farfield_clear)
    throw Error(ErrorKind::Uncertified,
                rep.tag + ": far-field asymptote has a root at r = " +
                    std::to_string(fit.asymptote_root) + " (counted " +
                    std::to_string(rep.root_count) + " roots)");
  return rep;
}

bool check_monotonicity(const std::vector<int>& indexes_by_k) {
  for (std::size_t k = 1; k < indexes_by_k.size(); ++k)
    if (indexes_by_k[k] > indexes_by_k[k - 1])
      throw Error(ErrorKind::MonotonicityViolated,
                  "index increases from " + std::to_string(indexes_by_k[k - 1]) + " at k=" +
                      std::to_string(k - 1) + " to " + std::to_string(indexes_by_k[k]) +
                      " at k=" + std::to_string(k));
  return true;
}

}  // namespace nlsprop
