#include "nlsprop/linops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "nlsprop/errors.hpp"

namespace nlsprop {

Sector Sector::harmonic(int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "harmonic index must be >= 0");
  return {Kind::Harmonic, k};
}

std::string Sector::label() const {
  if (is_parity()) return k == 0 ? "even" : "odd";
  return "k=" + std::to_string(k);
}

double LinearOperator::total_potential(double r) const {
  double v = (r <= potential.r_max() ? potential.value(r) : 0.0) + omega_shift;
  if (delta0 != 0.0) v -= delta0 * std::exp(-r);
  return v;
}

double LinearOperator::centrifugal() const {
  if (dimension == 1) return 0.0;
  return static_cast<double>(sector.k) * (sector.k + dimension - 2);
}

std::string LinearOperator::label() const {
  std::string s = family == Family::DistortedL ? "calL" : "L";
  s += sign == Sign::Plus ? "+" : "-";
  s += "^(";
  s += sector.is_parity() ? (sector.k == 0 ? "e" : "o") : std::to_string(sector.k);
  s += ")";
  return s;
}

namespace {

constexpr double kTailHigh = 1e-4;
constexpr double kTailLow = 1e-14;

// R^{p} for R >= 0 with R = 0 mapped to 0 (p > 0) .
double rpow(double R, double p) { return R > 0.0 ? std::pow(R, p) : 0.0; }

struct Sample {
  double r, R, Rp, Rpp;
};

template <class Fn>
Profile sample_potential(const SolitonData& s, Fn&& fn) {
  const auto& mesh = s.mesh();
  std::vector<double> v(mesh.size()), d(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const Sample x{mesh[i], s.R.node_value(i), s.R_prime.node_value(i),
                   s.R_prime.node_derivative(i)};
    const auto [value, deriv] = fn(x);
    v[i] = value;
    d[i] = deriv;
  }
  return Profile(mesh, 1, std::move(v), std::move(d));
}

}  // namespace

PotentialPair build_linearized_potentials(const ProblemSpec& spec, const SolitonData& soliton) {
  if (spec.is_power()) {
    const double sig = spec.nonlinearity.sigma;
    auto make = [&](double c) {
      return sample_potential(soliton, [&](const Sample& x) {
        const double R = std::abs(x.R);
        return std::pair{-c * rpow(R, 2 * sig), -c * 2 * sig * rpow(R, 2 * sig - 1) * x.Rp};
      });
    };
    return {make(2 * sig + 1), make(1.0)};
  }
  const double g = spec.nonlinearity.gamma;
  auto plus = sample_potential(soliton, [&](const Sample& x) {
    const double R2 = x.R * x.R;
    return std::pair{-3 * R2 + 5 * g * R2 * R2, (-6 * x.R + 20 * g * R2 * x.R) * x.Rp};
  });
  auto minus = sample_potential(soliton, [&](const Sample& x) {
    const double R2 = x.R * x.R;
    return std::pair{-R2 + g * R2 * R2, (-2 * x.R + 4 * g * R2 * x.R) * x.Rp};
  });
  return {std::move(plus), std::move(minus)};
}

PotentialPair build_distorted_potentials(const ProblemSpec& spec, const SolitonData& soliton) {
  if (spec.is_power()) {
    const double sig = spec.nonlinearity.sigma;
    // r R^{2 sigma - 1} R' and its r-derivative
    auto base = [sig](const Sample& x) {
      const double R = std::abs(x.R);
      if (R == 0.0) return std::pair{0.0, 0.0};
      const double p = std::pow(R, 2 * sig - 1);
      const double value = x.r * p * x.Rp;
      const double deriv = p * (x.Rp + x.r * (2 * sig - 1) * x.Rp * x.Rp / R + x.r * x.Rpp);
      return std::pair{value, deriv};
    };
    auto make = [&](double c) {
      return sample_potential(soliton, [&](const Sample& x) {
        const auto [v, d] = base(x);
        return std::pair{c * v, c * d};
      });
    };
    return {make(sig * (2 * sig + 1)), make(sig)};
  }
  const double g = spec.nonlinearity.gamma;
  auto plus = sample_potential(soliton, [&](const Sample& x) {
    const double R = x.R, R2 = R * R;
    const double a = 3 * R - 10 * g * R2 * R;
    const double da = 3 - 30 * g * R2;
    return std::pair{x.r * a * x.Rp, a * x.Rp + x.r * da * x.Rp * x.Rp + x.r * a * x.Rpp};
  });
  auto minus = sample_potential(soliton, [&](const Sample& x) {
    const double R = x.R, R2 = R * R;
    const double a = R - 2 * g * R2 * R;
    const double da = 1 - 6 * g * R2;
    return std::pair{x.r * a * x.Rp, a * x.Rp + x.r * da * x.Rp * x.Rp + x.r * a * x.Rpp};
  });
  return {std::move(plus), std::move(minus)};
}

LinearOperator make_operator(const Profile& potential, Sign sign, Family family, Sector sector,
                             int dimension, double delta0, double omega_shift) {
  if (dimension != 1 && dimension != 3)
    throw Error(ErrorKind::SectorMismatch, "dimension must be 1 or 3");
  if ((dimension == 3) != (sector.kind == Sector::Kind::Harmonic))
    throw Error(ErrorKind::SectorMismatch,
                "sector " + sector.label() + " does not belong to dimension " +
                    std::to_string(dimension));
  if (sector.is_parity() && sector.k != 0 && sector.k != 1)
    throw Error(ErrorKind::SectorMismatch, "parity sector must be even or odd");
  if (!(delta0 >= 0.0)) throw Error(ErrorKind::InvalidArgument, "delta0 must be >= 0");
  LinearOperator op;
  op.sign = sign;
  op.family = family;
  op.sector = sector;
  op.dimension = dimension;
  op.potential = potential;
  op.delta0 = delta0;
  op.omega_shift = omega_shift;
  return op;
}

LinearOperator make_operator(const ProblemSpec& spec, const SolitonData& soliton, Sign sign,
                             Family family, Sector sector, double delta0) {
  const auto pots = family == Family::L ? build_linearized_potentials(spec, soliton)
                                        : build_distorted_potentials(spec, soliton);
  const Profile& v = sign == Sign::Plus ? pots.plus : pots.minus;
  return make_operator(v, sign, family, sector, spec.dim(), delta0,
                       family == Family::L ? spec.omega : 0.0);
}

namespace {

void check_span(const LinearOperator& op, const Profile& u) {
  const double a = op.potential.r_max(), b = u.r_max();
  if (std::abs(a - b) > 1e-12 * std::max({1.0, a, b}))
    throw Error(ErrorKind::SpanMismatch, "operand span differs from the operator's potential");
}

Parity sector_parity(const Sector& s) { return s.k % 2 == 0 ? Parity::Even : Parity::Odd; }

Profile apply_with(const LinearOperator& op, const Profile& u, double first_order,
                   double centrifugal, Parity parity) {
  check_span(op, u);
  const auto d2 = u.nodal_second_derivative(0, parity);
  const auto& mesh = u.mesh();
  std::vector<double> out(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double r = mesh[i];
    const double v = u.node_value(i), dv = u.node_derivative(i);
    if (r == 0.0) {
      // Regular origin: u'/r -> u''(0); with centrifugal terms u(0) = 0 and the
      // combination vanishes for the odd-like sectors.
      out[i] = centrifugal != 0.0 ? 0.0 : -(1.0 + first_order) * d2[i] + op.total_potential(0) * v;
      continue;
    }
    out[i] = -d2[i] - first_order / r * dv + centrifugal / (r * r) * v + op.total_potential(r) * v;
  }
  return Profile::from_values(mesh, std::move(out), parity);
}

}  // namespace

Profile apply_operator(const LinearOperator& op, const Profile& u) {
  return apply_with(op, u, op.dimension - 1.0, op.centrifugal(), sector_parity(op.sector));
}

Profile apply_transformed(const LinearOperator& op, const Profile& W) {
  const double k = op.dimension == 3 ? op.sector.k : 0.0;
  // W = u / r^k extends evenly through the origin.
  return apply_with(op, W, op.dimension - 1.0 + 2.0 * k, 0.0,
                    op.dimension == 3 ? Parity::Even : sector_parity(op.sector));
}

DecayFit fit_decay(const Profile& v) {
  DecayFit fit;
  const auto& mesh = v.mesh();
  const double peak = v.sup_norm();
  if (peak == 0.0) {
    fit.decays = true;
    fit.kappa = std::numeric_limits<double>::infinity();
    return fit;
  }
  // Resolved tail: past the core, above the collocation noise floor.
  std::size_t last_peak = 0;
  for (std::size_t i = 0; i < mesh.size(); ++i)
    if (std::abs(v.node_value(i)) >= kTailHigh * peak) last_peak = i;
  std::vector<double> xs, ys;
  for (std::size_t i = last_peak + 1; i < mesh.size(); ++i) {
    const double a = std::abs(v.node_value(i));
    if (a < kTailLow * peak) break;
    xs.push_back(mesh[i]);
    ys.push_back(std::log(a));
  }
  fit.points = static_cast<int>(xs.size());
  if (xs.size() < 4) return fit;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  fit.kappa = -sxy / sxx;
  double logc = -1e300;
  for (std::size_t i = 0; i < xs.size(); ++i) logc = std::max(logc, ys[i] + fit.kappa * xs[i]);
  fit.C = std::exp(logc);
  fit.decays = fit.kappa > 0.0;
  return fit;
}

}  // namespace nlsprop
