#include "nlsprop/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nlsprop/bvp.hpp"
#include "nlsprop/errors.hpp"
#include "nlsprop/linops.hpp"

namespace nlsprop {

Eigenpair Eigenpair::scaled(double c) const {
  Eigenpair e = *this;
  e.phi1 = phi1.scaled(c);
  e.phi2 = phi2.scaled(c);
  e.normalization *= c;
  e.residual1 *= std::abs(c);
  e.residual2 *= std::abs(c);
  e.tail *= std::abs(c);
  return e;
}

namespace {

constexpr double kDefaultTol = 1e-12;

Sector radial_sector(const ProblemSpec& spec) {
  return spec.dim() == 3 ? Sector::harmonic(0) : Sector::even();
}

// y = (phi1, phi1', phi2, phi2'), p = (mu).
BvpSystem eigen_system(const ProblemSpec& spec, const PotentialPair& pots) {
  BvpSystem sys;
  sys.order = 4;
  sys.parameters = 1;
  const double d = spec.dim();
  sys.singular.assign(16, 0.0);
  sys.singular[1 * 4 + 1] = -(d - 1.0);
  sys.singular[3 * 4 + 3] = -(d - 1.0);
  const double omega = spec.omega;
  const Profile* vp = &pots.plus;
  const Profile* vm = &pots.minus;
  sys.rhs = [omega, vp, vm](double r, std::span<const double> y, std::span<const double> p,
                            std::span<double> f) {
    const double mu = p[0];
    f[0] = y[1];
    f[1] = (omega + vp->value(r)) * y[0] + mu * y[2];
    f[2] = y[3];
    f[3] = (omega + vm->value(r)) * y[2] - mu * y[0];
  };
  sys.jacobian = [omega, vp, vm](double r, std::span<const double> y, std::span<const double> p,
                                 std::span<double> J, std::span<double> Jp) {
    for (auto& x : J) x = 0.0;
    const double mu = p[0];
    J[0 * 4 + 1] = 1.0;
    J[1 * 4 + 0] = omega + vp->value(r);
    J[1 * 4 + 2] = mu;
    J[2 * 4 + 3] = 1.0;
    J[3 * 4 + 0] = -mu;
    J[3 * 4 + 2] = omega + vm->value(r);
    Jp[0] = 0.0;
    Jp[1] = y[2];
    Jp[2] = 0.0;
    Jp[3] = -y[0];
  };
  sys.left_count = 3;
  sys.left_bc = [](std::span<const double> y, std::span<const double>, std::span<double> res) {
    res[0] = y[1];
    res[1] = y[3];
    res[2] = y[0] - 1.0;
  };
  sys.right_bc = [](std::span<const double> y, std::span<const double>, std::span<double> res) {
    res[0] = y[0];
    res[1] = y[2];
  };
  return sys;
}

Profile shape_guess(const SolitonData& s, double phi2_sign) {
  const auto& mesh = s.mesh();
  const double R0 = s.R.node_value(0);
  std::vector<double> v(mesh.size() * 4), d(mesh.size() * 4);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double a = s.R.node_value(i) / R0;
    const double da = s.R_prime.node_value(i) / R0;
    const double dda = s.R_prime.node_derivative(i) / R0;
    v[4 * i + 0] = a;
    v[4 * i + 1] = da;
    v[4 * i + 2] = phi2_sign * a;
    v[4 * i + 3] = phi2_sign * da;
    d[4 * i + 0] = da;
    d[4 * i + 1] = dda;
    d[4 * i + 2] = phi2_sign * da;
    d[4 * i + 3] = phi2_sign * dda;
  }
  return Profile(mesh, 4, std::move(v), std::move(d));
}

Profile pair_guess(const Eigenpair& e) {
  const auto& mesh = e.phi1.mesh();
  const double c = 1.0 / e.phi1.node_value(0);
  const auto d1 = e.phi1.nodal_second_derivative();
  const auto d2 = e.phi2.nodal_second_derivative();
  std::vector<double> v(mesh.size() * 4), d(mesh.size() * 4);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    v[4 * i + 0] = c * e.phi1.node_value(i);
    v[4 * i + 1] = c * e.phi1.node_derivative(i);
    v[4 * i + 2] = c * e.phi2.node_value(i);
    v[4 * i + 3] = c * e.phi2.node_derivative(i);
    d[4 * i + 0] = v[4 * i + 1];
    d[4 * i + 1] = c * d1[i];
    d[4 * i + 2] = v[4 * i + 3];
    d[4 * i + 3] = c * d2[i];
  }
  return Profile(mesh, 4, std::move(v), std::move(d));
}

struct Attempt {
  Profile guess;
  double mu;
};

double pair_norm(const Profile& a, const Profile& b, Weight w) {
  return std::hypot(weighted_norm(a, w), weighted_norm(b, w));
}

Profile combine(const Profile& a, double ca, const Profile& b, double cb) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    v[i] = ca * a.node_value(i) + cb * b.value(a.mesh()[i]);
  return Profile::from_values(a.mesh(), std::move(v));
}

}  // namespace

Eigenpair solve_unstable_eigenpair(const ProblemSpec& spec, const SolitonData& soliton,
                                   const EigenOptions& options) {
  if (!(options.mu_guess > 0.0))
    throw Error(ErrorKind::InvalidArgument, "mu_guess must be positive");
  const auto pots = build_linearized_potentials(spec, soliton);
  const auto sys = eigen_system(spec, pots);

  BvpOptions bopt;
  bopt.abs_tol = options.abs_tol > 0 ? options.abs_tol : std::min(soliton.abs_tol, kDefaultTol);
  bopt.rel_tol = options.rel_tol > 0 ? options.rel_tol : std::min(soliton.rel_tol, kDefaultTol);
  bopt.max_nodes = options.max_nodes;
  bopt.max_restarts = 0;

  std::vector<Attempt> attempts;
  if (options.guess) attempts.push_back({pair_guess(*options.guess), options.guess->mu_star});
  std::vector<double> mus{options.mu_guess};
  for (double m : options.mu_scan)
    if (m != options.mu_guess) mus.push_back(m);
  for (double m : mus)
    for (double s : {1.0, -1.0}) attempts.push_back({shape_guess(soliton, s), m});

  const double r_check = 0.9 * soliton.R.r_max();
  std::string last = "no attempt";
  ErrorKind last_kind = ErrorKind::NonConvergence;
  int tried = 0;
  for (const auto& a : attempts) {
    ++tried;
    BvpSolution sol;
    try {
      sol = solve_bvp(sys, a.guess, {a.mu}, bopt);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonConvergence && e.kind() != ErrorKind::NearSingularOperator &&
          e.kind() != ErrorKind::MeshOverflow)
        throw;
      last = e.what();
      last_kind = ErrorKind::NonConvergence;
      continue;
    }
    double mu = sol.parameters[0];
    Profile phi1 = sol.profile.component(0);
    Profile phi2 = sol.profile.component(2);
    if (mu < 0.0) {
      mu = -mu;
      phi2 = phi2.scaled(-1.0);
    }
    const double tail = std::max(std::abs(phi1.value(r_check)), std::abs(phi2.value(r_check)));
    if (!(mu > 1e-6) || !std::isfinite(mu)) {
      last = "converged to mu = " + std::to_string(sol.parameters[0]);
      last_kind = ErrorKind::WrongBranch;
      continue;
    }
    if (!(tail <= 1e-6)) {
      last = "eigenfunction tail " + std::to_string(tail) + " at 0.9 r_max";
      last_kind = ErrorKind::WrongBranch;
      continue;
    }
    Eigenpair out;
    out.mu_star = mu;
    out.phi1 = std::move(phi1);
    out.phi2 = std::move(phi2);
    out.normalization = out.phi1.node_value(0);
    out.tail = tail;
    out.attempts = tried;
    const auto Lm = make_operator(pots.minus, Sign::Minus, Family::L, radial_sector(spec),
                                  spec.dim(), 0.0, spec.omega);
    const auto Lp = make_operator(pots.plus, Sign::Plus, Family::L, radial_sector(spec),
                                  spec.dim(), 0.0, spec.omega);
    const Weight w = soliton.weight();
    out.residual1 = weighted_norm(combine(apply_operator(Lm, out.phi2), 1.0, out.phi1, -mu), w);
    out.residual2 = weighted_norm(combine(apply_operator(Lp, out.phi1), 1.0, out.phi2, mu), w);
    return out;
  }
  throw Error(last_kind, "unstable eigenpair for " + spec.label() + " not found after " +
                             std::to_string(tried) + " attempts (last: " + last + ")");
}

AdjointReport check_adjoint_algebra(const Eigenpair& e, const ProblemSpec& spec,
                                    const SolitonData& soliton) {
  AdjointReport rep;
  const auto pots = build_linearized_potentials(spec, soliton);
  const auto Lm = make_operator(pots.minus, Sign::Minus, Family::L, radial_sector(spec),
                                spec.dim(), 0.0, spec.omega);
  const auto Lp = make_operator(pots.plus, Sign::Plus, Family::L, radial_sector(spec),
                                spec.dim(), 0.0, spec.omega);
  const Weight w = soliton.weight();
  const double mu = e.mu_star;
  const Profile A = apply_operator(Lp, e.phi1);  // L+ phi1
  const Profile B = apply_operator(Lm, e.phi2);  // L- phi2
  const double scale = pair_norm(e.phi1, e.phi2, w);

  // (JL)* (a, b) = (-L+ b, L- a)
  rep.swapped_plus =
      pair_norm(combine(A, -1.0, e.phi2, -mu), combine(B, 1.0, e.phi1, -mu), w) / scale;
  rep.swapped_minus =
      pair_norm(combine(A, 1.0, e.phi2, mu), combine(B, 1.0, e.phi1, -mu), w) / scale;
  rep.literal_form =
      pair_norm(combine(A, -1.0, e.phi2, mu), combine(B, 1.0, e.phi1, mu), w) / scale;

  const Profile LmA = apply_operator(Lm, A);
  rep.composition = weighted_norm(combine(LmA, 1.0, e.phi1, mu * mu), w) /
                    weighted_norm(e.phi1, w);

  const Profile& dR = soliton.dOmegaR;
  rep.pairings["phi1_R"] = inner_product(e.phi1, soliton.R, w);
  rep.pairings["phi2_R"] = inner_product(e.phi2, soliton.R, w);
  rep.pairings["phi1_phi2"] = inner_product(e.phi1, e.phi2, w);
  if (dR.size() > 0) {
    rep.pairings["phi1_dOmegaR"] = inner_product(e.phi1, dR, w);
    rep.pairings["phi2_dOmegaR"] = inner_product(e.phi2, dR, w);
  }
  rep.finite = std::isfinite(rep.swapped_plus) && std::isfinite(rep.swapped_minus) &&
               std::isfinite(rep.literal_form) && std::isfinite(rep.composition);
  for (const auto& [k, v] : rep.pairings) rep.finite = rep.finite && std::isfinite(v);
  return rep;
}

}  // namespace nlsprop
