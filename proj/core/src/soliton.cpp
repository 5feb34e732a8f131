#include "nlsprop/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "nlsprop/bvp.hpp"
#include "nlsprop/errors.hpp"

namespace nlsprop {

namespace {

double effective_sigma(const ProblemSpec& spec) {
  return spec.is_power() ? spec.nonlinearity.sigma : 1.0;
}

// Coefficient b in the far-field condition u + b u' = 0 for the soliton.
double soliton_abc_coefficient(const ProblemSpec& spec, double r_max) {
  const double k = std::sqrt(spec.omega);
  if (spec.dim() == 1) return 1.0 / k;
  return r_max / (1.0 + k * r_max);
}

BvpSystem soliton_system(const ProblemSpec& spec, double r_max) {
  BvpSystem sys;
  sys.order = 2;
  const double d = spec.dim();
  sys.singular = {0.0, 0.0, 0.0, -(d - 1.0)};
  const auto nl = spec.nonlinearity;
  const double omega = spec.omega;
  sys.rhs = [nl, omega](double, std::span<const double> y, std::span<const double>,
                        std::span<double> f) {
    f[0] = y[1];
    f[1] = omega * y[0] - soliton_nonlinearity(nl, y[0]).value;
  };
  sys.jacobian = [nl, omega](double, std::span<const double> y, std::span<const double>,
                             std::span<double> J, std::span<double>) {
    J[0] = 0.0;
    J[1] = 1.0;
    J[2] = omega - soliton_nonlinearity(nl, y[0]).derivative;
    J[3] = 0.0;
  };
  sys.left_count = 1;
  sys.left_bc = [](std::span<const double> y, std::span<const double>, std::span<double> r) {
    r[0] = y[1];
  };
  const double b = soliton_abc_coefficient(spec, r_max);
  sys.right_bc = [b](std::span<const double> y, std::span<const double>, std::span<double> r) {
    r[0] = y[0] + b * y[1];
  };
  return sys;
}

Profile sech_guess(const ProblemSpec& spec, const Mesh& mesh) {
  const double sig = effective_sigma(spec);
  const double c = spec.dim() == 3 ? 3.0 : 1.0;
  const double k = std::sqrt(spec.omega);
  const double amp = c * std::pow((sig + 1.0) * spec.omega, 1.0 / (2.0 * sig));
  std::vector<double> v(mesh.size() * 2), d(mesh.size() * 2, 0.0);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double z = sig * k * mesh[i];
    const double s = std::pow(1.0 / std::cosh(z), 1.0 / sig);
    v[2 * i] = amp * s;
    v[2 * i + 1] = -amp * k * s * std::tanh(z);
  }
  return Profile(mesh, 2, std::move(v), std::move(d));
}

BvpOptions bvp_options(const SolitonOptions& opt, double abs_tol, double rel_tol) {
  BvpOptions b;
  b.max_restarts = 0;
  b.abs_tol = abs_tol;
  b.rel_tol = rel_tol;
  b.max_nodes = opt.max_nodes;
  return b;
}

double ode_residual(const ProblemSpec& spec, const Profile& R) {
  const auto d2 = R.nodal_second_derivative();
  const double d = spec.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < R.size(); ++i) {
    const double r = R.mesh()[i];
    const double u = R.node_value(i), du = R.node_derivative(i);
    const double lap = r == 0.0 ? d * d2[i] : d2[i] + (d - 1.0) / r * du;
    const double res = lap - spec.omega * u + soliton_nonlinearity(spec.nonlinearity, u).value;
    worst = std::max(worst, std::abs(res));
  }
  return worst / std::max(R.sup_norm(), 1e-300);
}

bool positive_on_interior(const Profile& R) {
  for (std::size_t i = 0; i + 1 < R.size(); ++i)
    if (!(R.node_value(i) > 0.0)) return false;
  return true;
}

SolitonData finish(const ProblemSpec& spec, const BvpSolution& sol, const SolitonOptions& opt,
                   double abs_tol, double rel_tol) {
  SolitonData out;
  out.spec = spec;
  out.R = sol.profile.component(0);
  out.R_prime = sol.profile.component(1);
  out.r_max = opt.r_max;
  out.abs_tol = abs_tol;
  out.rel_tol = rel_tol;
  out.residual_norm = sol.max_relative_defect;
  out.newton_iterations = sol.newton_iterations;
  out.positivity_ok = positive_on_interior(out.R);
  if (!out.positivity_ok)
    throw Error(ErrorKind::NotGroundState,
                "soliton profile for " + spec.label() + " is not positive on [0, r_max)");
  out.ode_residual = ode_residual(spec, out.R);
  return out;
}

SolitonData solve_direct(const ProblemSpec& spec, const Profile& guess, const SolitonOptions& opt,
                         double abs_tol, double rel_tol) {
  const auto sol =
      solve_bvp(soliton_system(spec, opt.r_max), guess, {}, bvp_options(opt, abs_tol, rel_tol));
  return finish(spec, sol, opt, abs_tol, rel_tol);
}

constexpr double kContinuationAnchorGamma = 0.1;
constexpr double kContinuationTolerance = 1e-8;

ProblemSpec with_parameter(ProblemSpec spec, double value) {
  if (spec.is_power())
    spec.nonlinearity.sigma = value;
  else
    spec.nonlinearity.gamma = value;
  return spec;
}

double parameter_of(const ProblemSpec& spec) {
  return spec.is_power() ? spec.nonlinearity.sigma : spec.nonlinearity.gamma;
}

// Walk one parameter from `from` (already solved in prev) to `to` with an
// adaptive step no larger than max_step.
SolitonData continue_along(SolitonData prev, double to, double max_step,
                           const SolitonOptions& opt, double abs_tol, double rel_tol, int& solves) {
  double at = parameter_of(prev.spec);
  double step = max_step;
  const double min_step = 1e-4 * max_step;
  while (at != to) {
    const double next = std::abs(to - at) <= step ? to : at + std::copysign(step, to - at);
    try {
      prev = solve_direct(with_parameter(prev.spec, next), prev.state(), opt, abs_tol, rel_tol);
      ++solves;
      at = next;
      step = std::min(max_step, 1.5 * step);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonConvergence && e.kind() != ErrorKind::NotGroundState) throw;
      step *= 0.5;
      if (step < min_step)
        throw Error(ErrorKind::NonConvergence, "soliton continuation stalled at " +
                                                   prev.spec.label() + ": " + e.what());
    }
  }
  return prev;
}

// Continuation from the cubic-quintic anchor (which converges from the sech
// guess) down to gamma = 0 and then along sigma to the target.
SolitonData solve_by_continuation(const ProblemSpec& spec, const Mesh& mesh,
                                  const SolitonOptions& options, double abs_tol, double rel_tol) {
  SolitonOptions opt = options;
  opt.guess.reset();
  // Intermediate points only need to be good guesses for the next step.
  const double loose_abs = std::max(abs_tol, kContinuationTolerance);
  const double loose_rel = std::max(rel_tol, kContinuationTolerance);
  ProblemSpec anchor = spec;
  // gamma enters only through gamma * omega after rescaling R and r.
  anchor.nonlinearity = NonlinearitySpec::cubic_quintic(kContinuationAnchorGamma / spec.omega);
  const double max_step = std::clamp(options.continuation_step, 1e-6, 0.05);
  int solves = 1;
  SolitonData cur = solve_direct(anchor, sech_guess(anchor, mesh), opt, loose_abs, loose_rel);
  if (spec.is_power()) {
    cur = continue_along(std::move(cur), 0.0, max_step, opt, loose_abs, loose_rel, solves);
    cur.spec.nonlinearity = NonlinearitySpec::power(1.0);
    cur = continue_along(std::move(cur), spec.nonlinearity.sigma, max_step, opt, loose_abs,
                         loose_rel, solves);
  } else {
    cur = continue_along(std::move(cur), spec.nonlinearity.gamma, max_step, opt, loose_abs,
                         loose_rel, solves);
  }
  cur = solve_direct(spec, cur.state(), opt, abs_tol, rel_tol);
  ++solves;
  cur.spec = spec;
  cur.continuation_steps = solves;
  return cur;
}

}  // namespace

Profile SolitonData::state() const {
  std::vector<double> v(R.size() * 2), d(R.size() * 2);
  for (std::size_t i = 0; i < R.size(); ++i) {
    v[2 * i] = R.node_value(i);
    v[2 * i + 1] = R_prime.node_value(i);
    d[2 * i] = R.node_derivative(i);
    d[2 * i + 1] = R_prime.node_derivative(i);
  }
  return Profile(R.mesh(), 2, std::move(v), std::move(d));
}

SolitonData solve_soliton(const ProblemSpec& spec, const SolitonOptions& options) {
  spec.validate();
  if (!(options.r_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "r_max must be positive");
  const bool three = spec.dim() == 3;
  const double abs_tol = options.abs_tol > 0 ? options.abs_tol : (three ? 1e-12 : 1e-10);
  const double rel_tol = options.rel_tol > 0 ? options.rel_tol : (three ? 1e-12 : 1e-10);

  const Mesh mesh = Mesh::graded(options.r_max, options.initial_intervals, 3.0);
  const Profile guess = options.guess ? *options.guess : sech_guess(spec, mesh);

  SolitonData out;
  try {
    out = solve_direct(spec, guess, options, abs_tol, rel_tol);
  } catch (const Error& e) {
    const bool recoverable = e.kind() == ErrorKind::NonConvergence ||
                             e.kind() == ErrorKind::NotGroundState ||
                             e.kind() == ErrorKind::NearSingularOperator;
    if (!recoverable) throw;
    out = solve_by_continuation(spec, mesh, options, abs_tol, rel_tol);
  }
  if (options.compute_domega) {
    out.dOmegaR = solve_domega_R(spec, out);
    if (spec.is_power()) {
      const auto bvp = domega_R_bvp(spec, out);
      out.domega_crosscheck = sup_distance(out.dOmegaR, bvp);
    }
  }
  out.abc_residuals = check_abc_residuals(out);
  return out;
}

Profile closed_form_soliton_1d(double sigma, double omega, const Mesh& mesh) {
  if (!(sigma > 0.0) || !(omega > 0.0))
    throw Error(ErrorKind::InvalidArgument, "closed form needs sigma > 0 and omega > 0");
  const double k = std::sqrt(omega);
  const double amp = std::pow((sigma + 1.0) * omega, 1.0 / (2.0 * sigma));
  std::vector<double> v(mesh.size()), d(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double z = sigma * k * mesh[i];
    const double s = std::pow(1.0 / std::cosh(z), 1.0 / sigma);
    v[i] = amp * s;
    d[i] = -amp * k * s * std::tanh(z);
  }
  return Profile(mesh, 1, std::move(v), std::move(d));
}

Profile domega_R_analytic(const ProblemSpec& spec, const SolitonData& soliton) {
  if (!spec.is_power())
    throw Error(ErrorKind::InvalidArgument, "analytic dR/domega exists only for the power law");
  const double inv_sigma = 1.0 / spec.nonlinearity.sigma;
  const double scale = 0.5 / spec.omega;
  const auto& mesh = soliton.mesh();
  std::vector<double> v(mesh.size()), d(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double r = mesh[i];
    const double R = soliton.R.node_value(i);
    const double Rp = soliton.R_prime.node_value(i);
    const double Rpp = soliton.R_prime.node_derivative(i);
    v[i] = scale * (inv_sigma * R + r * Rp);
    d[i] = scale * ((inv_sigma + 1.0) * Rp + r * Rpp);
  }
  return Profile(mesh, 1, std::move(v), std::move(d));
}

Profile domega_R_bvp(const ProblemSpec& spec, const SolitonData& soliton) {
  BvpSystem sys;
  sys.order = 2;
  const double d = spec.dim();
  sys.singular = {0.0, 0.0, 0.0, -(d - 1.0)};
  const auto nl = spec.nonlinearity;
  const double omega = spec.omega;
  const Profile* R = &soliton.R;
  sys.rhs = [nl, omega, R](double r, std::span<const double> y, std::span<const double>,
                           std::span<double> f) {
    const double Rv = R->value(r);
    f[0] = y[1];
    f[1] = (omega - soliton_nonlinearity(nl, Rv).derivative) * y[0] + Rv;
  };
  sys.jacobian = [nl, omega, R](double r, std::span<const double>, std::span<const double>,
                                std::span<double> J, std::span<double>) {
    J[0] = 0.0;
    J[1] = 1.0;
    J[2] = omega - soliton_nonlinearity(nl, R->value(r)).derivative;
    J[3] = 0.0;
  };
  sys.left_count = 1;
  sys.left_bc = [](std::span<const double> y, std::span<const double>, std::span<double> r) {
    r[0] = y[1];
  };
  const double b = 1.0 / std::sqrt(omega);
  sys.right_bc = [b](std::span<const double> y, std::span<const double>, std::span<double> r) {
    r[0] = y[0] + b * y[1];
  };
  const double sig = effective_sigma(spec);
  const auto& mesh = soliton.mesh();
  std::vector<double> v(mesh.size() * 2), dv(mesh.size() * 2, 0.0);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double r = mesh[i];
    v[2 * i] = 0.5 / omega * (soliton.R.node_value(i) / sig + r * soliton.R_prime.node_value(i));
    v[2 * i + 1] = 0.5 / omega *
                   ((1.0 / sig + 1.0) * soliton.R_prime.node_value(i) +
                    r * soliton.R_prime.node_derivative(i));
  }
  BvpOptions opt;
  opt.abs_tol = soliton.abs_tol;
  opt.rel_tol = soliton.rel_tol;
  const auto sol = solve_bvp(sys, Profile(mesh, 2, std::move(v), std::move(dv)), {}, opt);
  // Back onto the soliton mesh so all soliton profiles share nodes.
  std::vector<double> u(mesh.size()), du(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    u[i] = sol.profile.value(mesh[i], 0);
    du[i] = sol.profile.value(mesh[i], 1);
  }
  return Profile(mesh, 1, std::move(u), std::move(du));
}

Profile solve_domega_R(const ProblemSpec& spec, const SolitonData& soliton) {
  return spec.is_power() ? domega_R_analytic(spec, soliton) : domega_R_bvp(spec, soliton);
}

SlopeResult slope_condition(const ProblemSpec& spec, double delta_omega,
                            const SolitonOptions& options) {
  if (!(delta_omega > 0.0) || !(delta_omega < spec.omega))
    throw Error(ErrorKind::InvalidArgument, "delta_omega must lie in (0, omega)");
  SolitonOptions opt = options;
  opt.compute_domega = true;
  const auto base = solve_soliton(spec, opt);
  const Weight w = base.weight();
  SlopeResult out;
  out.norm_squared = inner_product(base.R, base.R, w);
  out.value = 2.0 * inner_product(base.R, base.dOmegaR, w);

  SolitonOptions side = options;
  side.compute_domega = false;
  side.guess = base.state();
  ProblemSpec lo = spec, hi = spec;
  lo.omega -= delta_omega;
  hi.omega += delta_omega;
  const auto Rlo = solve_soliton(lo, side);
  const auto Rhi = solve_soliton(hi, side);
  out.finite_difference =
      (inner_product(Rhi.R, Rhi.R, w) - inner_product(Rlo.R, Rlo.R, w)) / (2.0 * delta_omega);
  out.relative_gap = std::abs(out.finite_difference - out.value) /
                     std::max(std::abs(out.value), 1e-300);
  out.consistent = out.relative_gap <= 1e-3;
  return out;
}

std::map<std::string, double> check_abc_residuals(const SolitonData& s) {
  std::map<std::string, double> out;
  const double rm = s.R.r_max();
  const double b = soliton_abc_coefficient(s.spec, rm);
  const double Rn = s.R.node_value(s.R.size() - 1);
  const double Rpn = s.R_prime.node_value(s.R.size() - 1);
  out["R_abc"] = std::abs(Rn + b * Rpn);
  out["R_tail"] = std::abs(Rn) / std::max(s.R.sup_norm(), 1e-300);
  if (s.dOmegaR.size() > 0) {
    const std::size_t n = s.dOmegaR.size() - 1;
    const double u = s.dOmegaR.node_value(n), du = s.dOmegaR.node_derivative(n);
    out["dOmegaR_abc"] = std::abs(u + du / std::sqrt(s.spec.omega));
    out["dOmegaR_tail"] = std::abs(u) / std::max(s.dOmegaR.sup_norm(), 1e-300);
  }
  return out;
}

bool abc_accepted(const std::map<std::string, double>& residuals, double limit) {
  return std::all_of(residuals.begin(), residuals.end(),
                     [limit](const auto& kv) { return kv.second <= limit; });
}

}  // namespace nlsprop
