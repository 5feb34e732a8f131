#include "nlsprop/products.hpp"

#include <algorithm>
#include <cmath>

#include "nlsprop/bvp.hpp"
#include "nlsprop/errors.hpp"
#include "nlsprop/quadrature.hpp"

namespace nlsprop {

namespace {

Weight weight_of(const LinearOperator& op) {
  return op.dimension == 3 ? Weight::Radial3D : Weight::Line;
}

// rhs(r) / r^k, with the limit at r = 0 taken from the Hermite derivatives.
double reduced_rhs(const Profile& rhs, int k, double r) {
  if (k == 0) return rhs.value(r);
  if (r > 0.0) return rhs.value(r) / std::pow(r, k);
  if (k == 1) return rhs.derivative(0.0);
  return 0.5 * rhs.second_derivative(0.0);
}

Profile zero_like(const Profile& rhs) {
  const auto& mesh = rhs.mesh();
  return Profile(mesh, 1, std::vector<double>(mesh.size(), 0.0),
                 std::vector<double>(mesh.size(), 0.0));
}

}  // namespace

Profile solve_potential_bvp(const LinearOperator& op, const Profile& rhs,
                            const PotentialBvpOptions& options) {
  if (rhs.components() != 1) throw Error(ErrorKind::InvalidArgument, "rhs must be scalar");
  const bool three = op.dimension == 3;
  if (three == op.sector.is_parity())
    throw Error(ErrorKind::SectorMismatch, "sector does not match the operator dimension");
  const int k = three ? op.sector.k : 0;
  if (k > 2) throw Error(ErrorKind::InvalidArgument, "potential BVPs support k <= 2");
  if (rhs.sup_norm() == 0.0) return zero_like(rhs);
  if (!fit_decay(rhs).decays)
    throw Error(ErrorKind::InvalidArgument, "rhs does not decay exponentially");

  const bool odd = !three && op.sector.k == 1;
  const double r_max = rhs.r_max();
  BvpSystem sys;
  sys.order = 2;
  if (three) sys.singular = {0.0, 0.0, 0.0, -(2.0 + 2.0 * k)};
  const LinearOperator* L = &op;
  const Profile* f = &rhs;
  sys.rhs = [L, f, k](double r, std::span<const double> y, std::span<const double>,
                      std::span<double> out) {
    out[0] = y[1];
    out[1] = L->total_potential(r) * y[0] - reduced_rhs(*f, k, r);
  };
  sys.jacobian = [L](double r, std::span<const double>, std::span<const double>,
                     std::span<double> J, std::span<double>) {
    J[0] = 0.0;
    J[1] = 1.0;
    J[2] = L->total_potential(r);
    J[3] = 0.0;
  };
  sys.left_count = 1;
  sys.left_bc = [odd](std::span<const double> y, std::span<const double>, std::span<double> res) {
    res[0] = odd ? y[0] : y[1];
  };
  const double c = three ? (2.0 * k + 1.0) / r_max : 0.0;
  sys.right_bc = [c](std::span<const double> y, std::span<const double>, std::span<double> res) {
    res[0] = y[1] + c * y[0];
  };

  BvpOptions opt;
  opt.abs_tol = options.abs_tol > 0 ? options.abs_tol : (three ? 1e-12 : 1e-8);
  opt.rel_tol = options.rel_tol > 0 ? options.rel_tol : (three ? 1e-12 : 1e-10);
  opt.max_nodes = options.max_nodes;
  opt.max_restarts = 0;
  const auto& mesh = rhs.mesh();
  Profile guess(mesh, 2, std::vector<double>(2 * mesh.size(), 0.0),
                std::vector<double>(2 * mesh.size(), 0.0));
  const auto sol = solve_bvp(sys, guess, {}, opt);

  const auto& out_mesh = sol.profile.mesh();
  std::vector<double> u(out_mesh.size()), du(out_mesh.size());
  for (std::size_t i = 0; i < out_mesh.size(); ++i) {
    const double r = out_mesh[i];
    const double W = sol.profile.node_value(i, 0), dW = sol.profile.node_value(i, 1);
    if (k == 0) {
      u[i] = W;
      du[i] = dW;
    } else {
      const double rk = std::pow(r, k);
      u[i] = rk * W;
      du[i] = k * std::pow(r, k - 1) * W + rk * dW;
    }
  }
  return Profile(out_mesh, 1, std::move(u), std::move(du));
}

double GramData::max_abs() const {
  double m = 0.0;
  for (const auto& row : gram)
    for (double g : row) m = std::max(m, std::abs(g));
  return m;
}

double GramData::smallest_eigenvalue() const {
  if (gram.empty()) throw Error(ErrorKind::InvalidArgument, "empty Gram matrix");
  if (gram.size() == 1) return gram[0][0];
  const double a = gram[0][0], b = gram[0][1], d = gram[1][1];
  const double mid = 0.5 * (a + d), rad = std::hypot(0.5 * (a - d), b);
  return mid - rad;
}

GramData gram_matrix(const LinearOperator& op, const std::vector<LabeledProfile>& rhs_list,
                     const PotentialBvpOptions& options) {
  if (rhs_list.size() > 2)
    throw Error(ErrorKind::InvalidArgument, "Gram data is defined for at most two directions");
  GramData g;
  g.tag = op.label();
  const Weight w = weight_of(op);
  const std::size_t n = rhs_list.size();
  for (const auto& item : rhs_list) {
    g.rhs_labels.push_back(item.label);
    g.solutions.push_back(solve_potential_bvp(op, item.profile, options));
  }
  std::vector<std::vector<double>> raw(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      raw[i][j] = inner_product(rhs_list[i].profile, g.solutions[j], w);
  g.gram.assign(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      g.gram[i][j] = 0.5 * (raw[i][j] + raw[j][i]);
      g.consistency_error = std::max(g.consistency_error, std::abs(raw[i][j] - raw[j][i]));
    }
  for (std::size_t j = 0; j < n; ++j) {
    const auto Lu = apply_operator(op, g.solutions[j]);
    const double direct = inner_product(Lu, g.solutions[j], w);
    const double scale = weighted_norm(rhs_list[j].profile, w) * weighted_norm(g.solutions[j], w);
    if (scale > 0.0)
      g.two_way_error = std::max(g.two_way_error, std::abs(direct - raw[j][j]) / scale);
  }

  if (n == 1) {
    g.ratios["g11"] = g.gram[0][0];
  } else if (n == 2) {
    const double a = g.gram[0][0], b = g.gram[0][1], d = g.gram[1][1];
    const double det = a * d - b * b;
    g.degenerate = std::abs(det) <= 1e-12 * std::max(a * a, d * d);
    g.ratios["det"] = det;
    g.ratios["det_over_g11"] = det / a;
    g.ratios["det_over_g22"] = det / d;
    const double mid = 0.5 * (a + d), rad = std::hypot(0.5 * (a - d), b);
    g.ratios["eig_min"] = mid - rad;
    g.ratios["eig_max"] = mid + rad;
  }
  return g;
}

namespace {

// R / sigma + r R', with derivative from R''.
Profile scaling_direction(const SolitonData& s, double sigma) {
  const auto& mesh = s.mesh();
  std::vector<double> v(mesh.size()), d(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double r = mesh[i];
    const double Rp = s.R_prime.node_value(i), Rpp = s.R_prime.node_derivative(i);
    v[i] = s.R.node_value(i) / sigma + r * Rp;
    d[i] = (1.0 / sigma + 1.0) * Rp + r * Rpp;
  }
  return Profile(mesh, 1, std::move(v), std::move(d));
}

Profile times_r(const Profile& p) {
  const auto& mesh = p.mesh();
  std::vector<double> v(mesh.size()), d(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    v[i] = mesh[i] * p.node_value(i);
    d[i] = p.node_value(i) + mesh[i] * p.node_derivative(i);
  }
  return Profile(mesh, 1, std::move(v), std::move(d));
}

}  // namespace

std::vector<LabeledProfile> sector_rhs_set(const ProblemSpec& spec, const SolitonData& soliton,
                                           const Eigenpair& eigenpair, Sign sign, Sector sector) {
  const bool three = spec.dim() == 3;
  if (three == sector.is_parity())
    throw Error(ErrorKind::UnknownSector,
                sector.label() + " is not a sector of the " + spec.label() + " problem");
  const std::string x = three ? "r" : "x";
  std::vector<LabeledProfile> out;
  if (sector.k == 0) {
    if (sign == Sign::Plus) {
      out.push_back({"R", soliton.R});
      out.push_back({"phi2", eigenpair.phi2});
    } else {
      if (spec.is_power())
        out.push_back({"R/sigma+" + x + "R'", scaling_direction(soliton, spec.nonlinearity.sigma)});
      else
        out.push_back({"dOmegaR", soliton.dOmegaR});
      out.push_back({"phi1", eigenpair.phi1});
    }
  } else if (sector.k == 1 && sign == Sign::Plus) {
    out.push_back({x + "R", times_r(soliton.R)});
  }
  return out;
}

}  // namespace nlsprop
