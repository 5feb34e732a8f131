#include "nlsprop/bvp.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlsprop/errors.hpp"

namespace nlsprop {

namespace {

// Column-major band storage in the layout LAPACK's dgbtrf expects.
class BandMatrix {
 public:
  BandMatrix(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1),
        ab_(static_cast<std::size_t>(ld_) * n, 0.0) {}

  void add(int i, int j, double v) {
    ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ld_] += v;
  }

  void clear() {
    std::fill(ab_.begin(), ab_.end(), 0.0);
  }

  // Factor in place; returns reciprocal 1-norm condition estimate, 0 when singular.
  double factor() {
    anorm_ = 0.0;
    for (int j = 0; j < n_; ++j) {
      double s = 0.0;
      for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i)
        s += std::abs(ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) +
                          static_cast<std::size_t>(j) * ld_]);
      anorm_ = std::max(anorm_, s);
    }
    ipiv_.assign(n_, 0);
    const lapack_int info =
        LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_, ab_.data(), ld_, ipiv_.data());
    if (info != 0) return 0.0;
    return 1.0 / (anorm_ * inverse_norm_estimate());
  }

  void solve(std::vector<double>& b, char trans = 'N') const {
    LAPACKE_dgbtrs(LAPACK_COL_MAJOR, trans, n_, kl_, ku_, 1, ab_.data(), ld_, ipiv_.data(),
                   b.data(), n_);
  }

  // Hager's estimate of ||A^{-1}||_1 with Higham's alternating test vector.
  // LAPACK's dgbcon is avoided: its scaled triangular solves degrade to
  // O(n^2) on the badly scaled collocation matrices.
  double inverse_norm_estimate() const {
    const std::size_t n = static_cast<std::size_t>(n_);
    std::vector<double> x(n, 1.0 / static_cast<double>(n)), y, z;
    double est = 0.0;
    std::size_t last = n;
    for (int it = 0; it < 5; ++it) {
      y = x;
      solve(y);
      double s = 0.0;
      for (double v : y) s += std::abs(v);
      if (!std::isfinite(s)) return std::numeric_limits<double>::infinity();
      if (it > 0 && s <= est) break;
      est = s;
      z.resize(n);
      for (std::size_t i = 0; i < n; ++i) z[i] = y[i] >= 0.0 ? 1.0 : -1.0;
      solve(z, 'T');
      std::size_t j = 0;
      double zx = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(z[i]) > std::abs(z[j])) j = i;
        zx += z[i] * x[i];
      }
      if (std::abs(z[j]) <= zx || j == last) break;
      last = j;
      std::fill(x.begin(), x.end(), 0.0);
      x[j] = 1.0;
    }
    for (std::size_t i = 0; i < n; ++i)
      x[i] = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + static_cast<double>(i) / std::max<double>(1.0, n - 1.0));
    solve(x);
    double alt = 0.0;
    for (double v : x) alt += std::abs(v);
    return std::max(est, 2.0 * alt / (3.0 * static_cast<double>(n)));
  }

 private:
  int n_, kl_, ku_, ld_;
  std::vector<double> ab_;
  std::vector<lapack_int> ipiv_;
  double anorm_ = 0.0;
};

void invert_small(std::vector<double> a, std::size_t n, std::vector<double>& inv) {
  inv.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    if (a[piv * n + c] == 0.0)
      throw Error(ErrorKind::InvalidArgument, "I - S is singular; origin limit undefined");
    if (piv != c)
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(a[c * n + k], a[piv * n + k]);
        std::swap(inv[c * n + k], inv[piv * n + k]);
      }
    const double d = a[c * n + c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c * n + k] /= d;
      inv[c * n + k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r * n + c];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        a[r * n + k] -= f * a[c * n + k];
        inv[r * n + k] -= f * inv[c * n + k];
      }
    }
  }
}

constexpr double kLobattoOffset = 0.32732683535398857;  // sqrt(21)/14

class Collocation {
 public:
  Collocation(const BvpSystem& sys, const BvpOptions& opt)
      : sys_(sys), opt_(opt), n_(sys.order), np_(sys.parameters), m_(n_ + np_),
        nl_(sys.left_count), nr_(m_ - sys.left_count) {
    if (n_ == 0 || !sys.rhs || !sys.left_bc || !sys.right_bc)
      throw Error(ErrorKind::InvalidArgument, "incomplete BVP system");
    if (sys.left_count > m_)
      throw Error(ErrorKind::InvalidArgument, "too many left boundary conditions");
    S_ = sys.singular.empty() ? std::vector<double>(n_ * n_, 0.0) : sys.singular;
    if (S_.size() != n_ * n_) throw Error(ErrorKind::InvalidArgument, "S has wrong size");
    std::vector<double> ims(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) ims[i * n_ + j] = (i == j ? 1.0 : 0.0) - S_[i * n_ + j];
    invert_small(ims, n_, origin_inv_);
    F_.resize(n_);
    Fp_.resize(n_);
    Fm_.resize(n_);
    dFdy_.resize(n_ * n_);
    dFdp_.resize(n_ * std::max<std::size_t>(np_, 1));
    yaug_.resize(m_);
  }

  std::size_t m() const { return m_; }

  // Augmented right-hand side and optional m x m Jacobian at (r, y).
  void phi(double r, const double* y, double* f, double* J) {
    std::span<const double> ys(y, n_), ps(y + n_, np_);
    sys_.rhs(r, ys, ps, F_);
    if (J) jacobian_F(r, y);
    if (r > 0.0) {
      for (std::size_t i = 0; i < n_; ++i) {
        double s = F_[i];
        for (std::size_t k = 0; k < n_; ++k) s += S_[i * n_ + k] * y[k] / r;
        f[i] = s;
      }
      if (J) {
        for (std::size_t i = 0; i < n_; ++i) {
          for (std::size_t k = 0; k < n_; ++k) J[i * m_ + k] = dFdy_[i * n_ + k] + S_[i * n_ + k] / r;
          for (std::size_t k = 0; k < np_; ++k) J[i * m_ + n_ + k] = dFdp_[i * np_ + k];
        }
      }
    } else {
      for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < n_; ++k) s += origin_inv_[i * n_ + k] * F_[k];
        f[i] = s;
      }
      if (J) {
        for (std::size_t i = 0; i < n_; ++i) {
          for (std::size_t k = 0; k < n_; ++k) {
            double s = 0.0;
            for (std::size_t l = 0; l < n_; ++l) s += origin_inv_[i * n_ + l] * dFdy_[l * n_ + k];
            J[i * m_ + k] = s;
          }
          for (std::size_t k = 0; k < np_; ++k) {
            double s = 0.0;
            for (std::size_t l = 0; l < n_; ++l) s += origin_inv_[i * n_ + l] * dFdp_[l * np_ + k];
            J[i * m_ + n_ + k] = s;
          }
        }
      }
    }
    for (std::size_t i = n_; i < m_; ++i) {
      f[i] = 0.0;
      if (J)
        for (std::size_t k = 0; k < m_; ++k) J[i * m_ + k] = 0.0;
    }
  }

  // Boundary residuals (nl or nr values) and their Jacobian w.r.t. the augmented state.
  void boundary(bool left, const double* y, double* res, double* J) {
    const std::size_t cnt = left ? nl_ : nr_;
    if (cnt == 0) return;
    const auto& bc = left ? sys_.left_bc : sys_.right_bc;
    std::copy(y, y + m_, yaug_.begin());
    bc(std::span<const double>(yaug_.data(), n_), std::span<const double>(yaug_.data() + n_, np_),
       std::span<double>(res, cnt));
    if (!J) return;
    std::vector<double> rp(cnt), rm(cnt);
    for (std::size_t k = 0; k < m_; ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(y[k]));
      yaug_[k] = y[k] + h;
      bc(std::span<const double>(yaug_.data(), n_), std::span<const double>(yaug_.data() + n_, np_),
         rp);
      yaug_[k] = y[k] - h;
      bc(std::span<const double>(yaug_.data(), n_), std::span<const double>(yaug_.data() + n_, np_),
         rm);
      yaug_[k] = y[k];
      for (std::size_t i = 0; i < cnt; ++i) J[i * m_ + k] = (rp[i] - rm[i]) / (2 * h);
    }
  }

  struct Newton {
    bool converged = false;
    int iterations = 0;
    double rcond = 0.0;
  };

  // Damped Newton with the natural monotonicity test on a fixed mesh.
  Newton newton(const std::vector<double>& x, std::vector<double>& Y) {
    const std::size_t N = x.size();
    const int ntot = static_cast<int>(N * m_);
    const int kl = static_cast<int>(nl_ + m_ - 1);
    const int ku = static_cast<int>(2 * m_ - 1 - std::min(nl_, 2 * m_ - 1));
    BandMatrix A(ntot, kl, std::max(ku, static_cast<int>(m_) - 1));
    std::vector<double> res(ntot), delta(ntot), trial(Y.size()), res_trial(ntot);
    Newton out;
    for (int it = 0; it < opt_.max_newton; ++it) {
      out.iterations = it + 1;
      A.clear();
      assemble(x, Y, res, &A);
      out.rcond = A.factor();
      if (!(out.rcond > opt_.min_rcond))
        throw Error(ErrorKind::NearSingularOperator,
                    "collocation Newton matrix is numerically singular (rcond=" +
                        std::to_string(out.rcond) + ")");
      for (int i = 0; i < ntot; ++i) delta[i] = -res[i];
      A.solve(delta);
      const auto sc = scales(Y);
      const double dnorm = scaled_norm(delta, sc);
      if (!std::isfinite(dnorm)) return out;
      double lambda = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 12; ++ls) {
        for (std::size_t i = 0; i < Y.size(); ++i) trial[i] = Y[i] + lambda * delta[i];
        assemble(x, trial, res_trial, nullptr);
        for (int i = 0; i < ntot; ++i) res_trial[i] = -res_trial[i];
        A.solve(res_trial);
        const double tnorm = scaled_norm(res_trial, sc);
        if (std::isfinite(tnorm) && tnorm <= (1.0 - 0.5 * lambda) * dnorm + 1e-300) {
          accepted = true;
          break;
        }
        if (dnorm < 1e-9) {  // already at round-off level; accept the full step
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!accepted) return out;
      Y = trial;
      if (lambda == 1.0 && dnorm <= 1e-10) {
        out.converged = true;
        return out;
      }
    }
    return out;
  }

  struct Estimate {
    double ratio = 0.0;       // max scaled error estimate
    double raw = 0.0;         // max h*|defect|
    double normalized = 0.0;  // max h*|defect| / (1 + scale)
  };

  // Scaled local error estimate per interval.
  Estimate estimate(const std::vector<double>& x, const std::vector<double>& Y,
                                     std::vector<double>& ratio) {
    const std::size_t N = x.size();
    std::vector<double> fn(N * m_);
    for (std::size_t i = 0; i < N; ++i) phi(x[i], &Y[i * m_], &fn[i * m_], nullptr);
    const auto sc = scales(Y);
    ratio.assign(N - 1, 0.0);
    std::vector<double> s(m_), ds(m_), fs(m_);
    Estimate est;
    for (std::size_t i = 0; i + 1 < N; ++i) {
      const double h = x[i + 1] - x[i];
      double e = 0.0;
      for (double t : {0.5 - kLobattoOffset, 0.5 + kLobattoOffset}) {
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2,
                     h11 = t3 - t2;
        const double g00 = (6 * t2 - 6 * t) / h, g10 = 3 * t2 - 4 * t + 1, g01 = (-6 * t2 + 6 * t) / h,
                     g11 = 3 * t2 - 2 * t;
        for (std::size_t j = 0; j < m_; ++j) {
          const double y0 = Y[i * m_ + j], y1 = Y[(i + 1) * m_ + j];
          const double f0 = fn[i * m_ + j], f1 = fn[(i + 1) * m_ + j];
          s[j] = h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1;
          ds[j] = g00 * y0 + g10 * f0 + g01 * y1 + g11 * f1;
        }
        phi(x[i] + t * h, s.data(), fs.data(), nullptr);
        for (std::size_t j = 0; j < n_; ++j) {
          const double d = h * std::abs(ds[j] - fs[j]);
          est.raw = std::max(est.raw, d);
          est.normalized = std::max(est.normalized, d / (1.0 + sc[j]));
          e = std::max(e, d / (opt_.abs_tol + opt_.rel_tol * sc[j]));
        }
      }
      ratio[i] = e;
      est.ratio = std::max(est.ratio, e);
    }
    return est;
  }

  double bc_residual(const std::vector<double>& Y) {
    std::vector<double> r(std::max(nl_, nr_));
    double worst = 0.0;
    boundary(true, &Y[0], r.data(), nullptr);
    for (std::size_t i = 0; i < nl_; ++i) worst = std::max(worst, std::abs(r[i]));
    boundary(false, &Y[Y.size() - m_], r.data(), nullptr);
    for (std::size_t i = 0; i < nr_; ++i) worst = std::max(worst, std::abs(r[i]));
    return worst;
  }

  void node_derivatives(const std::vector<double>& x, const std::vector<double>& Y,
                        std::vector<double>& fn) {
    fn.resize(Y.size());
    for (std::size_t i = 0; i < x.size(); ++i) phi(x[i], &Y[i * m_], &fn[i * m_], nullptr);
  }

 private:
  std::vector<double> scales(const std::vector<double>& Y) const {
    std::vector<double> sc(m_, 0.0);
    const std::size_t N = Y.size() / m_;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < m_; ++j) sc[j] = std::max(sc[j], std::abs(Y[i * m_ + j]));
    return sc;
  }

  double scaled_norm(const std::vector<double>& d, const std::vector<double>& sc) const {
    double w = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
      w = std::max(w, std::abs(d[i]) / std::max(1.0, sc[i % m_]));
    return w;
  }

  void jacobian_F(double r, const double* y) {
    std::span<const double> ys(y, n_), ps(y + n_, np_);
    if (sys_.jacobian) {
      sys_.jacobian(r, ys, ps, dFdy_, std::span<double>(dFdp_.data(), n_ * np_));
      return;
    }
    std::copy(y, y + m_, yaug_.begin());
    for (std::size_t k = 0; k < m_; ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(y[k]));
      yaug_[k] = y[k] + h;
      sys_.rhs(r, std::span<const double>(yaug_.data(), n_),
               std::span<const double>(yaug_.data() + n_, np_), Fp_);
      yaug_[k] = y[k] - h;
      sys_.rhs(r, std::span<const double>(yaug_.data(), n_),
               std::span<const double>(yaug_.data() + n_, np_), Fm_);
      yaug_[k] = y[k];
      for (std::size_t i = 0; i < n_; ++i) {
        const double d = (Fp_[i] - Fm_[i]) / (2 * h);
        if (k < n_)
          dFdy_[i * n_ + k] = d;
        else
          dFdp_[i * np_ + (k - n_)] = d;
      }
    }
    sys_.rhs(r, ys, ps, F_);
  }

  // Residual vector and (optionally) the banded Jacobian.
  void assemble(const std::vector<double>& x, const std::vector<double>& Y,
                std::vector<double>& res, BandMatrix* A) {
    const std::size_t N = x.size();
    fn_.resize(N * m_);
    if (A) Jn_.resize(N * m_ * m_);
    for (std::size_t i = 0; i < N; ++i)
      phi(x[i], &Y[i * m_], &fn_[i * m_], A ? &Jn_[i * m_ * m_] : nullptr);

    std::vector<double> Jb(m_ * m_);
    // left boundary rows
    boundary(true, &Y[0], &res[0], A ? Jb.data() : nullptr);
    if (A)
      for (std::size_t r = 0; r < nl_; ++r)
        for (std::size_t c = 0; c < m_; ++c)
          A->add(static_cast<int>(r), static_cast<int>(c), Jb[r * m_ + c]);

    std::vector<double> ymid(m_), fmid(m_), Jmid(m_ * m_), P(m_ * m_);
    for (std::size_t i = 0; i + 1 < N; ++i) {
      const double h = x[i + 1] - x[i];
      const double* y0 = &Y[i * m_];
      const double* y1 = &Y[(i + 1) * m_];
      const double* f0 = &fn_[i * m_];
      const double* f1 = &fn_[(i + 1) * m_];
      for (std::size_t j = 0; j < m_; ++j) ymid[j] = 0.5 * (y0[j] + y1[j]) - h / 8.0 * (f1[j] - f0[j]);
      phi(x[i] + 0.5 * h, ymid.data(), fmid.data(), A ? Jmid.data() : nullptr);
      const std::size_t row0 = nl_ + i * m_;
      for (std::size_t j = 0; j < m_; ++j)
        res[row0 + j] = y1[j] - y0[j] - h / 6.0 * (f0[j] + 4.0 * fmid[j] + f1[j]);
      if (!A) continue;
      const double* J0 = &Jn_[i * m_ * m_];
      const double* J1 = &Jn_[(i + 1) * m_ * m_];
      // dres/dy_i = -I - h/6 (J0 + 4 Jmid (I/2 + h/8 J0))
      // dres/dy_{i+1} = I - h/6 (J1 + 4 Jmid (I/2 - h/8 J1))
      for (int side = 0; side < 2; ++side) {
        const double* Jend = side == 0 ? J0 : J1;
        const double sgn = side == 0 ? 1.0 : -1.0;
        for (std::size_t a = 0; a < m_; ++a)
          for (std::size_t b = 0; b < m_; ++b) {
            double s = 0.5 * Jmid[a * m_ + b];
            for (std::size_t c = 0; c < m_; ++c) s += sgn * h / 8.0 * Jmid[a * m_ + c] * Jend[c * m_ + b];
            P[a * m_ + b] = s;
          }
        const std::size_t col0 = (i + static_cast<std::size_t>(side)) * m_;
        for (std::size_t a = 0; a < m_; ++a)
          for (std::size_t b = 0; b < m_; ++b) {
            double v = -h / 6.0 * (Jend[a * m_ + b] + 4.0 * P[a * m_ + b]);
            if (a == b) v += side == 0 ? -1.0 : 1.0;
            A->add(static_cast<int>(row0 + a), static_cast<int>(col0 + b), v);
          }
      }
    }
    // right boundary rows
    const std::size_t rowr = nl_ + (N - 1) * m_;
    boundary(false, &Y[(N - 1) * m_], &res[rowr], A ? Jb.data() : nullptr);
    if (A)
      for (std::size_t r = 0; r < nr_; ++r)
        for (std::size_t c = 0; c < m_; ++c)
          A->add(static_cast<int>(rowr + r), static_cast<int>((N - 1) * m_ + c), Jb[r * m_ + c]);
  }

  const BvpSystem& sys_;
  const BvpOptions& opt_;
  std::size_t n_, np_, m_, nl_, nr_;
  std::vector<double> S_, origin_inv_;
  std::vector<double> F_, Fp_, Fm_, dFdy_, dFdp_, yaug_;
  std::vector<double> fn_, Jn_;
};

// Hermite interpolation of the augmented state onto new nodes.
std::vector<double> resample(const std::vector<double>& x, const std::vector<double>& Y,
                             const std::vector<double>& fn, std::size_t m,
                             const std::vector<double>& xn) {
  std::vector<double> out(xn.size() * m);
  std::size_t i = 0;
  for (std::size_t k = 0; k < xn.size(); ++k) {
    const double r = xn[k];
    while (i + 2 < x.size() && r > x[i + 1]) ++i;
    const double h = x[i + 1] - x[i];
    const double t = std::clamp((r - x[i]) / h, 0.0, 1.0);
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2,
                 h11 = t3 - t2;
    for (std::size_t j = 0; j < m; ++j)
      out[k * m + j] = h00 * Y[i * m + j] + h10 * h * fn[i * m + j] + h01 * Y[(i + 1) * m + j] +
                       h11 * h * fn[(i + 1) * m + j];
  }
  return out;
}

// Split intervals until neighbours differ by at most a factor kMaxGrading, so
// nodal finite differences on the final mesh stay well conditioned.
constexpr double kMaxGrading = 2.0;

void grade_mesh(std::vector<double>& x) {
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<double> out;
    out.reserve(x.size() + x.size() / 4);
    out.push_back(x[0]);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double h = x[i + 1] - x[i];
      const double hl = i > 0 ? x[i] - x[i - 1] : h;
      const double hr = i + 2 < x.size() ? x[i + 2] - x[i + 1] : h;
      if (h > kMaxGrading * std::min(hl, hr)) {
        out.push_back(x[i] + 0.5 * h);
        changed = true;
      }
      out.push_back(x[i + 1]);
    }
    x = std::move(out);
  }
}

}  // namespace

BvpSolution solve_bvp(const BvpSystem& system, const Profile& guess,
                      std::vector<double> parameter_guess, const BvpOptions& options) {
  if (guess.components() < system.order)
    throw Error(ErrorKind::InvalidArgument, "initial guess has too few components");
  if (parameter_guess.size() != system.parameters)
    throw Error(ErrorKind::InvalidArgument, "parameter guess has wrong length");
  Collocation col(system, options);
  const std::size_t m = col.m();
  const std::size_t n = system.order;

  std::vector<double> x = guess.mesh().nodes();
  std::vector<double> Y(x.size() * m);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) Y[i * m + j] = guess.node_value(i, j);
    for (std::size_t j = 0; j < system.parameters; ++j) Y[i * m + n + j] = parameter_guess[j];
  }
  if (x.size() > options.max_nodes)
    throw Error(ErrorKind::MeshOverflow, "initial mesh exceeds node cap");

  BvpSolution sol;
  std::vector<double> ratio, fn;
  const std::vector<double> x0 = x, Y0 = Y;
  int restarts = 0;
  for (int round = 0;; ++round) {
    auto nr = col.newton(x, Y);
    sol.newton_iterations += nr.iterations;
    sol.rcond = nr.rcond;
    if (!nr.converged) {
      // Retry from the original guess on a uniformly halved mesh.
      if (restarts < options.max_restarts && 2 * x.size() <= options.max_nodes) {
        ++restarts;
        std::vector<double> fn0;
        col.node_derivatives(x0, Y0, fn0);
        std::vector<double> xn;
        const std::size_t factor = std::size_t{1} << restarts;
        for (std::size_t i = 0; i + 1 < x0.size(); ++i)
          for (std::size_t k = 0; k < factor; ++k)
            xn.push_back(x0[i] + (x0[i + 1] - x0[i]) * static_cast<double>(k) / factor);
        xn.push_back(x0.back());
        if (xn.size() > options.max_nodes) break;
        Y = resample(x0, Y0, fn0, m, xn);
        x = std::move(xn);
        continue;
      }
      throw Error(ErrorKind::NonConvergence,
                  "Newton iteration failed after " + std::to_string(sol.newton_iterations) +
                      " iterations on " + std::to_string(x.size()) + " nodes");
    }
    const auto est = col.estimate(x, Y, ratio);
    const double worst = est.ratio;
    sol.max_error_ratio = est.ratio;
    sol.max_defect = est.raw;
    sol.max_relative_defect = est.normalized;
    if (worst <= 1.0) break;
    if (round >= options.max_refinements)
      throw Error(ErrorKind::NonConvergence,
                  "mesh refinement did not reach tolerance; error ratio " + std::to_string(worst));

    col.node_derivatives(x, Y, fn);
    std::vector<double> xn;
    xn.reserve(x.size() * 2);
    xn.push_back(x[0]);
    std::size_t i = 0;
    const std::size_t N = x.size();
    while (i + 1 < N) {
      const double h = x[i + 1] - x[i];
      if (ratio[i] > 1.0) {
        const double want = std::ceil(1.2 * std::pow(ratio[i], 0.25));
        const std::size_t k = static_cast<std::size_t>(std::clamp(want, 2.0, 8.0));
        for (std::size_t s = 1; s < k; ++s) xn.push_back(x[i] + h * static_cast<double>(s) / k);
        xn.push_back(x[i + 1]);
        ++i;
      } else if (options.allow_coarsening && i + 2 < N && ratio[i] < 0.01 &&
                 ratio[i + 1] < 0.01) {
        xn.push_back(x[i + 2]);
        i += 2;
      } else {
        xn.push_back(x[i + 1]);
        ++i;
      }
    }
    grade_mesh(xn);
    if (xn.size() > options.max_nodes)
      throw Error(ErrorKind::MeshOverflow,
                  "mesh would need " + std::to_string(xn.size()) + " nodes (cap " +
                      std::to_string(options.max_nodes) + "); error ratio " + std::to_string(worst));
    Y = resample(x, Y, fn, m, xn);
    x = std::move(xn);
    ++sol.refinements;
  }

  col.node_derivatives(x, Y, fn);
  const std::size_t N = x.size();
  std::vector<double> v(N * n), d(N * n);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      v[i * n + j] = Y[i * m + j];
      d[i * n + j] = fn[i * m + j];
    }
  sol.parameters.resize(system.parameters);
  for (std::size_t j = 0; j < system.parameters; ++j) sol.parameters[j] = Y[n + j];
  sol.bc_residual = col.bc_residual(Y);
  sol.profile = Profile(Mesh(x), n, std::move(v), std::move(d));
  return sol;
}

}  // namespace nlsprop
