#include "nlsprop/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlsprop/errors.hpp"

namespace nlsprop {

IvpTrajectory::IvpTrajectory(std::vector<double> r, std::vector<double> u, std::vector<double> du,
                             std::vector<double> d2u)
    : r_(std::move(r)), u_(std::move(u)), du_(std::move(du)), d2u_(std::move(d2u)) {
  if (r_.empty() || u_.size() != r_.size() || du_.size() != r_.size() || d2u_.size() != r_.size())
    throw Error(ErrorKind::InvalidArgument, "trajectory arrays must have equal nonzero length");
  for (std::size_t i = 1; i < r_.size(); ++i)
    if (!(r_[i] > r_[i - 1]))
      throw Error(ErrorKind::InvalidArgument, "trajectory samples must be strictly increasing");
}

std::size_t IvpTrajectory::locate(double r) const {
  if (r_.size() < 2) return 0;
  if (r <= r_.front()) return 0;
  if (r >= r_.back()) return r_.size() - 2;
  auto it = std::upper_bound(r_.begin(), r_.end(), r);
  return static_cast<std::size_t>(it - r_.begin()) - 1;
}

double IvpTrajectory::value(double r) const {
  if (r_.size() == 1) return u_[0];
  const std::size_t i = locate(r);
  const double h = r_[i + 1] - r_[i];
  const double t = (r - r_[i]) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double h3 = 0.5 * (t3 - 2 * t4 + t5);
  const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double h5 = 10 * t3 - 15 * t4 + 6 * t5;
  return h0 * u_[i] + h1 * h * du_[i] + h2 * h * h * d2u_[i] + h3 * h * h * d2u_[i + 1] +
         h4 * h * du_[i + 1] + h5 * u_[i + 1];
}

double IvpTrajectory::derivative(double r) const {
  if (r_.size() == 1) return du_[0];
  const std::size_t i = locate(r);
  const double h = r_[i + 1] - r_[i];
  const double t = (r - r_[i]) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  const double h0 = -30 * t2 + 60 * t3 - 30 * t4;
  const double h1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  const double h2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
  const double h3 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
  const double h4 = -12 * t2 + 28 * t3 - 15 * t4;
  const double h5 = 30 * t2 - 60 * t3 + 30 * t4;
  return (h0 * u_[i] + h5 * u_[i + 1]) / h + h1 * du_[i] + h4 * du_[i + 1] +
         h * (h2 * d2u_[i] + h3 * d2u_[i + 1]);
}

IvpTrajectory IvpTrajectory::times_power(int k) const {
  if (k == 0) return *this;
  std::vector<double> u(size()), du(size()), d2u(size());
  for (std::size_t i = 0; i < size(); ++i) {
    const double r = r_[i];
    const double pk = std::pow(r, k), pk1 = k * std::pow(r, k - 1),
                 pk2 = k * (k - 1) * std::pow(r, k - 2);
    u[i] = pk * u_[i];
    du[i] = pk1 * u_[i] + pk * du_[i];
    d2u[i] = pk2 * u_[i] + 2 * pk1 * du_[i] + pk * d2u_[i];
  }
  return IvpTrajectory(r_, std::move(u), std::move(du), std::move(d2u));
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct State {
  double u, v;
};

}  // namespace

IvpTrajectory integrate_ivp(const SecondOrderRhs& g, double r0, double u0, double du0,
                            double r_max, const IvpOptions& options) {
  if (!(r_max > r0)) throw Error(ErrorKind::InvalidArgument, "integration span is empty");
  if (!(options.tolerance > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be > 0");
  const double tol = options.tolerance;
  auto rhs = [&](double r, State y) { return State{y.v, g(r, y.u, y.v)}; };

  std::vector<double> rs{r0}, us{u0}, dus{du0};
  State y{u0, du0};
  State k1 = rhs(r0, y);
  std::vector<double> d2us{k1.v};
  double r = r0;
  double h = std::min(options.initial_step, r_max - r0);
  std::size_t steps = 0;
  while (r < r_max) {
    if (++steps > options.max_steps)
      throw Error(ErrorKind::StepSizeUnderflow,
                  "step budget exhausted at r=" + std::to_string(r));
    bool last = false;
    if (r + h >= r_max) {
      h = r_max - r;
      last = true;
    }
    auto at = [&](double s1, double s2, double s3, double s4, double s5, const State& q1,
                  const State& q2, const State& q3, const State& q4, const State& q5) {
      return State{y.u + h * (s1 * q1.u + s2 * q2.u + s3 * q3.u + s4 * q4.u + s5 * q5.u),
                   y.v + h * (s1 * q1.v + s2 * q2.v + s3 * q3.v + s4 * q4.v + s5 * q5.v)};
    };
    const State z{0, 0};
    const State k2 = rhs(r + c2 * h, at(a21, 0, 0, 0, 0, k1, z, z, z, z));
    const State k3 = rhs(r + c3 * h, at(a31, a32, 0, 0, 0, k1, k2, z, z, z));
    const State k4 = rhs(r + c4 * h, at(a41, a42, a43, 0, 0, k1, k2, k3, z, z));
    const State k5 = rhs(r + c5 * h, at(a51, a52, a53, a54, 0, k1, k2, k3, k4, z));
    const State k6 = rhs(r + h, at(a61, a62, a63, a64, a65, k1, k2, k3, k4, k5));
    const State yn{y.u + h * (b1 * k1.u + b3 * k3.u + b4 * k4.u + b5 * k5.u + b6 * k6.u),
                   y.v + h * (b1 * k1.v + b3 * k3.v + b4 * k4.v + b5 * k5.v + b6 * k6.v)};
    const double rn = last ? r_max : r + h;
    const State k7 = rhs(rn, yn);
    const double eu =
        h * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u + e6 * k6.u + e7 * k7.u);
    const double ev =
        h * (e1 * k1.v + e3 * k3.v + e4 * k4.v + e5 * k5.v + e6 * k6.v + e7 * k7.v);
    const double su = tol * (1.0 + std::max(std::abs(y.u), std::abs(yn.u)));
    const double sv = tol * (1.0 + std::max(std::abs(y.v), std::abs(yn.v)));
    const double err = std::max(std::abs(eu) / su, std::abs(ev) / sv);
    if (!std::isfinite(err))
      throw Error(ErrorKind::StepSizeUnderflow, "non-finite solution at r=" + std::to_string(r));
    if (err <= 1.0) {
      r = rn;
      y = yn;
      k1 = k7;
      rs.push_back(r);
      us.push_back(y.u);
      dus.push_back(y.v);
      d2us.push_back(k7.v);
      const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (!last) h *= fac;
      else break;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      if (h < options.min_step * std::max(1.0, std::abs(r)))
        throw Error(ErrorKind::StepSizeUnderflow,
                    "step size underflow at r=" + std::to_string(r));
    }
  }
  return IvpTrajectory(std::move(rs), std::move(us), std::move(dus), std::move(d2us));
}

}  // namespace nlsprop
