#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace nlsprop {

/// Accepted steps of a scalar second-order IVP with quintic Hermite dense output
/// built from (u, u', u'') at consecutive samples.
class IvpTrajectory {
 public:
  IvpTrajectory() = default;
  IvpTrajectory(std::vector<double> r, std::vector<double> u, std::vector<double> du,
                std::vector<double> d2u);

  std::size_t size() const { return r_.size(); }
  bool dense() const { return r_.size() >= 2; }
  double r_min() const { return r_.front(); }
  double r_max() const { return r_.back(); }
  const std::vector<double>& samples() const { return r_; }
  const std::vector<double>& values() const { return u_; }
  const std::vector<double>& derivatives() const { return du_; }
  const std::vector<double>& second_derivatives() const { return d2u_; }

  double value(double r) const;
  double derivative(double r) const;
  double operator()(double r) const { return value(r); }

  /// Multiply every sample by r^k (used to map W back to U = r^k W).
  IvpTrajectory times_power(int k) const;

 private:
  std::size_t locate(double r) const;
  std::vector<double> r_, u_, du_, d2u_;
};

struct IvpOptions {
  double tolerance = 1e-13;
  double initial_step = 1e-4;
  double min_step = 1e-14;
  std::size_t max_steps = 5'000'000;
};

using SecondOrderRhs = std::function<double(double r, double u, double du)>;

/// Dormand-Prince 5(4) with per-step local error below tolerance (mixed abs/rel).
IvpTrajectory integrate_ivp(const SecondOrderRhs& g, double r0, double u0, double du0,
                            double r_max, const IvpOptions& options = {});

}  // namespace nlsprop
