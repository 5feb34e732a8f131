#include "nlsprop/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "nlsprop/errors.hpp"

namespace nlsprop {

namespace {

constexpr std::array<double, 7> kNodes = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
    0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
constexpr std::array<double, 7> kWeights = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694,
    0.3818300505051189, 0.2797053914892767, 0.1294849661688697};

double weight_factor(Weight w, double r) { return w == Weight::Radial3D ? r * r : 1.0; }
double weight_scale(Weight w) { return w == Weight::Line ? 2.0 : 1.0; }

}  // namespace

double integrate(const std::function<double(double)>& f, std::span<const double> bp) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double a = bp[i], b = bp[i + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t q = 0; q < kNodes.size(); ++q) s += kWeights[q] * f(mid + half * kNodes[q]);
    total += half * s;
  }
  return total;
}

std::vector<double> merge_breakpoints(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::SpanMismatch, "empty span");
  const double scale = std::max({1.0, std::abs(a.back()), std::abs(b.back())});
  if (std::abs(a.front() - b.front()) > 1e-12 * scale ||
      std::abs(a.back() - b.back()) > 1e-12 * scale)
    throw Error(ErrorKind::SpanMismatch, "operands are defined on different spans");
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  std::vector<double> uniq;
  uniq.reserve(out.size());
  for (double x : out)
    if (uniq.empty() || x - uniq.back() > 1e-13 * scale) uniq.push_back(x);
  uniq.back() = std::min(a.back(), b.back());
  return uniq;
}

double inner_product(const Profile& a, const Profile& b, Weight weight) {
  const auto bp = &a == &b ? a.breakpoints() : merge_breakpoints(a.breakpoints(), b.breakpoints());
  return weight_scale(weight) *
         integrate([&](double r) { return a.value(r) * b.value(r) * weight_factor(weight, r); },
                   bp);
}

double inner_product(const IvpTrajectory& a, const IvpTrajectory& b, Weight weight) {
  const auto bp = &a == &b ? a.samples() : merge_breakpoints(a.samples(), b.samples());
  return weight_scale(weight) *
         integrate([&](double r) { return a.value(r) * b.value(r) * weight_factor(weight, r); },
                   bp);
}

double weighted_norm(const Profile& a, Weight weight) {
  return std::sqrt(inner_product(a, a, weight));
}

}  // namespace nlsprop
