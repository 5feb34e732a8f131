#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nlsprop/ivp.hpp"
#include "nlsprop/profile.hpp"

namespace nlsprop {

enum class Weight {
  Line,      // 2 * int_0^L dx (even extension of a half-line function)
  Radial3D,  // int_0^R r^2 dr
};

/// Gauss-Legendre (7 points) over each interval of the sorted breakpoints.
double integrate(const std::function<double(double)>& f, std::span<const double> breakpoints);

/// Breakpoints of both meshes merged; throws SpanMismatch unless both spans agree.
std::vector<double> merge_breakpoints(const std::vector<double>& a, const std::vector<double>& b);

double inner_product(const Profile& a, const Profile& b, Weight weight);
double inner_product(const IvpTrajectory& a, const IvpTrajectory& b, Weight weight);

double weighted_norm(const Profile& a, Weight weight);

}  // namespace nlsprop
