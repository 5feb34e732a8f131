#pragma once

#include <functional>
#include <vector>

namespace nlsprop {

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int evaluations = 0;
  std::vector<double> iterates;  // every abscissa at which fn was evaluated
};

/// Brent's method (zeroin). Requires fn(lo) and fn(hi) of opposite sign.
RootResult brent_root(const std::function<double(double)>& fn, double lo, double hi,
                      double x_tolerance = 1e-12, int max_evaluations = 200);

/// Plain bisection to |hi - lo| <= x_tolerance.
double bisect_root(const std::function<double(double)>& fn, double lo, double hi,
                   double x_tolerance);

}  // namespace nlsprop
