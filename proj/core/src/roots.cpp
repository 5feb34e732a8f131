#include "nlsprop/roots.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nlsprop/errors.hpp"

namespace nlsprop {

RootResult brent_root(const std::function<double(double)>& fn, double lo, double hi,
                      double x_tolerance, int max_evaluations) {
  RootResult out;
  out.lo = lo;
  out.hi = hi;
  auto eval = [&](double x) {
    if (out.evaluations >= max_evaluations)
      throw Error(ErrorKind::MaxEvaluations,
                  "root finder exceeded " + std::to_string(max_evaluations) + " evaluations");
    ++out.evaluations;
    out.iterates.push_back(x);
    return fn(x);
  };
  const double eps = std::numeric_limits<double>::epsilon();
  double a = lo, b = hi;
  double fa = eval(a), fb = eval(b);
  if (fa == 0.0) {
    out.x = a;
    return out;
  }
  if (fb == 0.0) {
    out.x = b;
    return out;
  }
  if ((fa > 0) == (fb > 0))
    throw Error(ErrorKind::NoSignChange, "fn has the same sign at both bracket ends (" +
                                             std::to_string(fa) + ", " + std::to_string(fb) + ")");
  double c = a, fc = fa, d = b - a, e = d;
  for (;;) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.25 * x_tolerance;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) break;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
    fb = eval(b);
  }
  out.x = b;
  out.fx = fb;
  return out;
}

double bisect_root(const std::function<double(double)>& fn, double lo, double hi,
                   double x_tolerance) {
  double flo = fn(lo);
  const double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw Error(ErrorKind::NoSignChange, "bisection needs a sign change");
  while (hi - lo > x_tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace nlsprop
