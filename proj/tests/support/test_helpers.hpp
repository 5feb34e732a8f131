#pragma once

#include "doctest.h"
#include "nlsprop/errors.hpp"
#include "nlsprop/model.hpp"

namespace testing {

inline nlsprop::ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const nlsprop::Error& e) {
    return e.kind();
  }
  FAIL("expected an nlsprop::Error");
  return nlsprop::ErrorKind::InvalidArgument;
}

inline nlsprop::ProblemSpec power(double sigma, int dim = 3, double omega = 1.0) {
  nlsprop::ProblemSpec p;
  p.nonlinearity = nlsprop::NonlinearitySpec::power(sigma);
  p.dimension = dim == 3 ? nlsprop::Dimension::Three : nlsprop::Dimension::One;
  p.omega = omega;
  return p;
}

inline nlsprop::ProblemSpec cubic_quintic(double gamma) {
  nlsprop::ProblemSpec p;
  p.nonlinearity = nlsprop::NonlinearitySpec::cubic_quintic(gamma);
  return p;
}

}  // namespace testing
