#include "nlsprop/model.hpp"

#include <cmath>
#include <cstdio>

#include "nlsprop/errors.hpp"

namespace nlsprop {

NonlinearitySpec NonlinearitySpec::power(double sigma) {
  NonlinearitySpec s;
  s.kind = NonlinearityKind::Power;
  s.sigma = sigma;
  s.gamma = 0.0;
  return s;
}

NonlinearitySpec NonlinearitySpec::cubic_quintic(double gamma) {
  NonlinearitySpec s;
  s.kind = NonlinearityKind::CubicQuintic;
  s.sigma = 1.0;
  s.gamma = gamma;
  return s;
}

void NonlinearitySpec::validate() const {
  if (kind == NonlinearityKind::Power) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
      throw Error(ErrorKind::ValidationError, "sigma must be positive");
  } else {
    if (!(gamma >= 0.0) || !(gamma < kCubicQuinticGammaMax))
      throw Error(ErrorKind::ValidationError,
                  "gamma must satisfy 0 <= gamma < 3/16 (soliton existence)");
  }
}

std::string NonlinearitySpec::label() const {
  char buf[64];
  if (kind == NonlinearityKind::Power)
    std::snprintf(buf, sizeof buf, "power(sigma=%.10g)", sigma);
  else
    std::snprintf(buf, sizeof buf, "cubic-quintic(gamma=%.10g)", gamma);
  return buf;
}

void ProblemSpec::validate() const {
  nonlinearity.validate();
  if (dimension != Dimension::One && dimension != Dimension::Three)
    throw Error(ErrorKind::ValidationError, "dimension must be 1 or 3");
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw Error(ErrorKind::ValidationError, "omega must be positive");
}

std::string ProblemSpec::label() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%dD ", dim());
  std::string out = buf + nonlinearity.label();
  if (omega != 1.0) {
    std::snprintf(buf, sizeof buf, " omega=%.10g", omega);
    out += buf;
  }
  return out;
}

NonlinearityValues eval_nonlinearity(const NonlinearitySpec& spec, double s) {
  if (!(s >= 0.0)) throw Error(ErrorKind::DomainError, "nonlinearity needs s >= 0");
  if (spec.kind == NonlinearityKind::CubicQuintic) {
    const double g = spec.gamma;
    // 0.0 - 2g keeps f'' == +0 at gamma == 0, matching the sigma = 1 power law.
    return {s - g * s * s, 1.0 - 2.0 * g * s, 0.0 - 2.0 * g};
  }
  const double sig = spec.sigma;
  if (s == 0.0) {
    if (sig < 1.0) throw Error(ErrorKind::DomainError, "f'(0) singular for sigma < 1");
    if (sig < 2.0 && sig != 1.0)
      throw Error(ErrorKind::DomainError, "f''(0) singular for sigma < 2");
  }
  const double f = std::pow(s, sig);
  const double df = sig == 1.0 ? 1.0 : sig * std::pow(s, sig - 1.0);
  const double d2f = sig == 1.0 ? 0.0 : sig * (sig - 1.0) * std::pow(s, sig - 2.0);
  return {f, df, d2f};
}

double eval_f(const NonlinearitySpec& spec, double s) {
  if (!(s >= 0.0)) throw Error(ErrorKind::DomainError, "nonlinearity needs s >= 0");
  if (spec.kind == NonlinearityKind::CubicQuintic) return s - spec.gamma * s * s;
  return std::pow(s, spec.sigma);
}

NonlinearTerm soliton_nonlinearity(const NonlinearitySpec& spec, double R) {
  if (spec.kind == NonlinearityKind::CubicQuintic) {
    const double R2 = R * R;
    const double g = spec.gamma;
    return {R * R2 * (1.0 - g * R2), R2 * (3.0 - 5.0 * g * R2)};
  }
  const double p = std::pow(std::abs(R), 2.0 * spec.sigma);
  return {p * R, (2.0 * spec.sigma + 1.0) * p};
}

}  // namespace nlsprop
