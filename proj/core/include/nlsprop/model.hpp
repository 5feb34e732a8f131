#pragma once

#include <string>

namespace nlsprop {

enum class NonlinearityKind { Power, CubicQuintic };

/// Nonlinearity f(s) of the NLS family: f(s) = s^sigma or f(s) = s - gamma s^2.
struct NonlinearitySpec {
  NonlinearityKind kind = NonlinearityKind::Power;
  double sigma = 1.0;  // Power only
  double gamma = 0.0;  // CubicQuintic only

  static NonlinearitySpec power(double sigma);
  static NonlinearitySpec cubic_quintic(double gamma);

  /// Throws ValidationError when the parameter is outside the existence range.
  void validate() const;
  std::string label() const;
};

/// Upper bound on gamma for which ground states exist at omega = 1.
inline constexpr double kCubicQuinticGammaMax = 3.0 / 16.0;

enum class Dimension { One = 1, Three = 3 };

inline int to_int(Dimension d) { return static_cast<int>(d); }

struct ProblemSpec {
  NonlinearitySpec nonlinearity;
  Dimension dimension = Dimension::Three;
  double omega = 1.0;

  void validate() const;
  std::string label() const;

  bool is_power() const { return nonlinearity.kind == NonlinearityKind::Power; }
  int dim() const { return to_int(dimension); }
};

struct NonlinearityValues {
  double f;
  double df;
  double d2f;
};

/// f, f' and f'' at s >= 0. Throws DomainError at s = 0 when a derivative
/// of the power law is singular there.
NonlinearityValues eval_nonlinearity(const NonlinearitySpec& spec, double s);

/// f(s) alone; defined at s = 0 for every spec.
double eval_f(const NonlinearitySpec& spec, double s);

/// The soliton nonlinearity g(R) = f(R^2) R and dg/dR = f(R^2) + 2 f'(R^2) R^2,
/// written without negative powers so it is finite for any real R.
struct NonlinearTerm {
  double value;
  double derivative;
};
NonlinearTerm soliton_nonlinearity(const NonlinearitySpec& spec, double R);

}  // namespace nlsprop
