#include <cmath>

#include "doctest.h"
#include "nlsprop/errors.hpp"
#include "nlsprop/model.hpp"

using namespace nlsprop;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an nlsprop::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("power sigma=1 is the identity nonlinearity") {
  auto v = eval_nonlinearity(NonlinearitySpec::power(1.0), 4.0);
  CHECK(v.f == 4.0);
  CHECK(v.df == 1.0);
  CHECK(v.d2f == 0.0);
}

TEST_CASE("cubic-quintic with gamma=0 reduces to cubic") {
  auto v = eval_nonlinearity(NonlinearitySpec::cubic_quintic(0.0), 2.0);
  CHECK(v.f == 2.0);
  CHECK(v.df == 1.0);
  CHECK(v.d2f == 0.0);
}

TEST_CASE("cubic-quintic gamma=0.01 at s=3") {
  auto v = eval_nonlinearity(NonlinearitySpec::cubic_quintic(0.01), 3.0);
  CHECK(v.f == doctest::Approx(3.0 - 0.01 * 9.0).epsilon(1e-15));
  CHECK(v.df == doctest::Approx(0.94).epsilon(1e-15));
  CHECK(v.d2f == doctest::Approx(-0.02).epsilon(1e-15));
}

TEST_CASE("singular derivatives at the origin are domain errors") {
  CHECK(kind_of([] { eval_nonlinearity(NonlinearitySpec::power(0.8), 0.0); }) ==
        ErrorKind::DomainError);
  CHECK(kind_of([] { eval_nonlinearity(NonlinearitySpec::power(1.5), 0.0); }) ==
        ErrorKind::DomainError);
  CHECK(eval_f(NonlinearitySpec::power(0.8), 0.0) == 0.0);
  CHECK(eval_nonlinearity(NonlinearitySpec::power(2.5), 0.0).d2f == 0.0);
  CHECK(kind_of([] { eval_nonlinearity(NonlinearitySpec::power(2.0), -1.0); }) ==
        ErrorKind::DomainError);
}

TEST_CASE("finite differences reproduce the analytic derivatives") {
  const NonlinearitySpec specs[] = {NonlinearitySpec::power(0.75), NonlinearitySpec::power(1.0),
                                    NonlinearitySpec::power(3.3), NonlinearitySpec::power(6.1),
                                    NonlinearitySpec::cubic_quintic(0.0),
                                    NonlinearitySpec::cubic_quintic(0.012)};
  for (const auto& spec : specs) {
    for (double s : {0.05, 0.7, 1.0, 4.5, 19.0}) {
      const double h = 1e-5 * std::max(1.0, s);
      const auto v = eval_nonlinearity(spec, s);
      const auto p = eval_nonlinearity(spec, s + h);
      const auto m = eval_nonlinearity(spec, s - h);
      const double fd1 = (p.f - m.f) / (2 * h);
      const double fd2 = (p.df - m.df) / (2 * h);
      CHECK(std::abs(fd1 - v.df) <= 1e-6 * std::max(std::abs(v.df), 1e-300) + 1e-12);
      CHECK(std::abs(fd2 - v.d2f) <= 1e-6 * std::abs(v.d2f) + 1e-9);
    }
  }
}

TEST_CASE("cubic-quintic gamma=0 matches power sigma=1 bit for bit") {
  for (double s : {0.0, 1e-3, 0.5, 2.0, 17.25}) {
    const auto a = eval_nonlinearity(NonlinearitySpec::cubic_quintic(0.0), s);
    const auto b = eval_nonlinearity(NonlinearitySpec::power(1.0), s);
    CHECK(std::signbit(a.d2f) == std::signbit(b.d2f));
    CHECK(a.f == b.f);
    CHECK(a.df == b.df);
    CHECK(a.d2f == b.d2f);
  }
}

TEST_CASE("soliton nonlinearity g(R) = f(R^2) R") {
  const auto spec = NonlinearitySpec::cubic_quintic(0.01);
  const double R = 1.7;
  const auto g = soliton_nonlinearity(spec, R);
  CHECK(g.value == doctest::Approx(eval_f(spec, R * R) * R).epsilon(1e-14));
  const auto v = eval_nonlinearity(spec, R * R);
  CHECK(g.derivative == doctest::Approx(v.f + 2 * v.df * R * R).epsilon(1e-14));
  const auto p = soliton_nonlinearity(NonlinearitySpec::power(0.8), -0.5);
  CHECK(p.value < 0.0);
}

TEST_CASE("spec validation") {
  CHECK(kind_of([] { NonlinearitySpec::cubic_quintic(0.2).validate(); }) ==
        ErrorKind::ValidationError);
  CHECK(kind_of([] { NonlinearitySpec::power(0.0).validate(); }) == ErrorKind::ValidationError);
  ProblemSpec p;
  p.omega = -1.0;
  CHECK(kind_of([&] { p.validate(); }) == ErrorKind::ValidationError);
  CHECK_NOTHROW(NonlinearitySpec::cubic_quintic(0.18).validate());
}
