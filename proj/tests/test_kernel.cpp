#include <doctest.h>

#include <cmath>
#include <random>

#include "fracfem/kernel.hpp"

using namespace fracfem;

namespace {

double erfcx(double x) { return std::exp(x * x) * std::erfc(x); }

}  // namespace

TEST_CASE("orders validation") {
  CHECK_THROWS_AS(FracOrders(1.0), std::invalid_argument);
  CHECK_THROWS_AS(FracOrders(0.0), std::invalid_argument);
  CHECK_THROWS_AS(FracOrders::two_term(0.5, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(FracOrders::two_term(0.5, 0.2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(FracOrders(0.5, {}, 0.0), std::invalid_argument);
  const auto o = FracOrders::two_term(0.5, 0.2, 2.0);
  REQUIRE(o.ml_betas().size() == 2);
  CHECK(o.ml_betas()[0] == 0.5);
  CHECK(o.ml_betas()[1] == doctest::Approx(0.3).epsilon(1e-15));
  const auto z = o.ml_arguments(3.0, 4.0);
  CHECK(z[0] == doctest::Approx(-6.0));
  CHECK(z[1] == doctest::Approx(-2.0 * std::pow(4.0, 0.3)));
}

TEST_CASE("single-term alpha = 1/2 relaxation is erfcx(lambda sqrt t)") {
  const FracOrders o(0.5);
  for (double lambda : {1.0, 10.0, 1e3, 1e6}) {
    for (double t : {1e-6, 1e-3, 0.1, 1.0}) {
      const double x = lambda * std::sqrt(t);
      if (x > 25.0) continue;
      const ModeFactors f = mode_factors(lambda, t, o);
      CHECK(f.relaxation == doctest::Approx(erfcx(x)).epsilon(1e-11));
      CHECK(f.relaxation == doctest::Approx(1.0 - lambda * f.primitive).epsilon(1e-8));
    }
  }
}

TEST_CASE("mode factors match the real-axis integrals") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double alpha = 0.1 + 0.85 * unit(rng);
    const double beta = alpha * (0.05 + 0.9 * unit(rng));
    const FracOrders o = FracOrders::two_term(alpha, beta, 0.1 + 2.0 * unit(rng));
    const double lambda = std::pow(10.0, 4.0 * unit(rng));
    const double t = std::pow(10.0, -4.0 * unit(rng));
    const ModeFactors f = mode_factors(lambda, t, o);
    CHECK(f.response == doctest::Approx(ebar_integral(t, lambda, o)).epsilon(1e-8));
    CHECK(f.relaxation == doctest::Approx(relaxation_integral(t, lambda, o)).epsilon(1e-8));
  }
}

TEST_CASE("complete monotonicity of ebar and e") {
  const FracOrders o = FracOrders::two_term(0.7, 0.3, 1.0);
  for (double lambda : {1.0, 100.0, 1e4}) {
    double previous_e = 1.0;
    double previous_ebar = INFINITY;
    for (double t = 1e-6; t <= 1.0; t *= 1.5) {
      const ModeFactors f = mode_factors(lambda, t, o);
      CHECK(f.response > 0.0);
      CHECK(f.relaxation > 0.0);
      CHECK(f.response < previous_ebar);
      CHECK(f.relaxation < previous_e);
      previous_e = f.relaxation;
      previous_ebar = f.response;
    }
    for (double r = 1e-3; r < 1e6; r *= 3.0) CHECK(ebar_kernel(r, lambda, o) > 0.0);
  }
}

TEST_CASE("time integral of ebar is the primitive and stays below 1/lambda") {
  const FracOrders o = FracOrders::two_term(0.5, 0.2, 1.0);
  for (double lambda : {M_PI * M_PI, 100.0, 1e4}) {
    const double integral = ebar_time_integral(1.0, lambda, o);
    CHECK(integral == doctest::Approx(mode_primitive(lambda, 1.0, o)).epsilon(1e-7));
    CHECK(integral < 1.0 / lambda);
  }
}

TEST_CASE("relaxation at large lambda has no cancellation") {
  const FracOrders o(0.5);
  // e ~ 1 / (lambda sqrt(pi t)) for lambda sqrt(t) >> 1
  const double lambda = 1e8;
  const double t = 1.0;
  const double e = relaxation_alt(lambda, t, o);
  const double lead = 1.0 / (lambda * std::sqrt(M_PI * t));
  CHECK(e == doctest::Approx(lead).epsilon(1e-8));
  CHECK(mode_response(lambda, t, o) > 0.0);
}
