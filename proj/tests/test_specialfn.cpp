#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <doctest.h>

#include "compsemi/measure.hpp"
#include "compsemi/specialfn.hpp"
#include "oracles.hpp"

using namespace compsemi;
using std::numbers::pi;

TEST_CASE("log_gamma at integers") {
  CHECK(std::abs(log_gamma(1.0)) < 1e-12);
  CHECK(std::abs(log_gamma(5.0) - std::log(24.0)) < 1e-12 * std::log(24.0));
  CHECK(std::abs(log_gamma(2.0)) < 1e-12);
}

TEST_CASE("log_gamma against high-precision values") {
  for (const auto& [z, expected] : oracle::log_gamma_table()) {
    const Complex got = log_gamma(z);
    const double rel = std::abs(got - expected) / std::max(1.0, std::abs(expected));
    INFO("z = " << z.real() << " + " << z.imag() << "i, got " << got.real() << " + " << got.imag() << "i");
    CHECK(rel < 1e-12);
  }
}

TEST_CASE("log_gamma rejects the closed left half-plane") {
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(Complex(-1.5, 2.0)), DomainError);
  CHECK_THROWS_AS(abs_gamma_sq(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(abs_gamma_sq(-0.5, 0.0), DomainError);
}

TEST_CASE("abs_gamma_sq on the reflection lines") {
  CHECK(abs_gamma_sq(0.5, 0.0) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(abs_gamma_sq(0.5, 1.0) == doctest::Approx(pi / std::cosh(pi)).epsilon(1e-13));
  CHECK(abs_gamma_sq(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  for (double y = -30.0; y <= 30.0; y += 0.37) {
    CHECK(abs_gamma_sq(0.5, y) == doctest::Approx(oracle::abs_gamma_sq_half(y)).epsilon(1e-11));
    CHECK(abs_gamma_sq(1.0, y) == doctest::Approx(oracle::abs_gamma_sq_one(y)).epsilon(1e-11));
  }
}

TEST_CASE("abs_gamma_sq is even in y and positive") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> xs(1e-3, 50.0);
  std::uniform_real_distribution<double> ys(-50.0, 50.0);
  for (int i = 0; i < 500; ++i) {
    const double x = xs(rng);
    const double y = ys(rng);
    const double a = abs_gamma_sq(x, y);
    const double b = abs_gamma_sq(x, -y);
    CHECK(a == b);
    CHECK(a > 0.0);
  }
}

TEST_CASE("abs_gamma_sq recurrence in x") {
  for (double x = 0.1; x < 40.0; x += 1.3) {
    for (double y = -20.0; y <= 20.0; y += 2.5) {
      const double lhs = abs_gamma_sq(x + 1.0, y);
      const double rhs = (x * x + y * y) * abs_gamma_sq(x, y);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
    }
  }
}

TEST_CASE("newton_poly small cases") {
  CHECK(newton_poly(NewtonIndex(0), Complex(3.7, -1.0)) == Complex(1.0));
  CHECK(newton_poly(NewtonIndex(1), 2.0) == Complex(-2.0));
  for (int n = 2; n < 30; ++n) CHECK(newton_poly(NewtonIndex(n), 1.0) == Complex(0.0));
  CHECK_THROWS_AS(NewtonIndex(-1), DomainError);
}

TEST_CASE("newton_poly vanishes at small positive integers") {
  for (int n = 2; n < 40; ++n)
    for (int m = 1; m <= n - 1; ++m) CHECK(std::abs(newton_poly(NewtonIndex(n), double(m))) == 0.0);
}

TEST_CASE("newton_poly matches the explicit product") {
  const Complex z(0.3, 1.7);
  Complex p = 1.0;
  double fact = 1.0;
  for (int n = 1; n <= 15; ++n) {
    p *= -(z - double(n - 1));
    fact *= n;
    CHECK(std::abs(newton_poly(NewtonIndex(n), z) - p / fact) < 1e-13 * std::max(1.0, std::abs(p / fact)));
  }
}

TEST_CASE("Newton series sums to (1 - w)^z") {
  const Complex zs[] = {{0.5, 0.0}, {-0.3, 1.0}, {2.5, -3.0}, {-0.39, 0.0}};
  const Complex ws[] = {{0.5, 0.0}, {-0.9, 0.0}, {0.3, 0.6}, {0.0, 0.9}};
  for (const Complex z : zs) {
    for (const Complex w : ws) {
      const Complex target = std::pow(1.0 - w, z);
      Complex sum = 0.0;
      Complex wn = 1.0;
      std::vector<double> err;
      for (int n = 0; n <= 600; ++n) {
        sum += newton_poly(NewtonIndex(n), z) * wn;
        wn *= w;
        err.push_back(std::abs(sum - target));
      }
      CHECK(err.back() < 1e-10);
      // Beyond a crossover index the error sequence only shrinks, until it
      // reaches the rounding floor of the partial sums.
      const std::size_t crossover = 100;
      const double floor = 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(target));
      for (std::size_t n = crossover + 1; n < err.size(); ++n) CHECK(err[n] <= err[n - 1] + floor);
    }
  }
}

TEST_CASE("sech integral examples") {
  const QuadratureSpec spec{};
  CHECK(sech_integral_closed_form(1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sech_integral_closed_form(2.0, 0.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(sech_integral_closed_form(3.0, 2.0 * std::log(2.0)) == doctest::Approx(0.064).epsilon(1e-13));
  for (double c : {1.0, 2.0, 3.0, 5.0}) {
    for (double u : {0.0, std::log(2.0), 2.0 * std::log(2.0), -1.3}) {
      const VerificationReport r = verify_sech_integral(c, u, spec);
      CHECK(r.pass);
      CHECK(r.abs_diff < 1e-8);
      CHECK(r.closed_form.real() == doctest::Approx(std::pow(0.5 / std::cosh(u / 2), c)).epsilon(1e-13));
    }
  }
}

TEST_CASE("sech integral rejects c <= 0") {
  CHECK_THROWS_AS(verify_sech_integral(0.0, 0.0, QuadratureSpec{}), DomainError);
}
