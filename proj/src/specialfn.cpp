#include "compsemi/specialfn.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "compsemi/measure.hpp"
#include "compsemi/quadrature.hpp"
#include "compsemi/report.hpp"

namespace compsemi {

namespace {

// B_{2k} / (2k (2k - 1)), k = 1..8.
constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,           -1.0 / 360.0,  1.0 / 1260.0, -1.0 / 1680.0,
    1.0 / 1188.0,         -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0,
};

// |w| at which the truncated Stirling series is accurate to ~1e-18.
constexpr double kAsymptoticRadius = 15.0;

Complex stirling(Complex w) {
  const Complex inv = 1.0 / w;
  const Complex inv2 = inv * inv;
  Complex series = 0.0;
  Complex p = inv;
  for (double c : kStirling) {
    series += c * p;
    p *= inv2;
  }
  return (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

}  // namespace

Complex log_gamma(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("log_gamma: non-finite argument");
  if (!(z.real() > 0.0)) throw DomainError("log_gamma: requires Re z > 0");

  int shift = 0;
  const double im = z.imag();
  if (std::abs(z) < kAsymptoticRadius && std::abs(im) < kAsymptoticRadius) {
    const double need = std::sqrt(kAsymptoticRadius * kAsymptoticRadius - im * im) - z.real();
    if (need > 0.0) shift = static_cast<int>(std::ceil(need));
  }
  Complex result = stirling(z + static_cast<double>(shift));
  // Each factor has |arg| < pi/2, so a product of two has |arg| < pi and its
  // principal log adds up to the continuous branch.
  int j = 0;
  for (; j + 1 < shift; j += 2) result -= std::log((z + double(j)) * (z + double(j + 1)));
  if (j < shift) result -= std::log(z + double(j));
  return result;
}

double abs_gamma_sq(double x, double y) {
  if (!(x > 0.0)) throw DomainError("abs_gamma_sq: requires x > 0");
  return std::exp(2.0 * log_gamma({x, y}).real());
}

Complex newton_poly(NewtonIndex n, Complex z) {
  Complex v = 1.0;
  for (int k = 0; k < n.value(); ++k) v *= (double(k) - z) / double(k + 1);
  return v;
}

double sech_integral_closed_form(double c, double u) {
  if (!(c > 0.0)) throw DomainError("sech identity: requires c > 0");
  return std::pow(0.5 / std::cosh(0.5 * u), c);
}

VerificationReport verify_sech_integral(double c, double u, const QuadratureSpec& spec) {
  if (!(c > 0.0)) throw DomainError("verify_sech_integral: requires c > 0");
  validate(spec);
  const double log_norm = std::lgamma(c) + std::log(2.0 * std::numbers::pi);
  auto f = [&](double a) -> Complex {
    const double mag = std::exp(2.0 * log_gamma({0.5 * c, a}).real() - log_norm);
    return mag * std::polar(1.0, -u * a);
  };
  const LineIntegral li = integrate_symmetric(f, spec.y_cutoff, spec.nodes_per_unit);

  VerificationReport r;
  r.identity = "sech_integral";
  r.params = {{"c", c}, {"u", u}, {"y_cutoff", spec.y_cutoff}, {"nodes_per_unit", spec.nodes_per_unit}};
  r.closed_form = sech_integral_closed_form(c, u);
  r.numeric = li.value;
  r.abs_diff = std::abs(r.numeric - r.closed_form);
  r.tail_estimate = li.tail_estimate;
  r.pass = r.abs_diff <= spec.tolerance;
  if (r.tail_estimate > spec.tolerance) {
    r.pass = false;
    throw QuadratureBudgetExceeded(r);
  }
  return r;
}

}  // namespace compsemi
