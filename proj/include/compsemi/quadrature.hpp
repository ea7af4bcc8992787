#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace compsemi {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule via Newton iteration on P_n. Cached per n.
const GaussRule& gauss_legendre(int n);

/// Points per panel used by every panelised integral in the library.
inline constexpr int kPanelOrder = 10;

/// Composite rule on [a, b]: ceil((b - a) * panels_per_unit) equal panels of
/// kPanelOrder points each. Nodes ascending.
struct PanelRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
PanelRule panel_rule(double a, double b, int panels_per_unit);

/// Estimate of Int_{Y}^{inf} g for a nonnegative, eventually log-decaying g,
/// from two samples g(Y - 1) and g(Y). Falls back to a pessimistic
/// g(Y) * Y when no decay is visible.
double exponential_tail(double g_inner, double g_edge, double Y);

/// Symmetric-interval integral with a two-sided tail estimate.
struct LineIntegral {
  std::complex<double> value;
  double abs_integral = 0.0;  ///< Int |f|
  double tail_estimate = 0.0;
};

template <class F>
LineIntegral integrate_symmetric(const F& f, double Y, int panels_per_unit) {
  const PanelRule rule = panel_rule(-Y, Y, panels_per_unit);
  LineIntegral out{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const std::complex<double> v = f(rule.nodes[i]);
    out.value += rule.weights[i] * v;
    out.abs_integral += rule.weights[i] * std::abs(v);
  }
  const double inner = std::abs(f(Y - 1.0)) + std::abs(f(-(Y - 1.0)));
  const double edge = std::abs(f(Y)) + std::abs(f(-Y));
  out.tail_estimate = exponential_tail(inner, edge, Y);
  return out;
}

}  // namespace compsemi
