#include "compsemi/quadrature.hpp"

#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace compsemi {

namespace {

GaussRule build_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
  return it->second;
}

PanelRule panel_rule(double a, double b, int panels_per_unit) {
  if (!(b > a)) throw std::invalid_argument("panel_rule: empty interval");
  if (panels_per_unit < 1) throw std::invalid_argument("panel_rule: panels_per_unit < 1");
  const GaussRule& g = gauss_legendre(kPanelOrder);
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) * panels_per_unit - 1e-9));
  const double h = (b - a) / static_cast<double>(panels);
  PanelRule rule;
  rule.nodes.reserve(panels * kPanelOrder);
  rule.weights.reserve(panels * kPanelOrder);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * h;
    for (int k = 0; k < kPanelOrder; ++k) {
      rule.nodes.push_back(mid + 0.5 * h * g.nodes[k]);
      rule.weights.push_back(0.5 * h * g.weights[k]);
    }
  }
  return rule;
}

double exponential_tail(double g_inner, double g_edge, double Y) {
  if (g_edge <= 0.0) return 0.0;
  if (g_inner > g_edge) {
    const double rate = std::log(g_inner / g_edge);
    if (rate > 0.05) return g_edge / rate;
  }
  return g_edge * std::max(Y, 1.0);
}

}  // namespace compsemi
