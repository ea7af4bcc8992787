#include "compsemi/measure.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "compsemi/quadrature.hpp"

namespace compsemi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_unit_interval(double a, const char* what) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError(std::string(what) + ": parameter must lie in (0, 1]");
}

void require_open_unit(double a, const char* what) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError(std::string(what) + ": parameter must lie in (0, 1)");
}

void require_kernel_point(Complex w, const char* what) {
  if (!(w.real() > -0.5) || !std::isfinite(w.imag()))
    throw DomainError(std::string(what) + ": requires Re w > -1/2");
}

// Throws the budget error when the truncation tail alone already exceeds the
// requested tolerance.
VerificationReport finish(VerificationReport r, const QuadratureSpec& spec) {
  r.abs_diff = std::abs(r.numeric - r.closed_form);
  r.pass = r.abs_diff <= spec.tolerance;
  if (r.tail_estimate > spec.tolerance) {
    r.pass = false;
    throw QuadratureBudgetExceeded(std::move(r));
  }
  return r;
}

nlohmann::json spec_json(const QuadratureSpec& spec) {
  return {{"max_line", spec.max_line},
          {"y_cutoff", spec.y_cutoff},
          {"nodes_per_unit", spec.nodes_per_unit},
          {"tolerance", spec.tolerance}};
}

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real() + 0.0, z.imag() + 0.0}); }

MuGrid build_grid(const QuadratureSpec& spec) {
  MuGrid grid;
  grid.spec = spec;
  const PanelRule rule = panel_rule(-spec.y_cutoff, spec.y_cutoff, spec.nodes_per_unit);
  grid.lines.resize(static_cast<std::size_t>(spec.max_line) + 2);
  parallel_for(grid.lines.size(), spec.threads, [&](std::size_t k) {
    MuLine& line = grid.lines[k];
    line.index = static_cast<int>(k) - 1;
    line.y = rule.nodes;
    line.weight.resize(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      line.weight[i] = rule.weights[i] * line_weight(line.index, rule.nodes[i]);
  });
  return grid;
}

}  // namespace

void validate(const QuadratureSpec& spec) {
  if (spec.max_line < 0) throw DomainError("QuadratureSpec: max_line must be >= 0");
  if (!(spec.y_cutoff > 0.0) || !std::isfinite(spec.y_cutoff))
    throw DomainError("QuadratureSpec: y_cutoff must be positive");
  if (spec.nodes_per_unit < 2) throw DomainError("QuadratureSpec: nodes_per_unit must be >= 2");
  if (!(spec.tolerance > 0.0)) throw DomainError("QuadratureSpec: tolerance must be positive");
  if (spec.threads < 1) throw DomainError("QuadratureSpec: threads must be >= 1");
}

ExponentialCoefficients::ExponentialCoefficients(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw DomainError("ExponentialCoefficients: empty term list");
  for (const Term& t : terms_) require_unit_interval(t.base, "ExponentialCoefficients");
}

Complex ExponentialCoefficients::operator()(Complex z) const {
  Complex sum = 0.0;
  for (const Term& t : terms_) sum += t.coeff * std::exp(z * std::log(t.base));
  return sum;
}

double ExponentialCoefficients::norm_sq_exact() const {
  Complex sum = 0.0;
  for (const Term& p : terms_)
    for (const Term& q : terms_) sum += p.coeff * std::conj(q.coeff) * ip_exponentials(p.base, q.base);
  return sum.real();
}

double line_weight(int n, double y) {
  if (n < -1) throw DomainError("line_weight: requires n >= -1");
  const double log_w = 2.0 * log_gamma({0.5 * n + 1.0, y}).real() - std::lgamma(n + 2.0);
  return std::exp(log_w) / kTwoPi;
}

const MuGrid& mu_grid(const QuadratureSpec& spec) {
  validate(spec);
  static std::mutex mu;
  static std::map<std::tuple<int, double, int>, std::unique_ptr<MuGrid>> cache;
  const auto key = std::make_tuple(spec.max_line, spec.y_cutoff, spec.nodes_per_unit);
  std::lock_guard lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<MuGrid>(build_grid(spec))).first;
  return *it->second;
}

MuIntegral integrate_mu_detailed(const MuIntegrand& f, const QuadratureSpec& spec) {
  const MuGrid& grid = mu_grid(spec);
  const std::size_t count = grid.lines.size();
  const double Y = spec.y_cutoff;

  MuIntegral out;
  out.per_line.assign(count, 0.0);
  out.per_line_abs.assign(count, 0.0);
  std::vector<double> y_tail(count, 0.0);

  parallel_for(count, spec.threads, [&](std::size_t k) {
    const MuLine& line = grid.lines[k];
    Complex sum = 0.0;
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < line.y.size(); ++i) {
      const Complex v = f(HalfPlanePoint{line.index, line.y[i]});
      sum += line.weight[i] * v;
      abs_sum += line.weight[i] * std::abs(v);
    }
    out.per_line[k] = sum;
    out.per_line_abs[k] = abs_sum;
    auto g = [&](double y) { return std::abs(f(HalfPlanePoint{line.index, y})) * line_weight(line.index, y); };
    y_tail[k] = exponential_tail(g(Y - 1.0) + g(1.0 - Y), g(Y) + g(-Y), Y);
  });

  double tail = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    out.value += out.per_line[k];
    tail += y_tail[k];
  }
  // Lines beyond max_line: extrapolate the decay of the last two |f| line sums.
  const double last = out.per_line_abs[count - 1];
  const double prev = out.per_line_abs[count - 2];
  if (last > 0.0) {
    const double ratio = prev > 0.0 ? last / prev : 1.0;
    tail += ratio < 0.9 ? last * ratio / (1.0 - ratio) : last * (spec.max_line + 2);
  }
  out.tail_estimate = tail;
  return out;
}

Complex integrate_mu(const MuIntegrand& f, const QuadratureSpec& spec) {
  return integrate_mu_detailed(f, spec).value;
}

double line_mass(int n, const QuadratureSpec& spec) {
  if (n < -1) throw DomainError("line_mass: requires n >= -1");
  validate(spec);
  if (n <= spec.max_line) {
    const MuLine& line = mu_grid(spec).lines[static_cast<std::size_t>(n) + 1];
    double sum = 0.0;
    for (double w : line.weight) sum += w;
    return sum;
  }
  const PanelRule rule = panel_rule(-spec.y_cutoff, spec.y_cutoff, spec.nodes_per_unit);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * line_weight(n, rule.nodes[i]);
  return sum;
}

double ip_exponentials(double a, double b) {
  require_unit_interval(a, "ip_exponentials");
  require_unit_interval(b, "ip_exponentials");
  return 1.0 / (a + b - a * b);
}

Complex ip_lemma31(double s, double t, Complex w) {
  require_open_unit(s, "ip_lemma31");
  require_open_unit(t, "ip_lemma31");
  require_kernel_point(w, "ip_lemma31");
  const Complex num = std::exp(w * std::log(s) + std::conj(w) * std::log(t));
  return num / std::pow(s + t - s * t, 2.0 * w.real() + 1.0);
}

double kernel_norm_sq(Complex w) {
  require_kernel_point(w, "kernel_norm_sq");
  return std::exp(std::lgamma(2.0 * w.real() + 1.0) - 2.0 * log_gamma(std::conj(w) + 1.0).real());
}

double mean_identity_closed_form(double a, double b) {
  require_unit_interval(a, "mean_identity");
  require_unit_interval(b, "mean_identity");
  // ln(1 + x) / (x b) with x = a (1 - b) / b; removable singularity at b = 1.
  const double x = a * (1.0 - b) / b;
  if (x == 0.0) return 1.0 / b;
  return std::log1p(x) / (x * b);
}

VerificationReport verify_lemma31(double s, double t, Complex w, const QuadratureSpec& spec) {
  const Complex closed = ip_lemma31(s, t, w);
  const double ls = std::log(s);
  const double lt = std::log(t);
  const Complex wbar1 = std::conj(w) + 1.0;
  const double log_norm = std::lgamma(2.0 * w.real() + 1.0);
  // s^z t^{conj z} |K_w(z)|^2 / ||K_w||^2, where the |Gamma(conj w + 1)|^2
  // factors of K_w and of its norm cancel.
  auto f = [&](const HalfPlanePoint& p) -> Complex {
    const Complex z = p.z();
    const double log_k = 2.0 * (log_gamma(z + wbar1) - log_gamma(z + 1.0)).real() - log_norm;
    return std::exp(z * ls + std::conj(z) * lt + log_k);
  };
  const MuIntegral mi = integrate_mu_detailed(f, spec);

  VerificationReport r;
  r.identity = "lemma31_inner_product";
  r.params = {{"s", s}, {"t", t}, {"w", complex_json(w)}, {"spec", spec_json(spec)}};
  r.closed_form = closed;
  r.numeric = mi.value;
  r.tail_estimate = mi.tail_estimate;
  return finish(std::move(r), spec);
}

VerificationReport verify_mean_identity(double a, double b, const QuadratureSpec& spec) {
  const double closed = mean_identity_closed_form(a, b);
  const double la = std::log(a);
  const double lb = std::log(b);
  auto f = [&](const HalfPlanePoint& p) -> Complex {
    const Complex z = p.z();
    return std::exp(z * la + std::conj(z) * lb) / (1.0 + z);
  };
  const MuIntegral mi = integrate_mu_detailed(f, spec);

  VerificationReport r;
  r.identity = "mean_identity";
  r.params = {{"a", a}, {"b", b}, {"spec", spec_json(spec)}};
  r.closed_form = closed;
  r.numeric = mi.value;
  r.tail_estimate = mi.tail_estimate;
  return finish(std::move(r), spec);
}

VerificationReport verify_total_mass(const QuadratureSpec& spec) {
  const MuIntegral mi = integrate_mu_detailed([](const HalfPlanePoint&) -> Complex { return 1.0; }, spec);
  VerificationReport r;
  r.identity = "total_mass";
  r.params = {{"spec", spec_json(spec)}};
  r.closed_form = 1.0;
  r.numeric = mi.value;
  r.tail_estimate = mi.tail_estimate;
  return finish(std::move(r), spec);
}

VerificationReport verify_line_mass(int n, const QuadratureSpec& spec) {
  const double mass = line_mass(n, spec);
  const double Y = spec.y_cutoff;
  VerificationReport r;
  r.identity = "line_mass";
  r.params = {{"n", n}, {"spec", spec_json(spec)}};
  r.closed_form = std::ldexp(1.0, -(n + 2));
  r.numeric = mass;
  r.tail_estimate = exponential_tail(2.0 * line_weight(n, Y - 1.0), 2.0 * line_weight(n, Y), Y);
  return finish(std::move(r), spec);
}

VerificationReport verify_exponential_mass(double c, const QuadratureSpec& spec) {
  require_unit_interval(c, "verify_exponential_mass");
  const double lc = std::log(c);
  const MuIntegral mi = integrate_mu_detailed([&](const HalfPlanePoint& p) { return std::exp(p.z() * lc); }, spec);
  VerificationReport r;
  r.identity = "exponential_mass";
  r.params = {{"c", c}, {"spec", spec_json(spec)}};
  r.closed_form = 1.0;
  r.numeric = mi.value;
  r.tail_estimate = mi.tail_estimate;
  return finish(std::move(r), spec);
}

double three_lines_norm_sq(double a, double x, const QuadratureSpec& spec) {
  require_unit_interval(a, "three_lines");
  if (!(x >= -0.5)) throw DomainError("three_lines: lines must satisfy x >= -1/2");
  validate(spec);
  auto g = [&](double y) -> Complex { return abs_gamma_sq(x + 1.0, y); };
  const LineIntegral li = integrate_symmetric(g, spec.y_cutoff, spec.nodes_per_unit);
  return std::pow(a, 2.0 * x) * li.value.real();
}

VerificationReport verify_three_lines(double a, double alpha, double beta, double gamma,
                                      const QuadratureSpec& spec) {
  if (!(a > 0.0 && a < 1.0 + 1e-15)) throw DomainError("verify_three_lines: a must lie in (0, 1]");
  if (!(alpha >= -0.5 && alpha < beta && beta < gamma))
    throw DomainError("verify_three_lines: requires -1/2 <= alpha < beta < gamma");
  validate(spec);

  double tail = 0.0;
  auto norm_sq = [&](double x) {
    auto g = [&](double y) -> Complex { return abs_gamma_sq(x + 1.0, y); };
    const LineIntegral li = integrate_symmetric(g, spec.y_cutoff, spec.nodes_per_unit);
    tail = std::max(tail, std::pow(a, 2.0 * x) * li.tail_estimate);
    return std::pow(a, 2.0 * x) * li.value.real();
  };
  const double na = std::sqrt(norm_sq(alpha));
  const double nb = std::sqrt(norm_sq(beta));
  const double nc = std::sqrt(norm_sq(gamma));
  const double theta = (gamma - beta) / (gamma - alpha);
  const double bound = std::pow(na, theta) * std::pow(nc, 1.0 - theta);

  VerificationReport r;
  r.identity = "three_lines";
  r.params = {{"a", a},
              {"alpha", alpha},
              {"beta", beta},
              {"gamma", gamma},
              {"line_norms", {na, nb, nc}},
              {"slack", bound - nb},
              {"spec", spec_json(spec)}};
  r.closed_form = bound;
  r.numeric = nb;
  r.abs_diff = std::abs(bound - nb);
  r.tail_estimate = tail;
  r.pass = bound - nb >= -spec.tolerance;
  if (r.tail_estimate > spec.tolerance) {
    r.pass = false;
    throw QuadratureBudgetExceeded(std::move(r));
  }
  return r;
}

VerificationReport verify_norm_bound(const ExponentialCoefficients& f, int m, const QuadratureSpec& spec) {
  if (m < 0) throw DomainError("verify_norm_bound: requires m >= 0");
  validate(spec);
  if (m > spec.max_line) throw DomainError("verify_norm_bound: m beyond max_line");
  const double lhs = f.norm_sq_exact();
  auto integrand = [&](const HalfPlanePoint& p) -> Complex { return std::norm(f(p.z())); };
  const MuIntegral mi = integrate_mu_detailed(integrand, spec);
  double omitted = 0.0;
  for (std::size_t k = 0; k < mi.per_line.size(); ++k)
    if (static_cast<int>(k) - 1 != m) omitted += mi.per_line[k].real();
  const double rhs = (m + 3) * omitted;

  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : f.terms()) terms.push_back({{"base", t.base}, {"coeff", complex_json(t.coeff)}});
  VerificationReport r;
  r.identity = "norm_bound";
  r.params = {{"m", m}, {"terms", terms}, {"spec", spec_json(spec)}};
  r.closed_form = lhs;
  r.numeric = rhs;
  r.abs_diff = std::abs(rhs - lhs);
  r.tail_estimate = mi.tail_estimate;
  r.pass = lhs <= rhs * (1.0 + spec.tolerance);
  return r;
}

}  // namespace compsemi
