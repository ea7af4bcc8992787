#include "compsemi/apsymbol.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "compsemi/quadrature.hpp"

namespace compsemi {

namespace {

double log_of(const BigInt& v) {
  // ln v for v > 0 without overflowing the double conversion.
  const unsigned msb = boost::multiprecision::msb(v);
  if (msb < 1000) return std::log(v.convert_to<double>());
  const unsigned shift = msb - 60;
  const BigInt top = v >> shift;
  return std::log(top.convert_to<double>()) + shift * std::numbers::ln2;
}

double log_of(const Rational& q) {
  const double d = to_double(q);
  if (std::isnormal(d)) return std::log(d);
  return log_of(boost::multiprecision::numerator(q)) - log_of(boost::multiprecision::denominator(q));
}

// Adding 0.0 turns -0.0 into 0.0 so that printed values do not depend on rounding direction.
nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real() + 0.0, z.imag() + 0.0}); }

std::string format_complex(Complex c) {
  nlohmann::json re = c.real();
  if (c.imag() == 0.0) return re.dump();
  nlohmann::json im = c.imag();
  return "(" + re.dump() + (c.imag() < 0 ? "" : "+") + im.dump() + "i)";
}

}  // namespace

double TrigPolynomial::frequency_of(const Rational& ratio) { return -log_of(ratio); }

double TrigPolynomial::scale_factor(const Rational& scale) {
  const double d = to_double(scale);
  if (std::isnormal(d)) return 1.0 / std::sqrt(d);
  return std::exp(-0.5 * log_of(scale));
}

TrigPolynomial TrigPolynomial::character(double alpha, Complex c) {
  if (!std::isfinite(alpha)) throw DomainError("TrigPolynomial: non-finite frequency");
  TrigPolynomial f;
  f.add_floating(alpha, c);
  return f;
}

TrigPolynomial TrigPolynomial::exact_character(const Rational& ratio, const Rational& scale, Complex c) {
  if (!(ratio > 0) || !(scale > 0)) throw DomainError("TrigPolynomial: exact keys must be positive");
  TrigPolynomial f;
  f.add_exact({ratio, scale}, c);
  return f;
}

void TrigPolynomial::add_exact(const ExactKey& key, Complex c) {
  if (c == Complex(0.0)) return;
  auto [it, inserted] = exact_.emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex(0.0)) exact_.erase(it);
  }
}

void TrigPolynomial::add_floating(double alpha, Complex c) {
  if (c == Complex(0.0)) return;
  auto it = floating_.lower_bound(alpha - kFrequencyMergeTol);
  if (it != floating_.end() && std::abs(it->first - alpha) <= kFrequencyMergeTol) {
    it->second += c;
    if (it->second == Complex(0.0)) floating_.erase(it);
    return;
  }
  floating_.emplace(alpha == 0.0 ? 0.0 : alpha, c);
}

std::vector<TrigPolynomial::Term> TrigPolynomial::terms() const {
  std::map<double, Complex> merged;
  auto put = [&](double alpha, Complex c) {
    auto it = merged.lower_bound(alpha - kFrequencyMergeTol);
    if (it != merged.end() && std::abs(it->first - alpha) <= kFrequencyMergeTol)
      it->second += c;
    else
      merged.emplace(alpha, c);
  };
  for (const auto& [key, c] : exact_) put(key.first == 1 ? 0.0 : frequency_of(key.first), c * scale_factor(key.second));
  for (const auto& [alpha, c] : floating_) put(alpha, c);
  std::vector<Term> out;
  for (const auto& [alpha, c] : merged)
    if (c != Complex(0.0)) out.push_back({alpha, c});
  return out;
}

Complex TrigPolynomial::operator()(double y) const {
  Complex sum = 0.0;
  for (const auto& [key, c] : exact_) {
    const Complex v = c * scale_factor(key.second);
    sum += key.first == 1 ? v : v * std::polar(1.0, frequency_of(key.first) * y);
  }
  for (const auto& [alpha, c] : floating_) sum += alpha == 0.0 ? c : c * std::polar(1.0, alpha * y);
  return sum;
}

TrigPolynomial& TrigPolynomial::operator+=(const TrigPolynomial& other) {
  for (const auto& [key, c] : other.exact_) add_exact(key, c);
  for (const auto& [alpha, c] : other.floating_) add_floating(alpha, c);
  return *this;
}

TrigPolynomial TrigPolynomial::operator+(const TrigPolynomial& other) const {
  TrigPolynomial out = *this;
  out += other;
  return out;
}

TrigPolynomial TrigPolynomial::operator*(const TrigPolynomial& other) const {
  TrigPolynomial out;
  for (const auto& [ka, ca] : exact_)
    for (const auto& [kb, cb] : other.exact_) out.add_exact({ka.first * kb.first, ka.second * kb.second}, ca * cb);
  // Any product involving a floating term becomes floating.
  for (const auto& [ka, ca] : exact_)
    for (const auto& [beta, cb] : other.floating_)
      out.add_floating(frequency_of(ka.first) + beta, ca * scale_factor(ka.second) * cb);
  for (const auto& [alpha, ca] : floating_) {
    for (const auto& [kb, cb] : other.exact_)
      out.add_floating(alpha + frequency_of(kb.first), ca * cb * scale_factor(kb.second));
    for (const auto& [beta, cb] : other.floating_) out.add_floating(alpha + beta, ca * cb);
  }
  return out;
}

TrigPolynomial TrigPolynomial::operator*(Complex c) const {
  TrigPolynomial out;
  for (const auto& [key, v] : exact_) out.add_exact(key, v * c);
  for (const auto& [alpha, v] : floating_) out.add_floating(alpha, v * c);
  return out;
}

TrigPolynomial TrigPolynomial::conj() const {
  TrigPolynomial out;
  for (const auto& [key, v] : exact_) out.add_exact({Rational(1) / key.first, key.second}, std::conj(v));
  for (const auto& [alpha, v] : floating_) out.add_floating(-alpha, std::conj(v));
  return out;
}

double TrigPolynomial::coefficient_sum() const {
  double sum = 0.0;
  for (const Term& t : terms()) sum += std::abs(t.coefficient);
  return sum;
}

bool TrigPolynomial::operator==(const TrigPolynomial& other) const {
  return exact_ == other.exact_ && floating_ == other.floating_;
}

Complex evaluate(const TrigPolynomial& f, double y) { return f(y); }

SymbolPair SymbolPair::operator*(const SymbolPair& other) const {
  return {ap_part * other.ap_part, point_part * other.point_part};
}

SymbolPair SymbolPair::operator+(const SymbolPair& other) const {
  return {ap_part + other.ap_part, point_part + other.point_part};
}

SymbolPair SymbolPair::operator*(Complex c) const { return {ap_part * c, point_part * c}; }

SymbolPair SymbolPair::adjoint() const { return {ap_part.conj(), std::conj(point_part)}; }

Combination::Combination(Complex c0_, std::vector<std::pair<Complex, Word>> terms_) : c0(c0_) {
  for (auto& [c, w] : terms_) {
    if (w.is_identity())
      c0 += c;
    else
      terms.emplace_back(c, w.canonical());
  }
}

std::string Combination::to_string() const {
  std::string out;
  if (c0 != Complex(0.0) || terms.empty()) out = format_complex(c0) + "*I";
  for (const auto& [c, w] : terms) {
    const bool negative_real = c.imag() == 0.0 && c.real() < 0.0;
    if (!out.empty()) out += negative_real ? " - " : " + ";
    out += format_complex(negative_real && !out.empty() ? -c : c) + "*" + w.to_string();
  }
  return out;
}

SymbolPair symbol_of_generator(const Rational& s, bool adjoint) {
  if (!(s > 0 && s <= 1)) throw DomainError("symbol_of_generator: s must lie in (0, 1]");
  if (s == 1) return {TrigPolynomial::constant(1.0), 1.0};
  // s^{-1/2 + i y} = s^{-1/2} e^{-i y ln s}: frequency -ln s, key R = s.
  const Rational ratio = adjoint ? Rational(1 / s) : s;
  return {TrigPolynomial::exact_character(ratio, s), 0.0};
}

SymbolPair symbol_of_generator(double s, bool adjoint) {
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("symbol_of_generator: s must lie in (0, 1]");
  return symbol_of_generator(rational_from_double(s), adjoint);
}

SymbolPair symbol_of_word(const Word& w) {
  SymbolPair out{TrigPolynomial::constant(1.0), 1.0};
  for (const Letter& l : w.letters()) out = out * symbol_of_generator(l.s, l.adjoint);
  return out;
}

SymbolPair symbol_of_combination(const Combination& a) {
  SymbolPair out{TrigPolynomial::constant(a.c0), a.c0};
  for (const auto& [c, w] : a.terms) out = out + symbol_of_word(w) * c;
  return out;
}

Complex bohr_coefficient(const TrigPolynomial& f, double alpha) {
  Complex sum = 0.0;
  for (const auto& t : f.terms())
    if (std::abs(t.frequency - alpha) <= TrigPolynomial::kFrequencyMergeTol) sum += t.coefficient;
  return sum;
}

Complex bohr_coefficient_exact(const TrigPolynomial& f, const Rational& ratio) {
  Complex sum = 0.0;
  for (const auto& [key, c] : f.exact_terms())
    if (key.first == ratio) sum += c * TrigPolynomial::scale_factor(key.second);
  return sum;
}

BohrMean bohr_mean(const TrigPolynomial& f, double alpha, double T) {
  if (!(T > 0.0)) throw DomainError("bohr_mean: T must be positive");
  const auto terms = f.terms();
  double max_shift = 0.0;
  BohrMean out;
  for (const auto& t : terms) {
    const double d = std::abs(t.frequency - alpha);
    max_shift = std::max(max_shift, d);
    if (d > TrigPolynomial::kFrequencyMergeTol) out.error_bound += std::abs(t.coefficient) / (T * d);
  }
  // Ten-point panels resolve about one oscillation per panel comfortably.
  const int ppu = std::max(1, static_cast<int>(std::ceil(max_shift / std::numbers::pi)));
  const PanelRule rule = panel_rule(-T, T, ppu);
  Complex sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = rule.nodes[i];
    sum += rule.weights[i] * f(y) * std::polar(1.0, -alpha * y);
  }
  out.value = sum / (2.0 * T);
  return out;
}

SupNormEstimate sup_norm_estimate(const TrigPolynomial& f, int samples) {
  if (samples < 1) throw DomainError("sup_norm_estimate: samples must be >= 1");
  SupNormEstimate out;
  const auto terms = f.terms();
  out.upper = f.coefficient_sum();
  if (terms.size() <= 1) {
    out.lower = out.upper;
    return out;
  }
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      min_gap = std::min(min_gap, std::abs(terms[i].frequency - terms[j].frequency));
  const double L = 10.0 * 2.0 * std::numbers::pi / min_gap;
  const double step = std::numbers::phi - 1.0;
  double best = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double u = std::fmod(0.5 + k * step, 1.0);
    best = std::max(best, std::abs(f(L * (2.0 * u - 1.0))));
  }
  out.lower = std::min(best, out.upper);
  return out;
}

Eigen::VectorXcd apply_combination(const Combination& a, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out = a.c0 * v;
  for (const auto& [c, w] : a.terms) out += c * apply_word(w, v);
  return out;
}

SpectrumInclusionReport spectrum_inclusion_report(const Combination& a, const std::vector<int>& N_list,
                                                  const std::vector<double>& y_samples,
                                                  const std::vector<int>& ell_list) {
  SpectrumInclusionReport rep;
  rep.word = a.to_string();
  rep.symbol = symbol_of_combination(a);
  for (int ell : ell_list)
    if (ell < 1) throw DomainError("spectrum_inclusion_report: ell must be >= 1");
  for (double y : y_samples) {
    InclusionSample sample;
    sample.y = y;
    sample.lambda = evaluate(rep.symbol.ap_part, y);
    for (int N : N_list)
      for (int ell : ell_list) {
        const KernelVector kv = kernel_vector({-0.5 + 1.0 / ell, y}, N);
        const Eigen::VectorXcd av = apply_combination(a, kv.coords);
        const double value = (av - sample.lambda * kv.coords).norm() / kv.coords.norm();
        sample.residuals.push_back({N, ell, value});
      }
    rep.samples.push_back(std::move(sample));
  }
  for (int N : N_list)
    for (int ell : ell_list) {
      const KernelVector kv = kernel_vector(0.5 * ell, N);
      const Eigen::VectorXcd av = apply_combination(a, kv.coords);
      rep.point_residuals.push_back({N, ell, (av - a.c0 * kv.coords).norm() / kv.coords.norm()});
    }
  return rep;
}

nlohmann::json symbol_terms_json(const TrigPolynomial& f) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : f.terms())
    out.push_back({{"freq", t.frequency}, {"re", t.coefficient.real()}, {"im", t.coefficient.imag()}});
  return out;
}

nlohmann::json to_json(const SymbolPair& p) {
  return {{"symbol", symbol_terms_json(p.ap_part)}, {"point", complex_json(p.point_part)}};
}

namespace {

nlohmann::json residuals_json(const std::vector<InclusionResidual>& rs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rs) out.push_back({{"N", r.N}, {"ell", r.ell}, {"value", r.value}});
  return out;
}

}  // namespace

nlohmann::json to_json(const SpectrumInclusionReport& r) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"y", s.y}, {"lambda", complex_json(s.lambda)}, {"residuals", residuals_json(s.residuals)}});
  return {{"header",
           "{c0} union closure{psi(A)(y)} is contained in sigma(A); residuals below certify "
           "approximate eigenvectors only"},
          {"word", r.word},
          {"symbol", symbol_terms_json(r.symbol.ap_part)},
          {"point", complex_json(r.symbol.point_part)},
          {"samples", samples},
          {"point_residuals", residuals_json(r.point_residuals)}};
}

}  // namespace compsemi
