#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "compsemi/operators.hpp"
#include "compsemi/rational.hpp"
#include "compsemi/specialfn.hpp"

namespace compsemi {

/// Finite sum of characters chi_alpha(y) = e^{i alpha y}.
///
/// Terms produced by the symbol map are stored exactly as
///   c * P^{-1/2} * chi_{-ln R}
/// keyed by the rationals (R, P), so that frequency cancellation and the
/// multiplicative laws hold without rounding. Terms with an arbitrary real
/// frequency are kept separately and merged when their frequencies agree
/// within kFrequencyMergeTol.
class TrigPolynomial {
public:
  static constexpr double kFrequencyMergeTol = 1e-12;

  struct Term {
    double frequency;
    Complex coefficient;
  };

  TrigPolynomial() = default;

  /// c * chi_alpha.
  static TrigPolynomial character(double alpha, Complex c = 1.0);
  /// c * P^{-1/2} * chi_{-ln R}, R > 0, P > 0.
  static TrigPolynomial exact_character(const Rational& ratio, const Rational& scale, Complex c = 1.0);
  static TrigPolynomial constant(Complex c) { return exact_character(1, 1, c); }

  bool empty() const noexcept { return exact_.empty() && floating_.empty(); }

  /// Terms merged by frequency, ascending, zero coefficients dropped.
  std::vector<Term> terms() const;

  Complex operator()(double y) const;

  TrigPolynomial& operator+=(const TrigPolynomial& other);
  TrigPolynomial operator+(const TrigPolynomial& other) const;
  TrigPolynomial operator*(const TrigPolynomial& other) const;
  TrigPolynomial operator*(Complex c) const;

  /// Complex conjugate: frequencies mirrored, coefficients conjugated.
  TrigPolynomial conj() const;

  /// Sum of |c| over merged terms; an upper bound for the sup norm.
  double coefficient_sum() const;

  /// Exact structural equality of the stored terms.
  bool operator==(const TrigPolynomial& other) const;

  using ExactKey = std::pair<Rational, Rational>;
  const std::map<ExactKey, Complex>& exact_terms() const noexcept { return exact_; }
  const std::map<double, Complex>& floating_terms() const noexcept { return floating_; }

  /// Frequency -ln R as reported for an exact key.
  static double frequency_of(const Rational& ratio);
  /// Coefficient factor P^{-1/2}.
  static double scale_factor(const Rational& scale);

private:
  void add_exact(const ExactKey& key, Complex c);
  void add_floating(double alpha, Complex c);

  std::map<ExactKey, Complex> exact_;
  std::map<double, Complex> floating_;
};

Complex evaluate(const TrigPolynomial& f, double y);

/// Element (f, c) of AP(R) (+) C.
struct SymbolPair {
  TrigPolynomial ap_part;
  Complex point_part = 0.0;

  SymbolPair operator*(const SymbolPair& other) const;
  SymbolPair operator+(const SymbolPair& other) const;
  SymbolPair operator*(Complex c) const;
  SymbolPair adjoint() const;
  bool operator==(const SymbolPair&) const = default;
};

/// c0 I + sum_i c_i word_i with canonical words.
struct Combination {
  Complex c0 = 0.0;
  std::vector<std::pair<Complex, Word>> terms;

  Combination() = default;
  Combination(Complex c0, std::vector<std::pair<Complex, Word>> terms);

  std::string to_string() const;
};

/// psi(C_s) = (s^{-1/2} chi_{-ln s}, 0), psi(C_s*) = (s^{-1/2} chi_{ln s}, 0),
/// psi(I) = (chi_0, 1).
SymbolPair symbol_of_generator(const Rational& s, bool adjoint);
SymbolPair symbol_of_generator(double s, bool adjoint);
SymbolPair symbol_of_word(const Word& w);
SymbolPair symbol_of_combination(const Combination& a);

/// Stored coefficient at frequency alpha (terms within kFrequencyMergeTol).
Complex bohr_coefficient(const TrigPolynomial& f, double alpha);
/// Stored coefficient of the exact frequency -ln R.
Complex bohr_coefficient_exact(const TrigPolynomial& f, const Rational& ratio);

struct BohrMean {
  Complex value;
  double error_bound = 0.0;  ///< sum over other frequencies of |c| / (T |beta - alpha|)
};

/// (1 / 2T) Int_{-T}^{T} f(y) e^{-i alpha y} dy by panel quadrature.
BohrMean bohr_mean(const TrigPolynomial& f, double alpha, double T);

struct SupNormEstimate {
  double lower = 0.0;  ///< max of |f| over the samples
  double upper = 0.0;  ///< sum of |c|
};

/// Samples |f| on a golden-ratio sequence over [-L, L], L spanning ten
/// periods of the slowest frequency difference. Single-frequency
/// polynomials have constant modulus and are returned exactly.
SupNormEstimate sup_norm_estimate(const TrigPolynomial& f, int samples);

/// A + ... acting on a coefficient vector: c0 v + sum c_i word_i v.
Eigen::VectorXcd apply_combination(const Combination& a, const Eigen::VectorXcd& v);

struct InclusionResidual {
  int N = 0;
  int ell = 0;
  double value = 0.0;
};

struct InclusionSample {
  double y = 0.0;
  Complex lambda;
  std::vector<InclusionResidual> residuals;
};

struct SpectrumInclusionReport {
  std::string word;
  SymbolPair symbol;
  std::vector<InclusionSample> samples;
  std::vector<InclusionResidual> point_residuals;  ///< (A - c0) on k_{ell/2}
};

/// For each y, lambda = psi(A)(y) and the residual ||(A_N - lambda) v|| / ||v||
/// with v the Newton coordinates of k_{-1/2 + 1/ell + i y}. Residuals are
/// certificates for the approximate point spectrum only.
SpectrumInclusionReport spectrum_inclusion_report(const Combination& a, const std::vector<int>& N_list,
                                                  const std::vector<double>& y_samples,
                                                  const std::vector<int>& ell_list);

nlohmann::json symbol_terms_json(const TrigPolynomial& f);
nlohmann::json to_json(const SymbolPair& p);
nlohmann::json to_json(const SpectrumInclusionReport& r);

}  // namespace compsemi
