#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "compsemi/rational.hpp"
#include "compsemi/report.hpp"
#include "compsemi/specialfn.hpp"

namespace compsemi {

/// Coordinates with respect to u^n in H^2(D) or to N_n in the Newton space.
/// V u^n = N_n, so both tags describe the same coefficient vector; the tag
/// records which space a matrix is meant to act on.
enum class Basis { monomial, newton };

const char* to_string(Basis b) noexcept;

struct TruncatedOperator {
  int dim = 0;
  Basis basis = Basis::monomial;
  Eigen::MatrixXcd entries;
};

/// Matrix of C_{phi_s}, phi_s(z) = s z + 1 - s, on polynomials of degree < N:
/// entries[k][n] = binom(n, k) s^k (1 - s)^{n - k}. Exact truncation.
TruncatedOperator composition_matrix(double s, int N);

/// T_{s^z} in the Newton basis: the transpose of composition_matrix(s, N).
TruncatedOperator toeplitz_matrix(double s, int N);

/// One generator C_{phi_s} or its adjoint. s is held exactly so that words
/// can be merged and their symbols compared without rounding.
struct Letter {
  Rational s;
  bool adjoint = false;

  double value() const { return to_double(s); }
  bool operator==(const Letter&) const = default;
};

/// A product of letters, leftmost letter applied last.
class Word {
public:
  explicit Word(std::vector<Letter> letters);

  const std::vector<Letter>& letters() const noexcept { return letters_; }

  /// Alternating form C_{s1} C*_{s2} C_{s3} ... C*_{sm}: adjacent letters of the
  /// same kind are merged (C_s C_t = C_{st}), interior identities dropped, and
  /// s = 1 padding added at the ends so that the length is even.
  Word canonical() const;
  bool is_canonical() const;

  /// True when the word represents the identity operator.
  bool is_identity() const;

  /// The adjoint word: reversed order, adjoint flags flipped.
  Word adjoint() const;

  /// Concatenation (this applied after other).
  Word operator*(const Word& other) const;

  /// "C(1/4)C*(0.5)" style text, accepted by parse_word.
  std::string to_string() const;

  bool operator==(const Word&) const = default;

private:
  std::vector<Letter> letters_;
};

/// Ordered product of letter truncations. Adjoint letters use the transpose
/// of composition_matrix. Products of truncations only approach truncations
/// of products as N grows, because adjoint letters are lower triangular.
TruncatedOperator word_matrix(const Word& word, int N, Basis basis = Basis::monomial);

/// Applies word to v letter by letter (O(N^2) per letter).
Eigen::VectorXcd apply_word(const Word& word, const Eigen::VectorXcd& v);

/// Coordinates of K_w in the Newton basis: coords[n] = conj(N_n(w)).
struct KernelVector {
  Complex w;
  int dim = 0;
  Eigen::VectorXcd coords;
  double norm_sq_exact = 0.0;
  double tail_mass = 0.0;  ///< norm_sq_exact minus the truncated sum of |coords|^2
};

KernelVector kernel_vector(Complex w, int N);

/// ||(A - lambda) v|| / ||v||.
double residual(const TruncatedOperator& op, Complex lambda, const Eigen::VectorXcd& v);

/// Checks T* K_w = conj(s^w) K_w on the truncation, with a bound driven by the
/// kernel tail mass.
VerificationReport verify_adjoint_eigen(double s, Complex w, int N);

struct ResidualRow {
  int ell = 0;
  Complex w;             ///< -1/2 + 1/ell + i y
  double numeric = 0.0;  ///< residual(toeplitz_matrix(s, N), lambda, k_w)
  double analytic = 0.0; ///< square root of the closed-form residual^2
  double tail = 0.0;     ///< bound on |analytic^2 - numeric^2| from truncation
  double tail_mass = 0.0;
};

/// Approximate eigenvectors k_{w_l} of T_{s^z} for lambda = s^{-1/2 + i y}.
std::vector<ResidualRow> residual_sequence(double s, double y, const std::vector<int>& ell_list, int N);

/// Closed-form residual^2 for the sequence above.
double analytic_residual_sq(double s, double y, int ell);

struct ZeroDirectionRow {
  double s = 0.0;
  int ell = 0;
  double numeric = 0.0;   ///< ||T P k|| / ||k|| for k = k_{ell/2}
  double analytic = 0.0;  ///< sqrt(s^ell / (2s - s^2)^{ell+1})
  double tail_mass = 0.0; ///< relative tail mass of k beyond N
  double tail = 0.0;      ///< bound on |numeric - analytic|
};

std::vector<ZeroDirectionRow> zero_direction_sequence(const std::vector<double>& s_list,
                                                      const std::vector<int>& ell_list, int N);

/// <T_t^* T_s k_w, k_w> as the quadratic form of the N x N compression of
/// T_t^* T_s on the first N coordinates of the normalised kernel.
Complex matrix_lemma31(double s, double t, Complex w, int N);

/// Smallest singular value of op - lambda I. Dense SVD up to
/// kDenseSingularLimit, inverse iteration on (M^H M)^{-1} above.
inline constexpr int kDenseSingularLimit = 600;
double min_singular(const TruncatedOperator& op, Complex lambda);

/// Largest singular value of a real composition matrix.
double operator_norm(const TruncatedOperator& op);

/// Matrix dumps: CSV rows "row,col,re,im" for nonzero entries, or raw
/// column-major pairs of little-endian doubles preceded by two int32 sizes.
void write_matrix_csv(const TruncatedOperator& op, std::ostream& out);
void write_matrix_binary(const TruncatedOperator& op, std::ostream& out);

}  // namespace compsemi
