#include "compsemi/operators.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>

#include "compsemi/measure.hpp"

namespace compsemi {

namespace {

void require_s(double s, const char* what) {
  if (!(s > 0.0 && s <= 1.0)) throw DomainError(std::string(what) + ": s must lie in (0, 1]");
}

void require_dim(int N, const char* what) {
  if (N < 1) throw DomainError(std::string(what) + ": N must be >= 1");
}

// Column n of the composition matrix holds the Binomial(n, s) probabilities,
// built column by column so that no binomial coefficient is ever formed.
Eigen::MatrixXd binomial_columns(double s, int N) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(N, N);
  c(0, 0) = 1.0;
  const double r = 1.0 - s;
  for (int n = 1; n < N; ++n) {
    c(0, n) = r * c(0, n - 1);
    for (int k = 1; k <= n; ++k) c(k, n) = s * c(k - 1, n - 1) + r * c(k, n - 1);
  }
  return c;
}

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real() + 0.0, z.imag() + 0.0}); }

// ||C_s|| = ||T_s|| = s^{-1/2}.
double generator_norm(double s) { return 1.0 / std::sqrt(s); }

}  // namespace

const char* to_string(Basis b) noexcept { return b == Basis::monomial ? "monomial" : "newton"; }

TruncatedOperator composition_matrix(double s, int N) {
  require_s(s, "composition_matrix");
  require_dim(N, "composition_matrix");
  return {N, Basis::monomial, binomial_columns(s, N).cast<Complex>()};
}

TruncatedOperator toeplitz_matrix(double s, int N) {
  require_s(s, "toeplitz_matrix");
  require_dim(N, "toeplitz_matrix");
  return {N, Basis::newton, binomial_columns(s, N).transpose().cast<Complex>()};
}

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
  if (letters_.empty()) throw DomainError("Word: empty letter list");
  for (const Letter& l : letters_)
    if (!(l.s > 0 && l.s <= 1)) throw DomainError("Word: every s must lie in (0, 1]");
}

Word Word::canonical() const {
  std::vector<Letter> merged;
  for (const Letter& l : letters_) {
    if (l.s == 1) continue;
    if (!merged.empty() && merged.back().adjoint == l.adjoint)
      merged.back().s *= l.s;
    else
      merged.push_back(l);
  }
  if (merged.empty() || merged.front().adjoint) merged.insert(merged.begin(), Letter{1, false});
  if (!merged.back().adjoint) merged.push_back(Letter{1, true});
  return Word(std::move(merged));
}

bool Word::is_canonical() const {
  if (letters_.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (letters_[i].adjoint != (i % 2 == 1)) return false;
    const bool end = i == 0 || i + 1 == letters_.size();
    if (letters_[i].s == 1 && !end) return false;
  }
  return true;
}

bool Word::is_identity() const {
  for (const Letter& l : letters_)
    if (l.s != 1) return false;
  return true;
}

Word Word::adjoint() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (Letter& l : out) l.adjoint = !l.adjoint;
  return Word(std::move(out));
}

Word Word::operator*(const Word& other) const {
  std::vector<Letter> out = letters_;
  out.insert(out.end(), other.letters_.begin(), other.letters_.end());
  return Word(std::move(out));
}

std::string Word::to_string() const {
  if (is_identity()) return "I";
  std::string out;
  for (const Letter& l : letters_) {
    out += l.adjoint ? "C*(" : "C(";
    out += format_rational(l.s);
    out += ')';
  }
  return out;
}

TruncatedOperator word_matrix(const Word& word, int N, Basis basis) {
  require_dim(N, "word_matrix");
  Eigen::MatrixXd product = Eigen::MatrixXd::Identity(N, N);
  for (const Letter& l : word.letters()) {
    if (l.s == 1) continue;
    const Eigen::MatrixXd c = binomial_columns(l.value(), N);
    if (l.adjoint)
      product = product * c.transpose();
    else
      product = product * c;
  }
  return {N, basis, product.cast<Complex>()};
}

Eigen::VectorXcd apply_word(const Word& word, const Eigen::VectorXcd& v) {
  const int N = static_cast<int>(v.size());
  require_dim(N, "apply_word");
  Eigen::VectorXcd out = v;
  const auto& letters = word.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    if (it->s == 1) continue;
    const Eigen::MatrixXd c = binomial_columns(it->value(), N);
    if (it->adjoint)
      out = c.transpose().triangularView<Eigen::Lower>() * out;
    else
      out = c.triangularView<Eigen::Upper>() * out;
  }
  return out;
}

KernelVector kernel_vector(Complex w, int N) {
  require_dim(N, "kernel_vector");
  KernelVector kv;
  kv.w = w;
  kv.dim = N;
  kv.norm_sq_exact = kernel_norm_sq(w);
  kv.coords.resize(N);
  Complex nn = 1.0;
  double partial = 0.0;
  for (int n = 0; n < N; ++n) {
    kv.coords[n] = std::conj(nn);
    partial += std::norm(nn);
    nn *= (double(n) - w) / double(n + 1);
  }
  kv.tail_mass = std::max(0.0, kv.norm_sq_exact - partial);
  return kv;
}

double residual(const TruncatedOperator& op, Complex lambda, const Eigen::VectorXcd& v) {
  if (v.size() != op.dim || op.entries.rows() != op.dim || op.entries.cols() != op.dim)
    throw DimensionMismatch("residual: vector length differs from operator dimension");
  const double vn = v.norm();
  if (vn == 0.0) throw DomainError("residual: zero vector");
  return (op.entries * v - lambda * v).norm() / vn;
}

VerificationReport verify_adjoint_eigen(double s, Complex w, int N) {
  require_s(s, "verify_adjoint_eigen");
  const KernelVector kv = kernel_vector(w, N);
  const Complex lambda = std::conj(std::exp(w * std::log(s)));
  const Eigen::MatrixXd c = binomial_columns(s, N);
  const Eigen::VectorXcd tv = c.triangularView<Eigen::Upper>() * kv.coords;
  const double pn = kv.coords.norm();
  const double res = (tv - lambda * kv.coords).norm() / pn;
  // (P T* P - lambda) P k = -P T* Q k, so the residual is at most
  // ||T*|| ||Q k|| / ||P k||.
  const double bound = generator_norm(s) * std::sqrt(kv.tail_mass) / pn + 1e-12;

  VerificationReport r;
  r.identity = "adjoint_eigen";
  r.params = {{"s", s}, {"w", complex_json(w)}, {"N", N}, {"eigenvalue", complex_json(lambda)},
              {"tail_mass", kv.tail_mass}};
  r.closed_form = 0.0;
  r.numeric = res;
  r.abs_diff = res;
  r.tail_estimate = bound;
  r.pass = res <= bound;
  return r;
}

double analytic_residual_sq(double s, double y, int ell) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("analytic_residual_sq: s must lie in (0, 1)");
  if (ell < 1) throw DomainError("analytic_residual_sq: ell must be >= 1");
  const Complex e = {-0.5, y};
  const Complex lambda = std::exp(e * std::log(s));
  const double cross = (std::conj(lambda) * lambda).real();
  return std::pow(2.0 - s, -2.0 / ell) / s - 2.0 * cross * std::pow(s, 1.0 / ell) + 1.0 / s;
}

std::vector<ResidualRow> residual_sequence(double s, double y, const std::vector<int>& ell_list, int N) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("residual_sequence: s must lie in (0, 1)");
  require_dim(N, "residual_sequence");
  const Eigen::MatrixXd t = binomial_columns(s, N).transpose();
  const Complex lambda = std::exp(Complex(-0.5, y) * std::log(s));

  std::vector<ResidualRow> rows;
  rows.reserve(ell_list.size());
  for (int ell : ell_list) {
    if (ell < 1) throw DomainError("residual_sequence: ell must be >= 1");
    ResidualRow row;
    row.ell = ell;
    row.w = {-0.5 + 1.0 / ell, y};
    const KernelVector kv = kernel_vector(row.w, N);
    const double scale = 1.0 / std::sqrt(kv.norm_sq_exact);
    const Eigen::VectorXcd u = kv.coords * scale;  // P k for the normalised kernel
    const Eigen::VectorXcd tu = t.triangularView<Eigen::Lower>() * u;
    const double un2 = u.squaredNorm();
    const double r2 = (tu - lambda * u).squaredNorm();
    row.numeric = std::sqrt(r2 / un2);
    row.analytic = std::sqrt(std::max(0.0, analytic_residual_sq(s, y, ell)));
    row.tail_mass = kv.tail_mass / kv.norm_sq_exact;
    // T is lower triangular, so P T = P T P and
    //   analytic^2 - r2 = ||Q T k - lambda Q k||^2 in [0, B].
    const double tk2 = ip_lemma31(s, s, row.w).real();
    const double missing = std::sqrt(std::max(0.0, tk2 - tu.squaredNorm()));
    const double b = std::pow(missing + std::abs(lambda) * std::sqrt(row.tail_mass), 2);
    row.tail = b + row.numeric * row.numeric * row.tail_mass + 1e-12;
    rows.push_back(row);
  }
  return rows;
}

namespace {

// Column n of T_a is a negative binomial profile in the row index, centred
// near n / a. Carrying the rows well past that makes T_a applied to a vector
// supported on the first N coordinates exact up to rounding.
int tall_rows(double a, int N) {
  return static_cast<int>(std::ceil((N + 40.0 * std::sqrt(double(N)) + 100.0) / a));
}

// First N columns of T_a = transpose of C_a, with `rows` rows.
Eigen::MatrixXd tall_columns(double a, int N, int rows) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, N);  // m(j, n) = C_a[n][j]
  m(0, 0) = 1.0;
  for (int j = 1; j < rows; ++j) {
    m(j, 0) = (1.0 - a) * m(j - 1, 0);
    for (int n = 1; n < N && n <= j; ++n) m(j, n) = a * m(j - 1, n - 1) + (1.0 - a) * m(j - 1, n);
  }
  return m;
}

}  // namespace

std::vector<ZeroDirectionRow> zero_direction_sequence(const std::vector<double>& s_list,
                                                      const std::vector<int>& ell_list, int N) {
  require_dim(N, "zero_direction_sequence");
  for (double s : s_list)
    if (!(s > 0.0 && s < 1.0)) throw DomainError("zero_direction_sequence: s must lie in (0, 1)");
  std::vector<ZeroDirectionRow> rows;
  for (int ell : ell_list) {
    if (ell < 1) throw DomainError("zero_direction_sequence: ell must be >= 1");
    const KernelVector kv = kernel_vector(0.5 * ell, N);
    for (double s : s_list) {
      ZeroDirectionRow row;
      row.s = s;
      row.ell = ell;
      const Eigen::VectorXcd tu = tall_columns(s, N, tall_rows(s, N)) * kv.coords;
      row.numeric = tu.norm() / std::sqrt(kv.norm_sq_exact);
      row.analytic = std::sqrt(std::pow(s, ell) / std::pow(2.0 * s - s * s, ell + 1));
      row.tail_mass = kv.tail_mass / kv.norm_sq_exact;
      // ||T k|| - ||T P k|| is at most ||T|| ||Q k||.
      row.tail = generator_norm(s) * std::sqrt(row.tail_mass) + 1e-12;
      rows.push_back(row);
    }
  }
  return rows;
}

Complex matrix_lemma31(double s, double t, Complex w, int N) {
  if (!(s > 0.0 && s < 1.0) || !(t > 0.0 && t < 1.0)) throw DomainError("matrix_lemma31: s, t must lie in (0, 1)");
  const KernelVector kv = kernel_vector(w, N);
  const Eigen::VectorXcd u = kv.coords / std::sqrt(kv.norm_sq_exact);
  const int rows = tall_rows(std::min(s, t), N);
  const Eigen::VectorXcd ts = tall_columns(s, N, rows) * u;
  const Eigen::VectorXcd tt = tall_columns(t, N, rows) * u;
  return tt.dot(ts);  // conj(tt)^T ts
}

double min_singular(const TruncatedOperator& op, Complex lambda) {
  const int N = op.dim;
  require_dim(N, "min_singular");
  const Eigen::MatrixXcd m = op.entries - lambda * Eigen::MatrixXcd::Identity(N, N);
  if (N <= kDenseSingularLimit) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues().minCoeff();
  }
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  Eigen::VectorXcd x = Eigen::VectorXcd::Constant(N, 1.0 / std::sqrt(double(N)));
  double estimate = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    const Eigen::VectorXcd z = lu.adjoint().solve(lu.solve(x));
    const double growth = z.norm();  // -> 1 / sigma_min^2
    if (!std::isfinite(growth)) return 0.0;
    const double next = 1.0 / std::sqrt(growth);
    x = z / growth;
    if (iter > 0 && std::abs(next - estimate) <= 1e-14 * estimate) return next;
    estimate = next;
  }
  return estimate;
}

double operator_norm(const TruncatedOperator& op) {
  const Eigen::MatrixXd re = op.entries.real();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(re);
  return svd.singularValues()(0);
}

void write_matrix_csv(const TruncatedOperator& op, std::ostream& out) {
  out << "row,col,re,im\n";
  out.precision(17);
  for (int c = 0; c < op.dim; ++c)
    for (int r = 0; r < op.dim; ++r) {
      const Complex v = op.entries(r, c);
      if (v != Complex(0.0)) out << r << ',' << c << ',' << v.real() << ',' << v.imag() << '\n';
    }
}

void write_matrix_binary(const TruncatedOperator& op, std::ostream& out) {
  const std::int32_t dims[2] = {op.dim, op.dim};
  out.write(reinterpret_cast<const char*>(dims), sizeof dims);
  for (int c = 0; c < op.dim; ++c)
    for (int r = 0; r < op.dim; ++r) {
      const double pair[2] = {op.entries(r, c).real(), op.entries(r, c).imag()};
      out.write(reinterpret_cast<const char*>(pair), sizeof pair);
    }
}

}  // namespace compsemi
