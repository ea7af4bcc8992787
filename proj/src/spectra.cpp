#include "compsemi/spectra.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace compsemi {

namespace {

constexpr double kPi = std::numbers::pi;

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Returns g = gcd(a, b) >= 0 and x, y with a x + b y = g.
BigInt extended_gcd(const BigInt& a, const BigInt& b, BigInt& x, BigInt& y) {
  BigInt old_r = a, r = b, old_x = 1, cx = 0, old_y = 0, cy = 1;
  while (r != 0) {
    const BigInt q = old_r / r;
    BigInt t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_x - q * cx;
    old_x = cx;
    cx = t;
    t = old_y - q * cy;
    old_y = cy;
    cy = t;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_x = -old_x;
    old_y = -old_y;
  }
  x = old_x;
  y = old_y;
  return old_r;
}

// Integer kernel of the row vector a (all entries nonzero) via unimodular
// column operations: a U = (g, 0, ..., 0), so columns 1.. of U span ker a.
std::vector<std::vector<BigInt>> integer_kernel(std::vector<BigInt> a) {
  const std::size_t m = a.size();
  std::vector<std::vector<BigInt>> u(m, std::vector<BigInt>(m, 0));  // u[col][row]
  for (std::size_t i = 0; i < m; ++i) u[i][i] = 1;
  for (std::size_t j = 1; j < m; ++j) {
    BigInt x, y;
    const BigInt g = extended_gcd(a[0], a[j], x, y);
    const BigInt p = a[j] / g;
    const BigInt q = a[0] / g;
    std::vector<BigInt> c0(m), cj(m);
    for (std::size_t r = 0; r < m; ++r) {
      c0[r] = x * u[0][r] + y * u[j][r];
      cj[r] = p * u[0][r] - q * u[j][r];
    }
    u[0] = std::move(c0);
    u[j] = std::move(cj);
    a[0] = g;
    a[j] = 0;
  }
  return {u.begin() + 1, u.end()};
}

double wrap_angle(double r) { return std::remainder(r, 2.0 * kPi); }

}  // namespace

bool SingleSpectrum::contains(Complex lambda, double tol) const {
  if (lambda == Complex(0.0)) return includes_zero;
  return std::abs(std::abs(lambda) - radius) <= tol;
}

SingleSpectrum single_spectrum(double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("single_spectrum: s must lie in (0, 1)");
  return {1.0 / std::sqrt(s), true};
}

double exclusion_bound(double s, int m) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("exclusion_bound: s must lie in (0, 1)");
  if (m < 0) throw DomainError("exclusion_bound: m must be >= 0");
  const double lambda = std::pow(s, 0.5 * m) * (1.0 - std::sqrt(s));
  return lambda * lambda / (m + 3);
}

VerificationReport verify_exclusion_bound(const ExponentialCoefficients& f, double s, int m, double y0,
                                          const QuadratureSpec& spec) {
  const double bound = exclusion_bound(s, m);
  validate(spec);
  const Complex z0 = {0.5 * m, y0};
  const Complex sz0 = std::exp(z0 * std::log(s));

  // (s^z - s^{z0}) f is again a combination of exponentials.
  std::vector<ExponentialCoefficients::Term> terms;
  for (const auto& t : f.terms()) {
    terms.push_back({s * t.base, t.coeff});
    terms.push_back({t.base, -sz0 * t.coeff});
  }
  const ExponentialCoefficients g(std::move(terms));
  const double exact = g.norm_sq_exact();
  const double f_norm_sq = f.norm_sq_exact();

  const double ls = std::log(s);
  auto integrand = [&](const HalfPlanePoint& p) -> Complex {
    const Complex z = p.z();
    return std::norm((std::exp(z * ls) - sz0) * f(z));
  };
  const MuIntegral mi = integrate_mu_detailed(integrand, spec);
  const double rhs = bound * f_norm_sq;

  nlohmann::json fterms = nlohmann::json::array();
  for (const auto& t : f.terms())
    fterms.push_back({{"base", t.base}, {"coeff", {t.coeff.real(), t.coeff.imag()}}});
  VerificationReport r;
  r.identity = "exclusion_bound";
  r.params = {{"s", s}, {"m", m}, {"y0", y0}, {"terms", fterms}, {"rhs", rhs}, {"f_norm_sq", f_norm_sq}};
  r.closed_form = exact;
  r.numeric = mi.value;
  r.abs_diff = std::abs(mi.value - exact);
  r.tail_estimate = mi.tail_estimate;
  r.pass = exact >= rhs && mi.value.real() >= rhs - spec.tolerance && r.abs_diff <= spec.tolerance * (1.0 + exact);
  if (r.tail_estimate > spec.tolerance) {
    r.pass = false;
    throw QuadratureBudgetExceeded(std::move(r));
  }
  return r;
}

ExponentTuple::ExponentTuple(double beta, std::vector<Rational> q)
    : ExponentTuple(std::vector<double>{beta}, std::move(q), {}) {}

ExponentTuple::ExponentTuple(std::vector<double> group_beta, std::vector<Rational> q, std::vector<int> group)
    : group_beta_(std::move(group_beta)), q_(std::move(q)), group_(std::move(group)) {
  if (q_.empty()) throw DomainError("ExponentTuple: empty q");
  if (group_.empty()) group_.assign(q_.size(), 0);
  if (group_.size() != q_.size()) throw DimensionMismatch("ExponentTuple: group list length differs from q");
  if (group_beta_.empty()) throw DomainError("ExponentTuple: no scale given");
  for (double b : group_beta_)
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("ExponentTuple: beta must be positive");
  for (std::size_t j = 0; j < q_.size(); ++j) {
    if (!(q_[j] > 0)) throw DomainError("ExponentTuple: every q_j must be positive");
    if (group_[j] < 0 || static_cast<std::size_t>(group_[j]) >= group_beta_.size())
      throw DomainError("ExponentTuple: group index out of range");
    for (std::size_t i = 0; i < j; ++i)
      if (group_[i] == group_[j] && q_[i] == q_[j]) throw DomainError("ExponentTuple: q_j must be pairwise distinct");
  }
}

double ExponentTuple::log_s(std::size_t j) const { return -to_double(q_.at(j)) * beta_of(j); }

double ExponentTuple::s(std::size_t j) const { return std::exp(log_s(j)); }

ExponentTuple ExponentTuple::subtuple(const std::vector<std::size_t>& indices) const {
  std::vector<Rational> q;
  std::vector<int> g;
  for (std::size_t j : indices) {
    q.push_back(q_.at(j));
    g.push_back(group_.at(j));
  }
  return ExponentTuple(group_beta_, std::move(q), std::move(g));
}

std::vector<std::vector<BigInt>> hermite_normal_form(std::vector<std::vector<BigInt>> rows) {
  if (rows.empty()) return rows;
  const std::size_t cols = rows.front().size();
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < cols && pivot_row < rows.size(); ++c) {
    // Euclid on column c among rows pivot_row..end.
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = pivot_row; i < rows.size(); ++i)
        if (rows[i][c] != 0 &&
            (best == rows.size() || boost::multiprecision::abs(rows[i][c]) < boost::multiprecision::abs(rows[best][c])))
          best = i;
      if (best == rows.size()) break;
      std::swap(rows[pivot_row], rows[best]);
      bool done = true;
      for (std::size_t i = pivot_row + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        const BigInt f = floor_div(rows[i][c], rows[pivot_row][c]);
        for (std::size_t k = c; k < cols; ++k) rows[i][k] -= f * rows[pivot_row][k];
        if (rows[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[pivot_row][c] == 0) continue;
    if (rows[pivot_row][c] < 0)
      for (auto& v : rows[pivot_row]) v = -v;
    for (std::size_t i = 0; i < pivot_row; ++i) {
      const BigInt f = floor_div(rows[i][c], rows[pivot_row][c]);
      if (f != 0)
        for (std::size_t k = c; k < cols; ++k) rows[i][k] -= f * rows[pivot_row][k];
    }
    ++pivot_row;
  }
  rows.resize(pivot_row);
  return rows;
}

RelationLattice relation_lattice(const ExponentTuple& t) {
  const std::size_t n = t.size();
  std::vector<std::vector<BigInt>> rows;
  for (std::size_t g = 0; g < t.group_count(); ++g) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < n; ++j)
      if (t.group(j) == static_cast<int>(g)) idx.push_back(j);
    if (idx.size() < 2) continue;
    BigInt den = 1;
    for (std::size_t j : idx) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(t.q()[j]));
    std::vector<BigInt> a;
    for (std::size_t j : idx) a.push_back(boost::multiprecision::numerator(t.q()[j]) * (den / boost::multiprecision::denominator(t.q()[j])));
    for (const auto& k : integer_kernel(a)) {
      std::vector<BigInt> row(n, 0);
      for (std::size_t i = 0; i < idx.size(); ++i) row[idx[i]] = k[i];
      rows.push_back(std::move(row));
    }
  }
  return {hermite_normal_form(std::move(rows))};
}

const char* to_string(ShapeKind k) noexcept {
  switch (k) {
    case ShapeKind::full_torus: return "full_torus";
    case ShapeKind::periodic_curve: return "periodic_curve";
    case ShapeKind::generic_closure: return "generic_closure";
  }
  return "unknown";
}

JointSpectrumShape classify_joint_spectrum(const ExponentTuple& t) {
  JointSpectrumShape shape;
  shape.lattice_basis = relation_lattice(t).basis;
  shape.lattice_rank = static_cast<int>(shape.lattice_basis.size());
  shape.closure_dimension = static_cast<int>(t.size()) - shape.lattice_rank;

  bool single_group = true;
  for (std::size_t j = 1; j < t.size(); ++j) single_group = single_group && t.group(j) == t.group(0);
  if (single_group) {
    // q_j / q_1 = a_j / b_j in lowest terms; the curve closes after
    // M = lcm(b_j) turns of the first coordinate.
    BigInt m = 1;
    for (std::size_t j = 1; j < t.size(); ++j)
      m = boost::multiprecision::lcm(m, boost::multiprecision::denominator(Rational(t.q()[j] / t.q()[0])));
    shape.kind = ShapeKind::periodic_curve;
    shape.period_multiplier = m;
    shape.period = 2.0 * m.convert_to<double>() * kPi / (to_double(t.q()[0]) * t.beta_of(0));
  } else {
    shape.kind = shape.lattice_rank == 0 ? ShapeKind::full_torus : ShapeKind::generic_closure;
  }
  return shape;
}

double relation_residue(const std::vector<BigInt>& k, const std::vector<double>& theta) {
  if (k.size() != theta.size()) throw DimensionMismatch("relation_residue: arity mismatch");
  // Reduce each term separately so large multipliers do not swamp the sum.
  double sum = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j)
    if (k[j] != 0) sum = wrap_angle(sum + wrap_angle(k[j].convert_to<double>() * wrap_angle(theta[j])));
  return wrap_angle(sum);
}

bool joint_membership(const ExponentTuple& t, const std::vector<double>& theta, double tol) {
  if (theta.size() != t.size()) throw DimensionMismatch("joint_membership: theta arity differs from tuple");
  for (const auto& k : relation_lattice(t).basis)
    if (std::abs(relation_residue(k, theta)) > tol) return false;
  return true;
}

bool joint_point_membership(const ExponentTuple& t, const std::vector<Complex>& point, double tol) {
  if (point.size() != t.size()) throw DimensionMismatch("joint_point_membership: arity mismatch");
  bool all_zero = true;
  for (const Complex& p : point) all_zero = all_zero && std::abs(p) <= tol;
  if (all_zero) return true;
  std::vector<double> theta(point.size());
  for (std::size_t j = 0; j < point.size(); ++j) {
    const double radius = std::exp(-0.5 * t.log_s(j));
    if (std::abs(std::abs(point[j]) - radius) > tol * radius) return false;
    theta[j] = std::arg(point[j]);
  }
  return joint_membership(t, theta, tol);
}

std::vector<CurveSample> sample_curve(const ExponentTuple& t, double y_min, double y_max, int count) {
  if (count < 2) throw DomainError("sample_curve: count must be >= 2");
  if (!(y_max >= y_min)) throw DomainError("sample_curve: y_max < y_min");
  std::vector<CurveSample> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double y = i + 1 == count ? y_max : y_min + (y_max - y_min) * i / (count - 1);
    CurveSample& c = out[static_cast<std::size_t>(i)];
    c.y = y;
    for (std::size_t j = 0; j < t.size(); ++j) {
      const double ls = t.log_s(j);
      c.point.push_back(std::polar(std::exp(-0.5 * ls), ls * y));
    }
  }
  return out;
}

void write_curve_csv(const std::vector<CurveSample>& samples, std::ostream& out) {
  const std::size_t n = samples.empty() ? 0 : samples.front().point.size();
  out << "y";
  for (std::size_t j = 1; j <= n; ++j) out << ",re_" << j << ",im_" << j;
  out << '\n';
  out.precision(17);
  for (const CurveSample& c : samples) {
    out << c.y;
    for (const Complex& p : c.point) out << ',' << p.real() + 0.0 << ',' << p.imag() + 0.0;
    out << '\n';
  }
}

nlohmann::json to_json(const JointSpectrumShape& shape) {
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& row : shape.lattice_basis) {
    nlohmann::json r = nlohmann::json::array();
    for (const BigInt& v : row) r.push_back(v.convert_to<long long>());
    basis.push_back(r);
  }
  nlohmann::json j = {{"kind", to_string(shape.kind)},
                      {"lattice_basis", basis},
                      {"lattice_rank", shape.lattice_rank},
                      {"closure_dimension", shape.closure_dimension}};
  j["period"] = shape.period ? nlohmann::json(*shape.period) : nlohmann::json(nullptr);
  return j;
}

}  // namespace compsemi
