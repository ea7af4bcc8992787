#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "compsemi/parallel.hpp"
#include "compsemi/report.hpp"
#include "compsemi/specialfn.hpp"

namespace compsemi {

/// Discretisation of the gamma-weighted measure mu on the half-plane
/// Re z >= -1/2:
///
///   dmu = sum_{n >= -1} |Gamma(n/2 + i y + 1)|^2 / (2 pi (n+1)!) dy  on Re z = n/2.
///
/// Lines n = -1..max_line are kept, each integrated over [-y_cutoff, y_cutoff]
/// with nodes_per_unit Gauss-Legendre panels per unit length (kPanelOrder
/// points each).
struct QuadratureSpec {
  int max_line = 40;
  double y_cutoff = 40.0;
  int nodes_per_unit = 8;
  double tolerance = 1e-8;
  int threads = 1;

  bool operator==(const QuadratureSpec&) const = default;
};

void validate(const QuadratureSpec& spec);

/// A point n/2 + i y on one of the support lines of mu.
struct HalfPlanePoint {
  int line_index = -1;
  double y = 0.0;

  double re() const noexcept { return 0.5 * line_index; }
  Complex z() const noexcept { return {re(), y}; }
};

/// f(z) = sum_j c_j a_j^z with every a_j in (0, 1].
class ExponentialCoefficients {
public:
  struct Term {
    double base;
    Complex coeff;
  };

  explicit ExponentialCoefficients(std::vector<Term> terms);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  Complex operator()(Complex z) const;

  /// ||f||^2 in H^2(mu) from <a^z, b^z> = 1 / (a + b - ab).
  double norm_sq_exact() const;

private:
  std::vector<Term> terms_;
};

/// |Gamma(n/2 + 1 + i y)|^2 / (2 pi (n+1)!).
double line_weight(int n, double y);

/// Precomputed nodes of mu for one QuadratureSpec.
struct MuLine {
  int index;
  std::vector<double> y;
  std::vector<double> weight;  ///< Gauss weight times line_weight
};

struct MuGrid {
  QuadratureSpec spec;
  std::vector<MuLine> lines;  ///< lines n = -1..max_line in order
};

/// Cached grid for spec (thread-safe).
const MuGrid& mu_grid(const QuadratureSpec& spec);

/// Result of integrating against mu with the per-line breakdown.
struct MuIntegral {
  Complex value;
  double tail_estimate = 0.0;
  std::vector<Complex> per_line;      ///< index k <-> line n = k - 1
  std::vector<double> per_line_abs;   ///< Int |f| dmu on each line
};

using MuIntegrand = std::function<Complex(const HalfPlanePoint&)>;

/// Sum over lines of Int f(n/2 + i y) line_weight(n, y) dy. Per-line sums are
/// computed independently (optionally in parallel) and reduced in line
/// order. The tail estimate covers both the y cutoff and the dropped lines.
MuIntegral integrate_mu_detailed(const MuIntegrand& f, const QuadratureSpec& spec);

Complex integrate_mu(const MuIntegrand& f, const QuadratureSpec& spec);

/// Int line_weight(n, y) dy over [-y_cutoff, y_cutoff].
double line_mass(int n, const QuadratureSpec& spec);

/// <a^z, b^z>_{H^2(mu)} = 1 / (a + b - ab).
double ip_exponentials(double a, double b);

/// <T_{t^z}^* T_{s^z} k_w, k_w> = s^w t^{conj w} / (s + t - st)^{2 Re w + 1}.
Complex ip_lemma31(double s, double t, Complex w);

/// ||K_w||^2 = Gamma(2 Re w + 1) / |Gamma(conj w + 1)|^2.
double kernel_norm_sq(Complex w);

/// Closed form of Int_0^1 <(sa)^z, b^z> ds = ln((a + b - ab)/b) / (a (1 - b)),
/// equal to 1/b in the limit b -> 1.
double mean_identity_closed_form(double a, double b);

VerificationReport verify_lemma31(double s, double t, Complex w, const QuadratureSpec& spec);
VerificationReport verify_mean_identity(double a, double b, const QuadratureSpec& spec);
VerificationReport verify_three_lines(double a, double alpha, double beta, double gamma,
                                      const QuadratureSpec& spec);
VerificationReport verify_norm_bound(const ExponentialCoefficients& f, int m,
                                     const QuadratureSpec& spec);

/// Int 1 dmu against 1.
VerificationReport verify_total_mass(const QuadratureSpec& spec);
/// line_mass(n) against 2^{-(n+2)}.
VerificationReport verify_line_mass(int n, const QuadratureSpec& spec);
/// Int c^z dmu against 1.
VerificationReport verify_exponential_mass(double c, const QuadratureSpec& spec);

/// Squared L^2(R) norm of F(x + i y) = Gamma(x + 1 + i y) a^{x + i y} on one line.
double three_lines_norm_sq(double a, double x, const QuadratureSpec& spec);

}  // namespace compsemi
