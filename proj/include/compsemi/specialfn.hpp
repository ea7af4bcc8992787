#pragma once

#include <complex>
#include <stdexcept>

#include "compsemi/errors.hpp"

namespace compsemi {

using Complex = std::complex<double>;

struct QuadratureSpec;
struct VerificationReport;

/// Index of a Newton polynomial; n >= 0 by construction.
class NewtonIndex {
public:
  constexpr explicit NewtonIndex(int n) : n_(n) {
    if (n < 0) throw DomainError("NewtonIndex must be nonnegative");
  }
  constexpr int value() const noexcept { return n_; }

private:
  int n_;
};

/// Principal branch of log Gamma(z) for Re z > 0.
///
/// Stirling series with the recurrence Gamma(z+1) = z Gamma(z) used to push
/// |z| above the asymptotic threshold. The imaginary part is the continuous
/// branch obtained from the positive real axis, not reduced mod 2 pi.
Complex log_gamma(Complex z);

/// |Gamma(x + i y)|^2 evaluated as exp(2 Re log Gamma). Underflows to 0 for
/// very large |y|.
double abs_gamma_sq(double x, double y);

/// N_n(z) = (-1)^n z (z-1) ... (z-n+1) / n!, from the product recurrence
/// N_{n+1}(z) = N_n(z) (n - z) / (n + 1).
Complex newton_poly(NewtonIndex n, Complex z);

/// Closed form [sech(u/2) / 2]^c of the Fourier transform of |Gamma(c/2 + i a)|^2
/// normalised by 2 pi Gamma(c).
double sech_integral_closed_form(double c, double u);

/// Quadrature of (1/2pi) Int |Gamma(c/2 + i a)|^2 e^{-i u a} da / Gamma(c)
/// against the closed form.
VerificationReport verify_sech_integral(double c, double u, const QuadratureSpec& spec);

}  // namespace compsemi
