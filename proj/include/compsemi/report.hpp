#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace compsemi {

/// Outcome of comparing a closed-form value with a numerical one.
///
/// Serialises to
/// {identity, params, closed_form: [re,im], numeric: [re,im], abs_diff,
///  tail_estimate, pass}.
struct VerificationReport {
  std::string identity;
  nlohmann::json params = nlohmann::json::object();
  std::complex<double> closed_form{};
  std::complex<double> numeric{};
  double abs_diff = 0.0;
  double tail_estimate = 0.0;
  bool pass = false;
};

nlohmann::json to_json(const VerificationReport& r);
VerificationReport report_from_json(const nlohmann::json& j);

/// Thrown when the truncation tail alone exceeds the requested tolerance, so
/// the comparison cannot be decided under the given quadrature budget. The
/// partially filled report (pass == false) is attached.
class QuadratureBudgetExceeded : public std::runtime_error {
public:
  explicit QuadratureBudgetExceeded(VerificationReport report);
  const VerificationReport& report() const noexcept { return report_; }

private:
  VerificationReport report_;
};

}  // namespace compsemi
