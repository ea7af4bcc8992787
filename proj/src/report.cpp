#include "compsemi/report.hpp"

#include <sstream>

namespace compsemi {

nlohmann::json to_json(const VerificationReport& r) {
  return nlohmann::json{
      {"identity", r.identity},
      {"params", r.params},
      {"closed_form", {r.closed_form.real(), r.closed_form.imag()}},
      {"numeric", {r.numeric.real(), r.numeric.imag()}},
      {"abs_diff", r.abs_diff},
      {"tail_estimate", r.tail_estimate},
      {"pass", r.pass},
  };
}

VerificationReport report_from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.identity = j.at("identity").get<std::string>();
  r.params = j.at("params");
  r.closed_form = {j.at("closed_form").at(0).get<double>(), j.at("closed_form").at(1).get<double>()};
  r.numeric = {j.at("numeric").at(0).get<double>(), j.at("numeric").at(1).get<double>()};
  r.abs_diff = j.at("abs_diff").get<double>();
  r.tail_estimate = j.at("tail_estimate").get<double>();
  r.pass = j.at("pass").get<bool>();
  return r;
}

namespace {
std::string budget_message(const VerificationReport& r) {
  std::ostringstream os;
  os << "quadrature budget exceeded for " << r.identity << ": tail estimate "
     << r.tail_estimate << " above tolerance";
  return os.str();
}
}  // namespace

QuadratureBudgetExceeded::QuadratureBudgetExceeded(VerificationReport report)
    : std::runtime_error(budget_message(report)), report_(std::move(report)) {}

}  // namespace compsemi
