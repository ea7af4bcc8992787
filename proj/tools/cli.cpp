#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "compsemi/apsymbol.hpp"
#include "compsemi/measure.hpp"
#include "compsemi/operators.hpp"
#include "compsemi/spectra.hpp"
#include "compsemi/word_parser.hpp"

namespace compsemi::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  QuadratureSpec spec;
  std::string format = "json";
  std::string out_path;
  std::uint64_t seed = 1;
};

// ---------------------------------------------------------------- parsing

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    if (b == std::string::npos) throw ParseError("empty list entry in '" + text + "'", 0);
    parts.push_back(cur.substr(b, e - b + 1));
  }
  if (parts.empty()) throw ParseError("empty list", 0);
  return parts;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(to_double(parse_rational(p)));
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (const auto& p : split(text, ',')) {
    const Rational q = parse_rational(p);
    if (boost::multiprecision::denominator(q) != 1) throw ParseError("expected an integer: " + p, 0);
    out.push_back(boost::multiprecision::numerator(q).convert_to<int>());
  }
  return out;
}

// "a", "bi", "a+bi", "a-bi" with a, b decimals or p/q.
Complex parse_complex(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw ParseError("empty complex number", 0);
  if (t.back() != 'i') return to_double(parse_rational(t));
  t.pop_back();
  std::size_t split_at = std::string::npos;
  for (std::size_t k = t.size(); k-- > 1;)
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      split_at = k;
      break;
    }
  auto imag_part = [](std::string s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return to_double(parse_rational(s));
  };
  if (split_at == std::string::npos) return {0.0, imag_part(t)};
  return {to_double(parse_rational(t.substr(0, split_at))), imag_part(t.substr(split_at))};
}

std::vector<Complex> parse_complex_list(const std::string& text) {
  std::vector<Complex> out;
  for (const auto& p : split(text, ';')) out.push_back(parse_complex(p));
  return out;
}

// ---------------------------------------------------------------- output

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double v) { return json(v).dump(); }

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path);
  if (!f) throw std::runtime_error("cannot open output file " + cfg.out_path);
  f << text;
}

VerificationReport guarded(const std::function<VerificationReport()>& fn) {
  try {
    return fn();
  } catch (const QuadratureBudgetExceeded& e) {
    return e.report();
  }
}

/// CSV columns: identity, params, closed_form_re, closed_form_im, numeric_re,
/// numeric_im, abs_diff, tail_estimate, pass.
std::string reports_csv(const std::vector<VerificationReport>& reports) {
  std::ostringstream s;
  s << "identity,params,closed_form_re,closed_form_im,numeric_re,numeric_im,abs_diff,tail_estimate,pass\n";
  for (const auto& r : reports)
    s << r.identity << ',' << csv_quote(r.params.dump()) << ',' << num(r.closed_form.real()) << ','
      << num(r.closed_form.imag()) << ',' << num(r.numeric.real()) << ',' << num(r.numeric.imag()) << ','
      << num(r.abs_diff) << ',' << num(r.tail_estimate) << ',' << (r.pass ? "true" : "false") << '\n';
  return s.str();
}

int finish_reports(const std::string& command, const std::vector<VerificationReport>& reports,
                   const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  bool pass = true;
  for (const auto& r : reports) pass = pass && r.pass;
  if (cfg.format == "csv") {
    emit(cfg, reports_csv(reports), out);
  } else {
    json doc = {{"command", command}, {"pass", pass}, {"reports", json::array()}};
    for (const auto& r : reports) doc["reports"].push_back(to_json(r));
    emit(cfg, doc.dump(2) + "\n", out);
  }
  for (const auto& r : reports)
    if (!r.pass)
      err << "FAIL " << r.identity << ' ' << r.params.dump() << " abs_diff=" << r.abs_diff
          << " tail_estimate=" << r.tail_estimate << '\n';
  return pass ? kPass : kVerificationFailure;
}

// ---------------------------------------------------------------- commands

int cmd_verify_measure(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<VerificationReport> reports;
  reports.push_back(guarded([&] { return verify_total_mass(cfg.spec); }));
  for (int n = -1; n <= 12; ++n) reports.push_back(guarded([&] { return verify_line_mass(n, cfg.spec); }));
  for (int k = 1; k <= 10; ++k)
    reports.push_back(guarded([&] { return verify_exponential_mass(k / 10.0, cfg.spec); }));
  return finish_reports("verify-measure", reports, cfg, out, err);
}

struct Lemma31Options {
  std::string s = "1/4,1/2,3/4";
  std::string t = "1/4,1/2,3/4";
  std::string w = "0;1/2;1+1i;-0.3+2i";
  double quad_tol = 1e-6;
  double boundary_tol = 1e-4;
  double matrix_tol = 1e-5;
  int matrix_n = 400;
};

int cmd_verify_lemma31(const RunConfig& cfg, const Lemma31Options& o, std::ostream& out, std::ostream& err) {
  const auto s_grid = parse_reals(o.s);
  const auto t_grid = parse_reals(o.t);
  const auto w_grid = parse_complex_list(o.w);
  for (double v : s_grid)
    if (!(v > 0.0 && v < 1.0)) throw DomainError("verify-lemma31: s values must lie in (0, 1)");
  for (double v : t_grid)
    if (!(v > 0.0 && v < 1.0)) throw DomainError("verify-lemma31: t values must lie in (0, 1)");
  for (Complex w : w_grid)
    if (!(w.real() > -0.5)) throw DomainError("verify-lemma31: w values need Re w > -1/2");
  if (o.matrix_n < 1) throw DomainError("verify-lemma31: --matrix-n must be >= 1");

  std::vector<VerificationReport> reports;
  for (double s : s_grid)
    for (double t : t_grid)
      for (Complex w : w_grid) {
        QuadratureSpec spec = cfg.spec;
        // Kernels with Re w < 0 decay slowly towards the boundary line.
        spec.tolerance = w.real() < 0.0 ? o.boundary_tol : o.quad_tol;
        reports.push_back(guarded([&] { return verify_lemma31(s, t, w, spec); }));
        if (w.real() < 0.0) continue;
        const Complex closed = ip_lemma31(s, t, w);
        const Complex matrix = matrix_lemma31(s, t, w, o.matrix_n);
        const KernelVector kv = kernel_vector(w, o.matrix_n);
        VerificationReport r;
        r.identity = "lemma31_matrix_form";
        r.params = {{"s", s}, {"t", t}, {"w", {w.real(), w.imag()}}, {"N", o.matrix_n}, {"tolerance", o.matrix_tol}};
        r.closed_form = closed;
        r.numeric = matrix;
        r.abs_diff = std::abs(matrix - closed);
        r.tail_estimate = kv.tail_mass / kv.norm_sq_exact;
        r.pass = r.abs_diff <= o.matrix_tol;
        reports.push_back(r);
      }
  return finish_reports("verify-lemma31", reports, cfg, out, err);
}

struct SpectrumOptions {
  double s = 0.25;
  double y = 0.0;
  std::string ell = "1,2,5,10,20,50,100,200";
  int N = 400;
};

int cmd_spectrum(const RunConfig& cfg, const SpectrumOptions& o, std::ostream& out, std::ostream& err) {
  const SingleSpectrum sp = single_spectrum(o.s);
  const auto ells = parse_ints(o.ell);
  const auto rows = residual_sequence(o.s, o.y, ells, o.N);
  const Complex lambda = std::exp(Complex(-0.5, o.y) * std::log(o.s));
  bool pass = true;
  json jrows = json::array();
  std::ostringstream csv;
  csv << "# radius=" << num(sp.radius) << " includes_zero=true lambda=" << num(lambda.real()) << ','
      << num(lambda.imag()) << '\n';
  csv << "s,y,ell,N,numeric,analytic,tail_bound,tail_mass,warning\n";
  for (const auto& r : rows) {
    const double diff = std::abs(r.analytic * r.analytic - r.numeric * r.numeric);
    const bool consistent = diff <= r.tail;
    const bool warning = r.tail_mass > cfg.spec.tolerance;
    pass = pass && consistent;
    jrows.push_back({{"ell", r.ell},
                     {"numeric", r.numeric},
                     {"analytic", r.analytic},
                     {"analytic_sq", r.analytic * r.analytic},
                     {"tail_bound", r.tail},
                     {"tail_mass", r.tail_mass},
                     {"consistent", consistent},
                     {"warning", warning}});
    csv << num(o.s) << ',' << num(o.y) << ',' << r.ell << ',' << o.N << ',' << num(r.numeric) << ','
        << num(r.analytic) << ',' << num(r.tail) << ',' << num(r.tail_mass) << ',' << (warning ? "tail" : "")
        << '\n';
    if (!consistent) err << "FAIL residual ell=" << r.ell << " |analytic^2 - numeric^2|=" << diff << '\n';
  }
  json bounds = json::array();
  for (int m = 0; m <= 4; ++m) bounds.push_back({{"m", m}, {"bound", exclusion_bound(o.s, m)}});
  if (cfg.format == "csv") {
    emit(cfg, csv.str(), out);
  } else {
    json doc = {{"command", "spectrum"},
                {"s", o.s},
                {"radius", sp.radius},
                {"includes_zero", sp.includes_zero},
                {"y", o.y},
                {"N", o.N},
                {"lambda", {lambda.real() + 0.0, lambda.imag() + 0.0}},
                {"residuals", jrows},
                {"exclusion_bounds", bounds},
                {"pass", pass}};
    emit(cfg, doc.dump(2) + "\n", out);
  }
  return pass ? kPass : kVerificationFailure;
}

struct JointOptions {
  std::string q;
  std::string beta = "1";
  std::string group;
  int samples = 9;
  double y_min = 0.0;
  std::optional<double> y_max;
  std::string points_file;
  double membership_tol = 1e-9;
};

int cmd_joint(const RunConfig& cfg, const JointOptions& o, std::ostream& out) {
  std::vector<Rational> q;
  for (const auto& p : split(o.q, ',')) q.push_back(parse_rational(p));
  const auto betas = parse_reals(o.beta);
  std::vector<int> group;
  if (!o.group.empty()) group = parse_ints(o.group);
  const ExponentTuple t(betas, q, group);
  const JointSpectrumShape shape = classify_joint_spectrum(t);
  const double y_max = o.y_max.value_or(shape.period.value_or(2.0 * std::numbers::pi));
  const auto curve = sample_curve(t, o.y_min, y_max, o.samples);

  std::vector<std::pair<std::vector<double>, bool>> membership;
  if (!o.points_file.empty()) {
    std::ifstream in(o.points_file);
    if (!in) throw DomainError("cannot read points file " + o.points_file);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto theta = parse_reals(line);
      membership.emplace_back(theta, joint_membership(t, theta, o.membership_tol));
    }
  }

  if (cfg.format == "csv") {
    std::ostringstream s;
    if (!o.points_file.empty()) {
      s << "index,member\n";
      for (std::size_t i = 0; i < membership.size(); ++i)
        s << i << ',' << (membership[i].second ? "true" : "false") << '\n';
    } else {
      write_curve_csv(curve, s);
    }
    emit(cfg, s.str(), out);
    return kPass;
  }
  json doc = to_json(shape);
  doc["command"] = "joint";
  json jq = json::array();
  for (const auto& v : q) jq.push_back(format_rational(v));
  doc["q"] = jq;
  doc["beta"] = betas;
  json jc = json::array();
  for (const auto& c : curve) {
    json pts = json::array();
    for (const auto& p : c.point) pts.push_back({p.real() + 0.0, p.imag() + 0.0});
    jc.push_back({{"y", c.y}, {"point", pts}});
  }
  doc["samples"] = jc;
  json jm = json::array();
  for (const auto& [theta, member] : membership) jm.push_back({{"theta", theta}, {"member", member}});
  doc["membership"] = jm;
  emit(cfg, doc.dump(2) + "\n", out);
  return kPass;
}

struct SymbolOptions {
  std::string expression;
  bool inclusion = false;
  std::string N = "100,400";
  std::string y = "0,1";
  std::string ell = "1,10,100";
};

int cmd_symbol(const RunConfig& cfg, const SymbolOptions& o, std::ostream& out) {
  const Combination a = parse_combination(o.expression);
  if (cfg.format == "csv") {
    const SymbolPair p = symbol_of_combination(a);
    std::ostringstream s;
    s << "freq,re,im\n";
    for (const auto& t : p.ap_part.terms())
      s << num(t.frequency) << ',' << num(t.coefficient.real()) << ',' << num(t.coefficient.imag()) << '\n';
    emit(cfg, s.str(), out);
    return kPass;
  }
  json doc;
  if (o.inclusion) {
    const auto rep = spectrum_inclusion_report(a, parse_ints(o.N), parse_reals(o.y), parse_ints(o.ell));
    doc = to_json(rep);
  } else {
    const SymbolPair p = symbol_of_combination(a);
    doc = to_json(p);
    doc["word"] = a.to_string();
  }
  doc["command"] = "symbol";
  emit(cfg, doc.dump(2) + "\n", out);
  return kPass;
}

ExponentialCoefficients random_coefficients(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> base(0.05, 1.0);
  std::normal_distribution<double> coeff;
  std::vector<ExponentialCoefficients::Term> terms;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) terms.push_back({base(rng), {coeff(rng), coeff(rng)}});
  return ExponentialCoefficients(std::move(terms));
}

int cmd_verify(const RunConfig& cfg, const std::string& identity, int count, std::ostream& out,
               std::ostream& err) {
  std::vector<VerificationReport> reports;
  const QuadratureSpec& spec = cfg.spec;
  std::mt19937_64 rng(cfg.seed);
  const double ln2 = std::numbers::ln2;
  if (identity == "sech") {
    for (double c : {1.0, 2.0, 3.0, 5.0})
      for (double u : {0.0, ln2, 2.0 * ln2}) reports.push_back(guarded([&] { return verify_sech_integral(c, u, spec); }));
  } else if (identity == "mean") {
    QuadratureSpec s6 = spec;
    s6.tolerance = std::max(spec.tolerance, 1e-6);
    for (double a : {0.25, 0.5, 0.75})
      for (double b : {0.25, 0.5, 0.75, 1.0}) reports.push_back(guarded([&] { return verify_mean_identity(a, b, s6); }));
  } else if (identity == "three-lines") {
    for (double a : {0.3, 0.5, 0.9}) {
      reports.push_back(guarded([&] { return verify_three_lines(a, -0.5, 0.0, 0.5, spec); }));
      reports.push_back(guarded([&] { return verify_three_lines(a, 0.0, 1.0, 2.0, spec); }));
    }
  } else if (identity == "norm-bound") {
    for (int i = 0; i < count; ++i) {
      const auto f = random_coefficients(rng);
      for (int m = 0; m <= 2; ++m) reports.push_back(guarded([&] { return verify_norm_bound(f, m, spec); }));
    }
  } else if (identity == "adjoint-eigen") {
    for (double s : {0.25, 0.5})
      for (Complex w : {Complex(0.0), Complex(1.0), Complex(0.3, 2.0)})
        for (int N : {2, 10, 200}) reports.push_back(verify_adjoint_eigen(s, w, N));
  } else if (identity == "exclusion") {
    for (int i = 0; i < count; ++i) {
      const auto f = random_coefficients(rng);
      for (double s : {0.25, 0.5})
        for (int m = 0; m <= 2; ++m)
          for (double y0 : {0.0, 1.0})
            reports.push_back(guarded([&] { return verify_exclusion_bound(f, s, m, y0, spec); }));
    }
  } else {
    throw DomainError("unknown identity '" + identity + "'");
  }
  return finish_reports("verify", reports, cfg, out, err);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for composition-operator semigroups on the Hardy space"};
  app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--max-line", cfg.spec.max_line, "Largest line index n kept in the mu quadrature")
      ->capture_default_str();
  app.add_option("--y-cutoff", cfg.spec.y_cutoff, "Half-width of each line integral")->capture_default_str();
  app.add_option("--nodes-per-unit", cfg.spec.nodes_per_unit, "Gauss-Legendre panels per unit length")
      ->capture_default_str();
  app.add_option("--tol", cfg.spec.tolerance, "Target absolute error")->capture_default_str();
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", cfg.out_path, "Write output here instead of stdout");
  app.add_option("--threads", cfg.spec.threads, "Worker threads for per-line integrals")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for random sample grids")->capture_default_str();

  auto* measure = app.add_subcommand("verify-measure", "Total mass, line masses and Int c^z dmu = 1");

  Lemma31Options l31;
  auto* lemma31 = app.add_subcommand("verify-lemma31", "Closed form, quadrature and matrix form of <T_t* T_s k_w, k_w>");
  lemma31->add_option("--s", l31.s, "Comma-separated s values")->capture_default_str();
  lemma31->add_option("--t", l31.t, "Comma-separated t values")->capture_default_str();
  lemma31->add_option("--w", l31.w, "Semicolon-separated complex w values, e.g. 1+1i")->capture_default_str();
  lemma31->add_option("--quad-tol", l31.quad_tol, "Quadrature tolerance for Re w >= 0")->capture_default_str();
  lemma31->add_option("--boundary-tol", l31.boundary_tol, "Quadrature tolerance for Re w < 0")->capture_default_str();
  lemma31->add_option("--matrix-tol", l31.matrix_tol, "Tolerance of the matrix form")->capture_default_str();
  lemma31->add_option("--matrix-n", l31.matrix_n, "Truncation size of the matrix form")->capture_default_str();

  SpectrumOptions so;
  auto* spectrum = app.add_subcommand("spectrum", "Circle radius, residual table and exclusion bounds for one s");
  spectrum->add_option("--s", so.s, "Parameter s in (0, 1)")->capture_default_str();
  spectrum->add_option("--y", so.y, "Curve parameter: lambda = s^{-1/2 + i y}")->capture_default_str();
  spectrum->add_option("--ell", so.ell, "Comma-separated ell values")->capture_default_str();
  spectrum->add_option("--N", so.N, "Truncation size")->capture_default_str();

  JointOptions jo;
  auto* joint = app.add_subcommand("joint", "Relation lattice, shape and membership for s_j = exp(-q_j beta)");
  joint->add_option("--q", jo.q, "Comma-separated positive rationals q_j")->required();
  joint->add_option("--beta", jo.beta, "Scale, or one scale per independent group")->capture_default_str();
  joint->add_option("--group", jo.group, "Group index of each q_j (independent scales)");
  joint->add_option("--samples", jo.samples, "Number of curve samples")->capture_default_str();
  joint->add_option("--y-min", jo.y_min, "First curve parameter")->capture_default_str();
  joint->add_option("--y-max", jo.y_max, "Last curve parameter (default: one period)");
  joint->add_option("--points", jo.points_file, "File with one comma-separated theta tuple per line");
  joint->add_option("--membership-tol", jo.membership_tol, "Tolerance on relation residues")->capture_default_str();

  SymbolOptions sy;
  auto* symbol = app.add_subcommand("symbol", "Symbol of a combination such as \"1*I + 2*C(0.25)C*(1/2)\"");
  symbol->add_option("expression", sy.expression, "Combination text")->required();
  symbol->add_flag("--inclusion", sy.inclusion, "Add the spectrum inclusion residual report");
  symbol->add_option("--N", sy.N, "Truncation sizes")->capture_default_str();
  symbol->add_option("--y", sy.y, "Curve parameters")->capture_default_str();
  symbol->add_option("--ell", sy.ell, "Kernel indices ell")->capture_default_str();

  std::string identity;
  int count = 20;
  auto* verify = app.add_subcommand("verify", "Default grids for the remaining identities");
  verify->add_option("--identity", identity, "Identity to check")
      ->required()
      ->check(CLI::IsMember({"sech", "mean", "three-lines", "norm-bound", "adjoint-eigen", "exclusion"}));
  verify->add_option("--count", count, "Random functions for norm-bound and exclusion")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    validate(cfg.spec);
    if (*measure) return cmd_verify_measure(cfg, out, err);
    if (*lemma31) return cmd_verify_lemma31(cfg, l31, out, err);
    if (*spectrum) return cmd_spectrum(cfg, so, out, err);
    if (*joint) return cmd_joint(cfg, jo, out);
    if (*symbol) return cmd_symbol(cfg, sy, out);
    if (*verify) return cmd_verify(cfg, identity, count, out, err);
  } catch (const ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DimensionMismatch& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace compsemi::cli
