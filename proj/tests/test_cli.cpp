#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "compsemi");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = compsemi::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("compsemi_test_" + name);
  std::ofstream(path) << contents;
  return path;
}

}  // namespace

TEST_CASE("verify-measure passes with defaults") {
  const Result r = run({"verify-measure"});
  CHECK(r.code == compsemi::cli::kPass);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "verify-measure");
  CHECK(j["pass"] == true);
  // total mass, 14 line masses, 10 exponentials
  CHECK(j["reports"].size() == 25);
}

TEST_CASE("a starved quadrature budget fails with diagnostics") {
  const Result r = run({"--y-cutoff", "2", "verify-measure"});
  CHECK(r.code == compsemi::cli::kVerificationFailure);
  CHECK(r.err.find("FAIL") != std::string::npos);
  CHECK(nlohmann::json::parse(r.out)["pass"] == false);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == compsemi::cli::kUsageError);
  CHECK(run({"no-such-command"}).code == compsemi::cli::kUsageError);
  CHECK(run({"--format", "xml", "verify-measure"}).code == compsemi::cli::kUsageError);
  CHECK(run({"--nodes-per-unit", "1", "verify-measure"}).code == compsemi::cli::kUsageError);
  CHECK(run({"verify-lemma31", "--s", "0.25,abc"}).code == compsemi::cli::kUsageError);
  CHECK(run({"verify-lemma31", "--w", "1+"}).code == compsemi::cli::kUsageError);
  CHECK(run({"spectrum", "--s", "1.5"}).code == compsemi::cli::kUsageError);
  CHECK(run({"joint"}).code == compsemi::cli::kUsageError);
  CHECK(run({"verify", "--identity", "nonsense"}).code == compsemi::cli::kUsageError);

  const Result bad = run({"symbol", "C(0.25"});
  CHECK(bad.code == compsemi::cli::kUsageError);
  CHECK(bad.err.find("position 6") != std::string::npos);
}

TEST_CASE("config file values are overridden by flags") {
  const auto starved = temp_file("starved.ini", "y-cutoff=2\nmax-line=40\n");
  CHECK(run({"--config", starved.string(), "verify-measure"}).code == compsemi::cli::kVerificationFailure);
  CHECK(run({"--config", starved.string(), "--y-cutoff", "40", "verify-measure"}).code == compsemi::cli::kPass);
  CHECK(run({"--y-cutoff", "40", "--config", starved.string(), "verify-measure"}).code == compsemi::cli::kPass);
  std::filesystem::remove(starved);

  CHECK(run({"--config", "/nonexistent/compsemi.ini", "verify-measure"}).code == compsemi::cli::kUsageError);
}

TEST_CASE("output file and CSV format") {
  const auto path = std::filesystem::temp_directory_path() / "compsemi_test_out.csv";
  const Result r = run({"--format", "csv", "--out", path.string(), "verify-measure"});
  CHECK(r.code == compsemi::cli::kPass);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "identity,params,closed_form_re,closed_form_im,numeric_re,numeric_im,abs_diff,tail_estimate,pass");
  std::filesystem::remove(path);
}

TEST_CASE("spectrum output") {
  const Result r = run({"spectrum", "--s", "0.25", "--N", "300", "--ell", "1,2,5,10"});
  CHECK(r.code == compsemi::cli::kPass);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["radius"].get<double>() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(j["residuals"].size() == 4);
  CHECK(j["exclusion_bounds"].size() == 5);
  double previous = 1e300;
  for (const auto& row : j["residuals"]) {
    CHECK(row["analytic"].get<double>() < previous);
    previous = row["analytic"].get<double>();
  }

  const Result csv = run({"--format", "csv", "spectrum", "--s", "0.25", "--N", "20", "--ell", "1,50"});
  CHECK(csv.out.rfind("# radius=2", 0) == 0);
  CHECK(csv.out.find("s,y,ell,N,numeric,analytic,tail_bound,tail_mass,warning") != std::string::npos);
  // ell = 50 needs far more than 20 coordinates.
  CHECK(csv.out.find(",tail\n") != std::string::npos);
}

TEST_CASE("joint output") {
  const Result r = run({"joint", "--q", "1,3/2", "--beta", "1"});
  CHECK(r.code == compsemi::cli::kPass);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["kind"] == "periodic_curve");
  CHECK(j["lattice_basis"] == nlohmann::json::parse("[[3,-2]]"));
  CHECK(j["period"].get<double>() == doctest::Approx(4 * 3.141592653589793).epsilon(1e-15));

  const Result one = run({"joint", "--q", "1"});
  CHECK(nlohmann::json::parse(one.out)["period"].get<double>() ==
        doctest::Approx(2 * 3.141592653589793).epsilon(1e-15));

  const auto points = temp_file("points.txt", "0,3.141592653589793\n0,1.5707963267948966\n");
  const Result m = run({"--format", "csv", "joint", "--q", "1,3/2", "--points", points.string()});
  std::filesystem::remove(points);
  CHECK(m.out.find("true") != std::string::npos);
  CHECK(m.out.find("false") != std::string::npos);
}

TEST_CASE("symbol output") {
  const auto i = nlohmann::json::parse(run({"symbol", "I"}).out);
  CHECK(i["symbol"] == nlohmann::json::parse(R"([{"freq":0.0,"re":1.0,"im":0.0}])"));
  CHECK(i["point"] == nlohmann::json::parse("[1.0,0.0]"));

  const auto c = nlohmann::json::parse(run({"symbol", "C(0.25)C*(0.25)"}).out);
  CHECK(c["symbol"] == nlohmann::json::parse(R"([{"freq":0.0,"re":4.0,"im":0.0}])"));
  CHECK(c["point"] == nlohmann::json::parse("[0.0,0.0]"));

  const Result inc = run({"symbol", "C*(0.25)", "--inclusion", "--N", "100", "--y", "0", "--ell", "1,10"});
  CHECK(inc.code == compsemi::cli::kPass);
  CHECK(nlohmann::json::parse(inc.out).contains("samples"));
}

TEST_CASE("verify subcommand") {
  const Result r = run({"verify", "--identity", "sech"});
  CHECK(r.code == compsemi::cli::kPass);
  CHECK(nlohmann::json::parse(r.out)["reports"].size() == 12);
}

TEST_CASE("runs are deterministic for a fixed seed and thread count") {
  const Result a = run({"--seed", "9", "--threads", "2", "verify", "--identity", "norm-bound", "--count", "3"});
  const Result b = run({"--seed", "9", "--threads", "2", "verify", "--identity", "norm-bound", "--count", "3"});
  CHECK(a.code == compsemi::cli::kPass);
  CHECK(a.out == b.out);
  const Result c = run({"--seed", "9", "--threads", "1", "verify", "--identity", "norm-bound", "--count", "3"});
  CHECK(c.out == a.out);
}
