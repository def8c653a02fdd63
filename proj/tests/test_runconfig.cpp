#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mmoc/runconfig.hpp"

using namespace mmoc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

fs::path fresh_dir(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / "mmoc_runconfig" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

json read_report(const fs::path& path) { return json::parse(slurp(path)); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << text;
}

}  // namespace

TEST_CASE("preset table") {
  const auto& names = preset_names();
  REQUIRE(names ==
          std::vector<std::string>{"S7minus", "S3", "S16", "S17", "UW4"});

  const RunConfig a = preset_config("S7minus");
  CHECK(a.params.psi == 0.3);
  CHECK(a.params.v0 == 0.3);
  CHECK(a.params.theta0 == 0.3);
  CHECK(a.guess_kind == "zero");

  const RunConfig b = preset_config("S3");
  CHECK(b.params.psi == 0.2);
  CHECK(b.params.v0 == 0.1);
  CHECK(b.params.theta0 == kPi / 2.0);

  const RunConfig c = preset_config("S16");
  CHECK(c.params.v0 == -0.1);
  CHECK(c.params.theta0 == kPi / 2.0);

  const RunConfig e = preset_config("S17");
  CHECK(e.guess_kind == "drift");
  CHECK(e.params.theta0 == 4.0 * kPi / 3.0);

  const RunConfig f = preset_config("UW4");
  CHECK(f.guess_kind == "zero");
  CHECK(f.params.theta0 == e.params.theta0);

  for (const auto& n : names) {
    const RunConfig cfg = preset_config(n);
    CHECK(cfg.params.N == 50);
    CHECK(cfg.params.s == 0.1);
    CHECK(cfg.params.Lambda == 0.1);
    CHECK(cfg.params.lambda == 1.0);
    CHECK(cfg.params.mu == 2.0);
    CHECK(cfg.name == n);
  }
}

TEST_CASE("unknown targets") {
  CHECK_THROWS_AS(preset_config("S99"), UnknownPreset);
  CHECK_THROWS_AS(load_config("S99"), UnknownPreset);
  CHECK_THROWS_AS(load_config("no/such/file.json"), IOFailure);
}

TEST_CASE("config files round-trip, with infinities as strings") {
  const fs::path dir = fresh_dir("roundtrip");
  RunConfig cfg;
  cfg.params.N = 7;
  cfg.params.s = 0.05;
  cfg.params.Lambda = 0.2;
  cfg.params.mu = std::numeric_limits<double>::infinity();
  cfg.params.psi = 0.1;
  cfg.params.u_c = std::numeric_limits<double>::infinity();
  cfg.params.d_c = 0.5;
  cfg.params.theta0 = 1.25;
  cfg.params.v0 = -0.4;
  cfg.guess_kind = "explicit";
  cfg.guess_values = {0.1, 0.0, -0.1, 0.0, 0.1, 0.0, -0.1};
  cfg.solver.max_iters = 33;
  cfg.solver.residual_tol = 1e-9;
  cfg.solver.fd_step = 2e-6;
  cfg.solver.armijo_c = 1e-3;
  cfg.solver.min_step = 1e-11;
  cfg.output_path = "outdir";
  cfg.emit = {"trajectory"};

  const fs::path p1 = dir / "case.json";
  save_config(cfg, p1.string());
  CHECK(slurp(p1).find("\"mu\": \"inf\"") != std::string::npos);

  const RunConfig back = load_config(p1.string());
  CHECK(back.name == "case");  // file stem names the run
  CHECK(back.params.N == 7);
  CHECK(back.params.s == 0.05);
  CHECK(back.params.Lambda == 0.2);
  CHECK(back.params.lambda == 1.0);
  CHECK(std::isinf(back.params.mu));
  CHECK(back.params.psi == 0.1);
  CHECK(std::isinf(back.params.u_c));
  CHECK(back.params.d_c == 0.5);
  CHECK(back.params.theta0 == 1.25);
  CHECK(back.params.v0 == -0.4);
  CHECK(back.guess_kind == "explicit");
  CHECK(back.guess_values == cfg.guess_values);
  CHECK(back.solver.max_iters == 33);
  CHECK(back.solver.residual_tol == 1e-9);
  CHECK(back.solver.fd_step == 2e-6);
  CHECK(back.solver.armijo_c == 1e-3);
  CHECK(back.solver.min_step == 1e-11);
  CHECK(back.output_path == "outdir");
  CHECK(back.emit == std::set<std::string>{"trajectory"});

  const fs::path p2 = dir / "case2.json";
  save_config(back, p2.string());
  CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("strict parsing") {
  const fs::path dir = fresh_dir("strict");

  write_text(dir / "typo.json", "{\"N\": 10, \"lamda\": 1.0}");
  CHECK_THROWS_AS(load_config((dir / "typo.json").string()), UnknownKey);

  write_text(dir / "broken.json", "{ nope");
  CHECK_THROWS_AS(load_config((dir / "broken.json").string()), ParseError);

  write_text(dir / "fracn.json", "{\"N\": 10.5}");
  CHECK_THROWS_AS(load_config((dir / "fracn.json").string()), ParseError);

  write_text(dir / "strn.json", "{\"N\": \"ten\"}");
  CHECK_THROWS_AS(load_config((dir / "strn.json").string()), ParseError);

  write_text(dir / "badguess.json", "{\"guess\": 3}");
  CHECK_THROWS_AS(load_config((dir / "badguess.json").string()), ParseError);

  write_text(dir / "bademit.json", "{\"emit\": [\"bogus\"]}");
  CHECK_THROWS_AS(load_config((dir / "bademit.json").string()), ParseError);
}

TEST_CASE("quarter-turn preset end to end") {
  const fs::path dir = fresh_dir("s3_run");
  RunConfig cfg = preset_config("S3");
  cfg.output_path = dir.string();
  REQUIRE(run_config(cfg) == exit_code::kSuccess);

  const std::string csv = slurp(dir / "S3.csv");
  const auto rows = lines_of(csv);
  REQUIRE(rows.size() == 52);
  CHECK(rows[0] == "k,theta,v,u,d,zeta,xi");

  const auto first = fields_of(rows[1]);
  REQUIRE(first.size() == 7);
  CHECK(first[0] == "0");
  CHECK(std::stod(first[1]) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
  CHECK(std::stod(first[2]) == 0.1);

  const auto last = fields_of(rows[51]);
  REQUIRE(last.size() == 7);
  CHECK(last[0] == "50");
  for (int i = 3; i < 7; ++i) CHECK(last[i].empty());

  // re-parse and check the emitted numbers satisfy the dynamics
  std::vector<double> theta, v, u, d;
  for (int k = 1; k <= 51; ++k) {
    const auto f = fields_of(rows[k]);
    theta.push_back(std::stod(f[1]));
    v.push_back(std::stod(f[2]));
    if (k <= 50) {
      u.push_back(std::stod(f[3]));
      d.push_back(std::stod(f[4]));
      CHECK(!f[5].empty());
      CHECK(!f[6].empty());
    }
  }
  for (int k = 0; k < 50; ++k) {
    CHECK(theta[k] >= 0.0);
    CHECK(theta[k] < 2.0 * kPi);
    // the velocity identity holds to the solver tolerance, not to rounding
    CHECK(std::abs(v[k + 1] - v[k] - 0.1 * (u[k] + d[k])) <= 1e-9);
    const double dtheta = theta[k + 1] - theta[k] - std::asin(0.1 * v[k]);
    CHECK(std::abs(std::remainder(dtheta, 2.0 * kPi)) <= 1e-12);
  }

  const json rep = read_report(dir / "S3.report.json");
  CHECK(rep.at("name") == "S3");
  CHECK(rep.at("converged") == true);
  CHECK(rep.at("termination") == "converged");
  CHECK(rep.at("iterations").get<int>() >= 1);
  CHECK(rep.at("residual_inf").get<double>() <= 1e-9);
  CHECK(rep.at("variational").at("all_pass") == true);
  CHECK(rep.at("saddle").at("is_saddle_certified") == true);
  CHECK(rep.at("subproblem").at("pass") == true);
  CHECK(rep.at("subproblem").at("max_negation_delta").get<double>() == 0.0);
  CHECK(!rep.contains("lq_oracle_max_delta"));  // attitude weight active

  // identical rerun, byte for byte
  const fs::path dir2 = fresh_dir("s3_rerun");
  cfg.output_path = dir2.string();
  REQUIRE(run_config(cfg) == exit_code::kSuccess);
  CHECK(slurp(dir2 / "S3.csv") == csv);
  CHECK(slurp(dir2 / "S3.report.json") == slurp(dir / "S3.report.json"));
}

TEST_CASE("failed certificate maps to its own exit code") {
  const fs::path dir = fresh_dir("s7_run");
  RunConfig cfg = preset_config("S7minus");
  cfg.output_path = dir.string();
  CHECK(run_config(cfg) == exit_code::kCertificateFailure);

  const json rep = read_report(dir / "S7minus.report.json");
  CHECK(rep.at("converged") == true);  // the solve itself succeeded
  CHECK(rep.at("saddle").at("is_saddle_certified") == false);
  CHECK(rep.at("saddle").at("max_eig_Hdd").get<double>() > 0.0);
  CHECK(rep.at("variational").at("all_pass") == true);
}

TEST_CASE("pure quadratic runs report the closed-form gap") {
  const fs::path dir = fresh_dir("lq_run");
  RunConfig cfg = preset_config("S3");
  cfg.name = "lqcheck";
  cfg.params.psi = 0.0;
  cfg.output_path = dir.string();
  REQUIRE(run_config(cfg) == exit_code::kSuccess);
  const json rep = read_report(dir / "lqcheck.report.json");
  CHECK(rep.at("lq_oracle_max_delta").get<double>() <= 1e-8);
}

TEST_CASE("emit set controls what is written") {
  const fs::path dir = fresh_dir("emit_nocov");
  RunConfig cfg = preset_config("S3");
  cfg.output_path = dir.string();
  cfg.emit = {"trajectory", "certificates"};
  REQUIRE(run_config(cfg) == exit_code::kSuccess);
  const auto rows = lines_of(slurp(dir / "S3.csv"));
  const auto f = fields_of(rows[1]);
  REQUIRE(f.size() == 7);
  CHECK(!f[3].empty());
  CHECK(!f[4].empty());
  CHECK(f[5].empty());  // covectors withheld
  CHECK(f[6].empty());

  const fs::path dir2 = fresh_dir("emit_report_only");
  cfg.output_path = dir2.string();
  cfg.emit = {"certificates"};
  REQUIRE(run_config(cfg) == exit_code::kSuccess);
  CHECK(!fs::exists(dir2 / "S3.csv"));
  CHECK(fs::exists(dir2 / "S3.report.json"));

  const fs::path dir3 = fresh_dir("emit_bare");
  cfg.output_path = dir3.string();
  cfg.emit = {"trajectory"};
  REQUIRE(run_config(cfg) == exit_code::kSuccess);
  const json rep = read_report(dir3 / "S3.report.json");
  CHECK(!rep.contains("saddle"));
  CHECK(!rep.contains("variational"));
}

TEST_CASE("unwritable output directory maps to the io exit code") {
  const fs::path dir = fresh_dir("blocked");
  write_text(dir / "blocker", "just a file");
  RunConfig cfg = preset_config("S3");
  cfg.output_path = (dir / "blocker" / "x").string();
  CHECK(run_config(cfg) == exit_code::kIOFailure);
}

TEST_CASE("solver failure maps to its own exit code") {
  const fs::path dir = fresh_dir("maxiters");
  RunConfig cfg = preset_config("S3");
  cfg.solver.max_iters = 1;
  cfg.output_path = dir.string();
  CHECK(run_config(cfg) == exit_code::kSolveFailure);
  const json rep = read_report(dir / "S3.report.json");
  CHECK(rep.at("converged") == false);
  CHECK(rep.at("termination") == "max_iters");
}

TEST_CASE("preset outputs match the checked-in goldens byte for byte") {
  const fs::path golden = GOLDEN_DIR;
  for (const std::string& name : preset_names()) {
    const fs::path dir = fresh_dir("golden_" + name);
    RunConfig cfg = preset_config(name);
    cfg.output_path = dir.string();
    const int rc = run_config(cfg);
    if (name == "S7minus") {
      CHECK(rc == exit_code::kCertificateFailure);
    } else {
      CHECK(rc == exit_code::kSuccess);
    }
    CHECK(slurp(dir / (name + ".csv")) == slurp(golden / (name + ".csv")));
    CHECK(slurp(dir / (name + ".report.json")) ==
          slurp(golden / (name + ".report.json")));
  }
}

TEST_CASE("explicit guesses are length checked") {
  const fs::path dir = fresh_dir("explicit");
  RunConfig cfg;
  cfg.name = "tiny";
  cfg.params.N = 5;
  cfg.params.psi = 0.0;
  cfg.params.v0 = 0.1;
  cfg.guess_kind = "explicit";
  cfg.guess_values = {0.0, 0.0, 0.0, 0.0, 0.0};
  cfg.output_path = dir.string();
  CHECK(run_config(cfg) == exit_code::kSuccess);

  cfg.guess_values = {0.0, 0.0, 0.0};
  CHECK(run_config(cfg) == exit_code::kInvalidConfig);
}
