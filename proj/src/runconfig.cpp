#include "mmoc/runconfig.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mmoc/errors.hpp"
#include "mmoc/lq_game.hpp"
#include "mmoc/pmp.hpp"

namespace mmoc {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct PresetRow {
  const char* name;
  double psi, v0, theta0;
  const char* guess;
};

// attitude weight, initial velocity, initial angle, guess generator; all
// other fields take the shared defaults
const PresetRow kPresets[] = {
    {"S7minus", 0.3, 0.3, 0.3, "zero"},
    {"S3", 0.2, 0.1, std::numbers::pi / 2.0, "zero"},
    {"S16", 0.2, -0.1, std::numbers::pi / 2.0, "zero"},
    {"S17", 0.3, -0.1, 4.0 * std::numbers::pi / 3.0, "drift"},
    {"UW4", 0.3, -0.1, 4.0 * std::numbers::pi / 3.0, "zero"},
};

const std::set<std::string>& allowed_keys() {
  static const std::set<std::string> keys = {
      "N",         "s",          "Lambda",       "lambda",   "mu",
      "psi",       "u_c",        "d_c",          "theta0",   "v0",
      "guess",     "max_iters",  "residual_tol", "fd_step",  "armijo_c",
      "min_step",  "output_path", "emit"};
  return keys;
}

double number_or_inf(const json& v, const char* key) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ParseError(std::string("field '") + key +
                     "': expected a number or \"inf\"");
  }
  if (!v.is_number())
    throw ParseError(std::string("field '") + key + "': expected a number");
  return v.get<double>();
}

double plain_number(const json& v, const char* key) {
  if (!v.is_number())
    throw ParseError(std::string("field '") + key + "': expected a number");
  return v.get<double>();
}

int plain_int(const json& v, const char* key) {
  if (!v.is_number_integer())
    throw ParseError(std::string("field '") + key + "': expected an integer");
  return v.get<int>();
}

json inf_aware(double x) {
  if (std::isinf(x)) return json(x > 0 ? "inf" : "-inf");
  return json(x);
}

std::string g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double wrap_2pi(double th) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(th, two_pi);
  if (w < 0.0) w += two_pi;
  return w;
}

void write_csv(const RunConfig& cfg, const TrajectorySolution& sol,
               const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IOFailure("cannot write " + path.string());
  const bool covectors = cfg.emit.count("covectors") > 0;
  const int N = cfg.params.N;
  out << "k,theta,v,u,d,zeta,xi\n";
  for (int k = 0; k <= N; ++k) {
    out << k << ',' << g17(wrap_2pi(sol.theta[k])) << ',' << g17(sol.v[k]);
    if (k < N) {
      out << ',' << g17(sol.u[k]) << ',' << g17(sol.d[k]);
      if (covectors)
        out << ',' << g17(sol.zeta[k]) << ',' << g17(sol.xi[k]);
      else
        out << ",,";
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
  if (!out) throw IOFailure("write failed for " + path.string());
}

}  // namespace

int report_failure(const std::string& category, const std::string& message,
                   int code) {
  json j;
  j["category"] = category;
  j["message"] = message;
  std::cerr << j.dump() << std::endl;
  return code;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const PresetRow& row : kPresets) n.emplace_back(row.name);
    return n;
  }();
  return names;
}

RunConfig preset_config(const std::string& name) {
  for (const PresetRow& row : kPresets) {
    if (name != row.name) continue;
    RunConfig cfg;
    cfg.name = row.name;
    cfg.params.psi = row.psi;
    cfg.params.v0 = row.v0;
    cfg.params.theta0 = row.theta0;
    cfg.guess_kind = row.guess;
    return cfg;
  }
  throw UnknownPreset("unknown preset: " + name);
}

RunConfig load_config(const std::string& path_or_preset) {
  for (const PresetRow& row : kPresets)
    if (path_or_preset == row.name) return preset_config(path_or_preset);

  if (!fs::exists(path_or_preset)) {
    // plain words are treated as preset names, anything path-like as a file
    if (path_or_preset.find('/') == std::string::npos &&
        path_or_preset.find('.') == std::string::npos)
      throw UnknownPreset("unknown preset: " + path_or_preset);
    throw IOFailure("cannot open config file: " + path_or_preset);
  }

  std::ifstream in(path_or_preset);
  if (!in) throw IOFailure("cannot open config file: " + path_or_preset);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  for (const auto& item : j.items())
    if (allowed_keys().count(item.key()) == 0)
      throw UnknownKey("unknown config key: " + item.key());

  RunConfig cfg;
  cfg.name = fs::path(path_or_preset).stem().string();

  if (j.contains("N")) {
    cfg.params.N = plain_int(j["N"], "N");
  }
  if (j.contains("s")) cfg.params.s = plain_number(j["s"], "s");
  if (j.contains("Lambda"))
    cfg.params.Lambda = plain_number(j["Lambda"], "Lambda");
  if (j.contains("lambda"))
    cfg.params.lambda = plain_number(j["lambda"], "lambda");
  if (j.contains("mu")) cfg.params.mu = number_or_inf(j["mu"], "mu");
  if (j.contains("psi")) cfg.params.psi = plain_number(j["psi"], "psi");
  if (j.contains("u_c")) cfg.params.u_c = number_or_inf(j["u_c"], "u_c");
  if (j.contains("d_c")) cfg.params.d_c = number_or_inf(j["d_c"], "d_c");
  if (j.contains("theta0"))
    cfg.params.theta0 = plain_number(j["theta0"], "theta0");
  if (j.contains("v0")) cfg.params.v0 = plain_number(j["v0"], "v0");

  if (j.contains("guess")) {
    const json& g = j["guess"];
    if (g.is_string()) {
      const std::string kind = g.get<std::string>();
      if (kind != "zero" && kind != "drift")
        throw ParseError("field 'guess': expected \"zero\", \"drift\", or "
                         "an array of numbers");
      cfg.guess_kind = kind;
    } else if (g.is_array()) {
      cfg.guess_kind = "explicit";
      for (const json& e : g) {
        if (!e.is_number())
          throw ParseError("field 'guess': array entries must be numbers");
        cfg.guess_values.push_back(e.get<double>());
      }
    } else {
      throw ParseError("field 'guess': expected \"zero\", \"drift\", or an "
                       "array of numbers");
    }
  }

  if (j.contains("max_iters"))
    cfg.solver.max_iters = plain_int(j["max_iters"], "max_iters");
  if (j.contains("residual_tol"))
    cfg.solver.residual_tol = plain_number(j["residual_tol"], "residual_tol");
  if (j.contains("fd_step"))
    cfg.solver.fd_step = plain_number(j["fd_step"], "fd_step");
  if (j.contains("armijo_c"))
    cfg.solver.armijo_c = plain_number(j["armijo_c"], "armijo_c");
  if (j.contains("min_step"))
    cfg.solver.min_step = plain_number(j["min_step"], "min_step");

  if (j.contains("output_path")) {
    if (!j["output_path"].is_string())
      throw ParseError("field 'output_path': expected a string");
    cfg.output_path = j["output_path"].get<std::string>();
  }

  if (j.contains("emit")) {
    if (!j["emit"].is_array())
      throw ParseError("field 'emit': expected an array of strings");
    cfg.emit.clear();
    for (const json& e : j["emit"]) {
      if (!e.is_string())
        throw ParseError("field 'emit': entries must be strings");
      const std::string v = e.get<std::string>();
      if (v != "trajectory" && v != "covectors" && v != "certificates")
        throw ParseError("field 'emit': unknown entry '" + v + "'");
      cfg.emit.insert(v);
    }
  }

  return cfg;
}

void save_config(const RunConfig& cfg, const std::string& path) {
  json j;
  j["N"] = cfg.params.N;
  j["s"] = cfg.params.s;
  j["Lambda"] = cfg.params.Lambda;
  j["lambda"] = cfg.params.lambda;
  j["mu"] = inf_aware(cfg.params.mu);
  j["psi"] = cfg.params.psi;
  j["u_c"] = inf_aware(cfg.params.u_c);
  j["d_c"] = inf_aware(cfg.params.d_c);
  j["theta0"] = cfg.params.theta0;
  j["v0"] = cfg.params.v0;
  if (cfg.guess_kind == "explicit")
    j["guess"] = cfg.guess_values;
  else
    j["guess"] = cfg.guess_kind;
  j["max_iters"] = cfg.solver.max_iters;
  j["residual_tol"] = cfg.solver.residual_tol;
  j["fd_step"] = cfg.solver.fd_step;
  j["armijo_c"] = cfg.solver.armijo_c;
  j["min_step"] = cfg.solver.min_step;
  j["output_path"] = cfg.output_path;
  j["emit"] = json::array();
  for (const std::string& e : cfg.emit) j["emit"].push_back(e);

  std::ofstream out(path);
  if (!out) throw IOFailure("cannot write config file: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IOFailure("write failed for " + path);
}

int run_config(const RunConfig& cfg) {
  try {
    validate(cfg.params);

    std::vector<double> guess;
    if (cfg.guess_kind == "explicit") {
      if (static_cast<int>(cfg.guess_values.size()) != cfg.params.N)
        throw std::invalid_argument("explicit guess must have length N");
      guess = cfg.guess_values;
    } else {
      guess = make_guess(cfg.params, cfg.guess_kind);
    }

    const fs::path dir =
        cfg.output_path.empty() ? fs::path(".") : fs::path(cfg.output_path);
    std::error_code ec;
    fs::create_directories(dir, ec);  // open errors surface below

    json report;
    report["name"] = cfg.name;

    SolveReport srep;
    TrajectorySolution sol;
    try {
      sol = simulate(cfg.params, guess, cfg.solver, &srep);
    } catch (const SolveFailure& e) {
      report["converged"] = false;
      report["termination"] = e.report.termination;
      report["iterations"] = e.report.iterations;
      report["residual_inf"] = e.report.residual_inf_norm;
      report["kink_iterations"] = e.report.kink_iterations;
      try {
        std::ofstream out(dir / (cfg.name + ".report.json"));
        if (out) out << report.dump(2) << '\n';
      } catch (...) {
      }
      return report_failure("SolveFailure", cfg.name + ": " + e.what(),
                          exit_code::kSolveFailure);
    }

    report["converged"] = true;
    report["termination"] = srep.termination;
    report["iterations"] = srep.iterations;
    report["residual_inf"] = sol.residual_inf;
    report["kink_iterations"] = srep.kink_iterations;

    // stage variational verdicts
    const SystemModel model = spacecraft_model(cfg.params);
    const Interval ui{-cfg.params.u_c, cfg.params.u_c};
    const Interval di{-cfg.params.d_c, cfg.params.d_c};
    std::vector<int> variational_failures;
    for (int k = 0; k < cfg.params.N; ++k) {
      const StageTuple t{k,
                         {AlgebraScalar{sol.zeta[k]}, sol.xi[k]},
                         exp_so2(sol.theta[k]),
                         sol.v[k],
                         sol.u[k],
                         sol.d[k]};
      if (!variational_check(model, t, ui, di).pass)
        variational_failures.push_back(k);
    }
    const SubproblemReport sub = subproblem_consistency(model, sol);
    const HessianReport& hess = *sol.saddle;

    if (cfg.emit.count("certificates") > 0) {
      report["variational"] = {
          {"all_pass", variational_failures.empty()},
          {"failing_stages", variational_failures},
      };
      report["saddle"] = {
          {"grad_u_norm", hess.grad_u_norm},
          {"grad_d_norm", hess.grad_d_norm},
          {"min_eig_Huu", hess.min_eig_Huu},
          {"max_eig_Hdd", hess.max_eig_Hdd},
          {"is_saddle_certified", hess.is_saddle_certified},
      };
      report["subproblem"] = {
          {"pass", sub.pass},
          {"max_negation_delta", sub.max_negation_delta},
          {"max_amalgam_delta", sub.max_amalgam_delta},
          {"max_multiplier_zero_abs", sub.max_multiplier_zero_abs},
      };
    }

    if (cfg.params.psi == 0.0 && cfg.params.lambda == 1.0 &&
        std::isinf(cfg.params.u_c) && std::isinf(cfg.params.d_c)) {
      report["lq_oracle_max_delta"] = lq_oracle_delta(cfg.params, sol);
    }

    if (cfg.emit.count("trajectory") > 0)
      write_csv(cfg, sol, dir / (cfg.name + ".csv"));
    {
      std::ofstream out(dir / (cfg.name + ".report.json"));
      if (!out)
        throw IOFailure("cannot write " +
                        (dir / (cfg.name + ".report.json")).string());
      out << report.dump(2) << '\n';
      if (!out)
        throw IOFailure("write failed for " +
                        (dir / (cfg.name + ".report.json")).string());
    }

    const bool certified = hess.is_saddle_certified &&
                           variational_failures.empty() && sub.pass;
    std::ostringstream line;
    line << cfg.name << ": converged in " << srep.iterations
         << " iterations, residual " << g17(sol.residual_inf)
         << ", certificate " << (certified ? "passed" : "FAILED");
    std::cout << line.str() << std::endl;

    if (!certified) {
      std::ostringstream why;
      why << cfg.name << ": converged but certification failed:";
      if (!hess.is_saddle_certified)
        why << " second-order certificate (min_eig_Huu=" << hess.min_eig_Huu
            << ", max_eig_Hdd=" << hess.max_eig_Hdd << ")";
      if (!variational_failures.empty())
        why << " variational inequalities at " << variational_failures.size()
            << " stage(s)";
      if (!sub.pass) why << " subproblem covector consistency";
      return report_failure("CertificateFailure", why.str(),
                          exit_code::kCertificateFailure);
    }
    return exit_code::kSuccess;
  } catch (const IOFailure& e) {
    return report_failure("IOFailure", e.what(), exit_code::kIOFailure);
  } catch (const std::invalid_argument& e) {
    return report_failure("InvalidConfig", e.what(), exit_code::kInvalidConfig);
  } catch (const DomainViolation& e) {
    return report_failure("NumericalFailure", e.what(),
                        exit_code::kNumericalFailure);
  } catch (const ChartViolation& e) {
    return report_failure("NumericalFailure", e.what(),
                        exit_code::kNumericalFailure);
  } catch (const NumericalBreakdown& e) {
    return report_failure("NumericalFailure", e.what(),
                        exit_code::kNumericalFailure);
  } catch (const SingularJacobian& e) {
    return report_failure("NumericalFailure", e.what(),
                        exit_code::kNumericalFailure);
  } catch (const GameIllPosed& e) {
    return report_failure("NumericalFailure", e.what(),
                        exit_code::kNumericalFailure);
  } catch (const std::exception& e) {
    return report_failure("Internal", e.what(), exit_code::kInternal);
  }
}

}  // namespace mmoc
