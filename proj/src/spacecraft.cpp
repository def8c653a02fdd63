#include "mmoc/spacecraft.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "mmoc/errors.hpp"

namespace mmoc {

namespace {

void check_chart_domain(const ProblemParams& p, const std::vector<double>& v) {
  for (std::size_t k = 0; k < v.size(); ++k)
    if (std::abs(p.s * v[k]) >= 1.0)
      throw DomainViolation("velocity leaves the kinematic chart (|s*v| >= 1)",
                            static_cast<int>(k));
}

std::vector<double> full_velocity(const ProblemParams& p,
                                  const std::vector<double>& interior) {
  std::vector<double> v;
  v.reserve(interior.size() + 1);
  v.push_back(p.v0);
  v.insert(v.end(), interior.begin(), interior.end());
  return v;
}

std::vector<double> zeta_closed_form(const ProblemParams& p,
                                     const std::vector<double>& theta) {
  const int N = static_cast<int>(theta.size()) - 1;
  const double psi2 = p.psi * p.psi;
  std::vector<double> zeta(N, 0.0);
  double acc = 0.0;
  for (int i = N; i >= 1; --i) {
    acc += std::sin(theta[i]);
    zeta[i - 1] = -psi2 * acc;
  }
  return zeta;
}

// clamp saturation state of every stage input: -1, 0, +1 per input
std::vector<int> clamp_states(const ProblemParams& p,
                              const std::vector<double>& interior) {
  const std::vector<double> v = full_velocity(p, interior);
  check_chart_domain(p, v);
  const std::vector<double> theta = roll_angles(p, v);
  const auto [zeta, xi] = closed_form_adjoints(p, theta, v);
  std::vector<int> states(2 * p.N, 0);
  for (int k = 0; k < p.N; ++k) {
    const double raw_u = p.s * xi[k] / (p.lambda * p.lambda);
    const double raw_d = -p.s * xi[k] / (p.mu * p.mu);
    states[2 * k] = (raw_u > p.u_c) ? 1 : (raw_u < -p.u_c ? -1 : 0);
    states[2 * k + 1] = (raw_d > p.d_c) ? 1 : (raw_d < -p.d_c ? -1 : 0);
  }
  return states;
}

}  // namespace

void validate(const ProblemParams& p) {
  if (p.N < 1) throw std::invalid_argument("horizon N must be at least 1");
  if (!(p.s > 0.0)) throw std::invalid_argument("step s must be positive");
  if (!(p.Lambda >= 0.0) || !(p.lambda >= 0.0) || !(p.mu >= 0.0))
    throw std::invalid_argument("weights must be nonnegative");
  if (!(p.u_c > 0.0) || !(p.d_c > 0.0))
    throw std::invalid_argument("input bounds must be positive (inf allowed)");
  if (std::isinf(p.u_c) && p.lambda == 0.0)
    throw std::invalid_argument("unbounded control needs lambda > 0");
  if (std::isinf(p.d_c) && p.mu == 0.0)
    throw std::invalid_argument("unbounded disturbance needs mu > 0");
  if (!std::isfinite(p.theta0) || !std::isfinite(p.v0))
    throw std::invalid_argument("initial conditions must be finite");
}

Rotation2 kinematics_factor(double v, double s) {
  const double x = s * v;
  if (x * x >= 1.0)
    throw DomainViolation("kinematic factor needs |s*v| < 1");
  const double c = std::sqrt(1.0 - x * x);
  return Rotation2::from_matrix(c, -x, x, c);
}

std::vector<double> roll_angles(const ProblemParams& p,
                                const std::vector<double>& v) {
  const std::size_t N = v.size() - 1;
  std::vector<double> theta(N + 1);
  theta[0] = p.theta0;
  for (std::size_t k = 0; k < N; ++k)
    theta[k + 1] = theta[k] + std::asin(p.s * v[k]);
  return theta;
}

std::vector<double> xi_explicit_sum(const ProblemParams& p,
                                    const std::vector<double>& theta,
                                    const std::vector<double>& v) {
  const int N = static_cast<int>(v.size()) - 1;
  const double lam2 = p.Lambda * p.Lambda;
  const std::vector<double> zeta = zeta_closed_form(p, theta);
  std::vector<double> xs(N, 0.0);
  for (int k = 0; k < N; ++k) {
    double acc = 0.0;
    for (int i = k + 1; i <= N - 1; ++i) {
      const double sv = p.s * v[i];
      acc += p.s * zeta[i] / std::sqrt(1.0 - sv * sv);
    }
    double accv = 0.0;
    for (int i = k + 1; i <= N; ++i) accv += v[i];
    xs[k] = acc - lam2 * accv;
  }
  return xs;
}

std::pair<std::vector<double>, std::vector<double>> closed_form_adjoints(
    const ProblemParams& p, const std::vector<double>& theta,
    const std::vector<double>& v) {
  check_chart_domain(p, v);
  const int N = static_cast<int>(v.size()) - 1;
  const double lam2 = p.Lambda * p.Lambda;

  std::vector<double> zeta = zeta_closed_form(p, theta);
  std::vector<double> xi(N, 0.0);
  xi[N - 1] = -lam2 * v[N];
  for (int k = N - 1; k >= 1; --k) {
    const double sv = p.s * v[k];
    xi[k - 1] = p.s * zeta[k] / std::sqrt(1.0 - sv * sv) + xi[k] - lam2 * v[k];
  }

#ifndef NDEBUG
  // the explicit double-sum form must tell the same story as the recursion
  const std::vector<double> xs = xi_explicit_sum(p, theta, v);
  double scale = 1.0, delta = 0.0;
  for (int k = 0; k < N; ++k) {
    scale = std::max(scale, std::abs(xi[k]));
    delta = std::max(delta, std::abs(xs[k] - xi[k]));
  }
  assert(delta <= 1e-9 * scale && "adjoint sum/recursion mismatch");
#endif

  return {std::move(zeta), std::move(xi)};
}

std::pair<double, double> optimal_inputs(double xi_k, const ProblemParams& p) {
  const double su = p.s * xi_k;
  double u;
  if (p.lambda == 0.0 && su == 0.0)
    u = 0.0;  // degenerate bang-bang case with no drive
  else
    u = std::clamp(su / (p.lambda * p.lambda), -p.u_c, p.u_c);
  const double sd = -p.s * xi_k;
  double d;
  if (p.mu == 0.0 && sd == 0.0)
    d = 0.0;
  else
    d = std::clamp(sd / (p.mu * p.mu), -p.d_c, p.d_c);
  return {u, d};
}

std::vector<double> residual(const ProblemParams& p,
                             const std::vector<double>& v_interior) {
  if (static_cast<int>(v_interior.size()) != p.N)
    throw std::invalid_argument("unknown vector must have length N");
  const std::vector<double> v = full_velocity(p, v_interior);
  check_chart_domain(p, v);
  const std::vector<double> theta = roll_angles(p, v);
  const auto [zeta, xi] = closed_form_adjoints(p, theta, v);

  std::vector<double> res(p.N, 0.0);
  for (int k = 0; k < p.N; ++k) {
    const auto [u, d] = optimal_inputs(xi[k], p);
    res[k] = v[k + 1] - (v[k] + p.s * (u + d));
  }
  return res;
}

SystemModel spacecraft_model(const ProblemParams& p) {
  SystemModel m;
  m.N = p.N;
  m.kinematics = [p](const Rotation2&, double v) {
    return kinematics_factor(v, p.s);
  };
  m.dynamics = [p](const Rotation2&, double v, double u, double d) {
    return v + p.s * (u + d);
  };
  m.stage_cost = [p](int, const Rotation2& g, double v, double u, double d) {
    return 0.5 * (p.lambda * p.lambda * u * u + p.Lambda * p.Lambda * v * v -
                  p.mu * p.mu * d * d +
                  p.psi * p.psi * group_deviation_cost(g));
  };
  m.terminal_cost = [p](const Rotation2& g, double v) {
    return 0.5 * (p.Lambda * p.Lambda * v * v +
                  p.psi * p.psi * group_deviation_cost(g));
  };
  m.grad_v = [p](double mult, const StageTuple& t) {
    const double sv = p.s * t.v;
    return mult * (p.Lambda * p.Lambda) * t.v +
           p.s * t.covectors.zeta.x / std::sqrt(1.0 - sv * sv) +
           t.covectors.xi;
  };
  m.grad_u = [p](double mult, const StageTuple& t) {
    return mult * (p.lambda * p.lambda) * t.u + t.covectors.xi * p.s;
  };
  m.grad_d = [p](double mult, const StageTuple& t) {
    return -mult * (p.mu * p.mu) * t.d + t.covectors.xi * p.s;
  };
  m.grad_g = [p](double mult, const StageTuple& t) {
    // group gradient of the attitude cost term, in vex coordinates
    return AlgebraScalar{mult * (p.psi * p.psi) * t.g.m10()};
  };
  m.terminal_grad_v = [p](const Rotation2&, double v) {
    return (p.Lambda * p.Lambda) * v;
  };
  m.terminal_grad_g = [p](const Rotation2& g, double) {
    return AlgebraScalar{(p.psi * p.psi) * g.m10()};
  };
  return m;
}

double game_cost(const ProblemParams& p, const std::vector<double>& u_seq,
                 const std::vector<double>& d_seq) {
  const int N = p.N;
  if (static_cast<int>(u_seq.size()) != N ||
      static_cast<int>(d_seq.size()) != N)
    throw std::invalid_argument("input sequences must have length N");
  const double lam2 = p.Lambda * p.Lambda;
  const double lamc2 = p.lambda * p.lambda;
  const double mu2 = p.mu * p.mu;
  const double psi2 = p.psi * p.psi;

  std::vector<double> v(N + 1);
  v[0] = p.v0;
  for (int k = 0; k < N; ++k) v[k + 1] = v[k] + p.s * (u_seq[k] + d_seq[k]);
  const std::vector<double> theta = roll_angles(p, v);

  double J = 0.5 * (lam2 * v[N] * v[N] +
                    psi2 * (2.0 - 2.0 * std::cos(theta[N])));
  for (int k = 0; k < N; ++k)
    J += 0.5 * (lamc2 * u_seq[k] * u_seq[k] + lam2 * v[k] * v[k] -
                mu2 * d_seq[k] * d_seq[k] +
                psi2 * (2.0 - 2.0 * std::cos(theta[k])));
  return J;
}

std::vector<double> make_guess(const ProblemParams& p,
                               const std::string& kind) {
  if (kind == "zero") return std::vector<double>(p.N, 0.0);
  if (kind == "drift") {
    // constant angular rate that carries theta0 to its nearest rest
    // orientation over the horizon
    const double delta = std::atan2(std::sin(p.theta0), std::cos(p.theta0));
    double vconst = -delta / (p.N * p.s);
    if (std::abs(p.s * vconst) > 0.9)
      vconst = std::copysign(0.9 / p.s, vconst);
    return std::vector<double>(p.N, vconst);
  }
  throw std::invalid_argument("unknown guess generator: " + kind);
}

double max_dynamics_defect(const ProblemParams& p,
                           const TrajectorySolution& sol) {
  double defect = 0.0;
  for (int k = 0; k < p.N; ++k) {
    defect = std::max(defect, std::abs(sol.v[k + 1] -
                                       (sol.v[k] +
                                        p.s * (sol.u[k] + sol.d[k]))));
    defect = std::max(defect, std::abs(sol.theta[k + 1] - sol.theta[k] -
                                       std::asin(p.s * sol.v[k])));
  }
  return defect;
}

TrajectorySolution simulate(const ProblemParams& p,
                            const std::vector<double>& initial_guess,
                            const SolverConfig& cfg,
                            SolveReport* solver_report) {
  validate(p);
  if (static_cast<int>(initial_guess.size()) != p.N)
    throw std::invalid_argument("initial guess must have length N");

  const VectorFn F = [&p](const std::vector<double>& x) {
    return residual(p, x);
  };

  KinkDetector kinks;
  if (std::isfinite(p.u_c) || std::isfinite(p.d_c)) {
    kinks = [&p](const std::vector<double>& x,
                 const std::vector<double>& steps) {
      const std::vector<int> base = clamp_states(p, x);
      std::vector<double> probe = x;
      for (std::size_t j = 0; j < x.size(); ++j) {
        for (const double sign : {+1.0, -1.0}) {
          probe[j] = x[j] + sign * steps[j];
          if (clamp_states(p, probe) != base) return true;
        }
        probe[j] = x[j];
      }
      return false;
    };
  }

  const SolveReport rep = newton_solve(F, initial_guess, cfg, kinks);
  if (solver_report) *solver_report = rep;
  if (!rep.converged) {
    std::ostringstream msg;
    msg << "solver stopped (" << rep.termination << ") after "
        << rep.iterations << " iterations, residual "
        << rep.residual_inf_norm;
    throw SolveFailure(msg.str(), rep);
  }

  TrajectorySolution sol;
  sol.v = full_velocity(p, rep.x);
  sol.theta = roll_angles(p, sol.v);
  std::tie(sol.zeta, sol.xi) = closed_form_adjoints(p, sol.theta, sol.v);
  sol.u.resize(p.N);
  sol.d.resize(p.N);
  for (int k = 0; k < p.N; ++k)
    std::tie(sol.u[k], sol.d[k]) = optimal_inputs(sol.xi[k], p);
  sol.residual_inf = rep.residual_inf_norm;

  const SystemModel model = spacecraft_model(p);
  const Interval u_interval{-p.u_c, p.u_c};
  const Interval d_interval{-p.d_c, p.d_c};
  for (int k = 0; k < p.N; ++k) {
    const StageTuple t{k,
                       {AlgebraScalar{sol.zeta[k]}, sol.xi[k]},
                       exp_so2(sol.theta[k]),
                       sol.v[k],
                       sol.u[k],
                       sol.d[k]};
    const VariationalReport vr =
        variational_check(model, t, u_interval, d_interval);
    if (!vr.pass) {
      std::ostringstream msg;
      msg << "converged point violates the stage variational inequality at k="
          << k << " (grad_u=" << vr.grad_u << ", grad_d=" << vr.grad_d << ")";
      throw NumericalBreakdown(msg.str());
    }
  }
  const SubproblemReport sub = subproblem_consistency(model, sol);
  if (!sub.pass)
    throw NumericalBreakdown(
        "converged point fails the subproblem covector consistency checks");

  const VectorGameFn J = [&p](const std::vector<double>& uu,
                              const std::vector<double>& dd) {
    return game_cost(p, uu, dd);
  };
  sol.saddle = sufficient_saddle_check(J, sol.u, sol.d);
  return sol;
}

}  // namespace mmoc
