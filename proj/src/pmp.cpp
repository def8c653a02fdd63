#include "mmoc/pmp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "mmoc/errors.hpp"

namespace mmoc {

namespace {

constexpr double kChartTol = 1e-12;
constexpr double kFdStep = 1e-6;
constexpr double kBoundaryTol = 1e-9;

Rotation2 chart_checked_factor(const SystemModel& model, const Rotation2& g,
                               double v) {
  Rotation2 f = model.kinematics(g, v);
  if (std::abs(f.trace() + 2.0) <= kChartTol)
    throw ChartViolation("kinematic factor at the cut locus (trace -2)");
  return f;
}

// H under cost multiplier m; the public hamiltonian() fixes m = -1.
double hamiltonian_m(const SystemModel& model, const StageTuple& t, double m) {
  const Rotation2 f = chart_checked_factor(model, t.g, t.v);
  const AlgebraScalar logf{log_so2(f)};
  const double c = model.stage_cost(t.k, t.g, t.v, t.u, t.d);
  const double F = model.dynamics(t.g, t.v, t.u, t.d);
  return m * c + pairing(t.covectors.zeta, logf) + t.covectors.xi * F;
}

double fd_grad_v_m(const SystemModel& model, const StageTuple& t, double m) {
  const double h = kFdStep * (1.0 + std::abs(t.v));
  StageTuple p = t, q = t;
  p.v += h;
  q.v -= h;
  return (hamiltonian_m(model, p, m) - hamiltonian_m(model, q, m)) / (2.0 * h);
}

double fd_grad_u_m(const SystemModel& model, const StageTuple& t, double m) {
  const double h = kFdStep * (1.0 + std::abs(t.u));
  StageTuple p = t, q = t;
  p.u += h;
  q.u -= h;
  return (hamiltonian_m(model, p, m) - hamiltonian_m(model, q, m)) / (2.0 * h);
}

double fd_grad_d_m(const SystemModel& model, const StageTuple& t, double m) {
  const double h = kFdStep * (1.0 + std::abs(t.d));
  StageTuple p = t, q = t;
  p.d += h;
  q.d -= h;
  return (hamiltonian_m(model, p, m) - hamiltonian_m(model, q, m)) / (2.0 * h);
}

AlgebraScalar fd_grad_g_m(const SystemModel& model, const StageTuple& t,
                          double m) {
  const double h = kFdStep;
  StageTuple p = t, q = t;
  p.g = t.g * exp_so2(h);
  q.g = t.g * exp_so2(-h);
  return {(hamiltonian_m(model, p, m) - hamiltonian_m(model, q, m)) /
          (2.0 * h)};
}

double grad_v_m(const SystemModel& model, const StageTuple& t, double m) {
  return model.grad_v ? model.grad_v(m, t) : fd_grad_v_m(model, t, m);
}
double grad_u_m(const SystemModel& model, const StageTuple& t, double m) {
  return model.grad_u ? model.grad_u(m, t) : fd_grad_u_m(model, t, m);
}
double grad_d_m(const SystemModel& model, const StageTuple& t, double m) {
  return model.grad_d ? model.grad_d(m, t) : fd_grad_d_m(model, t, m);
}
AlgebraScalar grad_g_m(const SystemModel& model, const StageTuple& t,
                       double m) {
  return model.grad_g ? model.grad_g(m, t) : fd_grad_g_m(model, t, m);
}

CovectorPair adjoint_step_m(const SystemModel& model, const StageTuple& t,
                            double m) {
  const Rotation2 f = chart_checked_factor(model, t.g, t.v);
  // carried term Ad*_{exp(-∂_ζ H)} ζᵏ — the group is abelian so this is the
  // identity, but we evaluate the map literally
  const AlgebraScalar carried =
      adjoint_action(exp_so2(-log_so2(f)), t.covectors.zeta);
  const AlgebraScalar tg = grad_g_m(model, t, m);
  CovectorPair out;
  out.zeta.x = carried.x + tg.x;
  out.xi = grad_v_m(model, t, m);
  return out;
}

CovectorPair transversality_m(const SystemModel& model, const Rotation2& g_N,
                              double v_N, double m) {
  double dv;
  if (model.terminal_grad_v) {
    dv = model.terminal_grad_v(g_N, v_N);
  } else {
    const double h = kFdStep * (1.0 + std::abs(v_N));
    dv = (model.terminal_cost(g_N, v_N + h) -
          model.terminal_cost(g_N, v_N - h)) /
         (2.0 * h);
  }
  AlgebraScalar dg;
  if (model.terminal_grad_g) {
    dg = model.terminal_grad_g(g_N, v_N);
  } else {
    const double h = kFdStep;
    dg.x = (model.terminal_cost(g_N * exp_so2(h), v_N) -
            model.terminal_cost(g_N * exp_so2(-h), v_N)) /
           (2.0 * h);
  }
  return {AlgebraScalar{m * dg.x}, m * dv};
}

struct CovectorSeq {
  std::vector<double> zeta;  // zeta[k] = ζᵏ, k = 0..N-1
  std::vector<double> xi;
};

std::vector<Rotation2> groups_from_angles(const std::vector<double>& theta) {
  std::vector<Rotation2> gs;
  gs.reserve(theta.size());
  for (double th : theta) gs.push_back(exp_so2(th));
  return gs;
}

CovectorSeq backward_sweep(const SystemModel& model,
                           const std::vector<Rotation2>& gs,
                           const TrajectorySolution& sol, double m) {
  const int N = model.N;
  CovectorSeq seq;
  seq.zeta.assign(N, 0.0);
  seq.xi.assign(N, 0.0);
  const CovectorPair term = transversality_m(model, gs[N], sol.v[N], m);
  seq.zeta[N - 1] = term.zeta.x;
  seq.xi[N - 1] = term.xi;
  for (int k = N - 1; k >= 1; --k) {
    const StageTuple t{k,
                       {AlgebraScalar{seq.zeta[k]}, seq.xi[k]},
                       gs[k],
                       sol.v[k],
                       sol.u[k],
                       sol.d[k]};
    const CovectorPair prev = adjoint_step_m(model, t, m);
    seq.zeta[k - 1] = prev.zeta.x;
    seq.xi[k - 1] = prev.xi;
  }
  return seq;
}

struct ConditionResiduals {
  std::vector<double> dynamics;        // 2 per stage: group log + velocity
  std::vector<double> adjoint;         // 2 per interior step
  std::vector<double> transversality;  // 2
  std::vector<double> variational;     // 2 per stage: ∂_u H, ∂_d H
};

ConditionResiduals evaluate_residuals(const SystemModel& model,
                                      const std::vector<Rotation2>& gs,
                                      const TrajectorySolution& sol, double m,
                                      const std::vector<double>& zeta,
                                      const std::vector<double>& xi) {
  const int N = model.N;
  ConditionResiduals res;
  for (int k = 0; k < N; ++k) {
    const Rotation2 f = chart_checked_factor(model, gs[k], sol.v[k]);
    res.dynamics.push_back(log_so2(gs[k + 1].transposed() * (gs[k] * f)));
    res.dynamics.push_back(sol.v[k + 1] -
                           model.dynamics(gs[k], sol.v[k], sol.u[k], sol.d[k]));
  }
  for (int k = N - 1; k >= 1; --k) {
    const StageTuple t{
        k, {AlgebraScalar{zeta[k]}, xi[k]}, gs[k], sol.v[k], sol.u[k],
        sol.d[k]};
    const CovectorPair prev = adjoint_step_m(model, t, m);
    res.adjoint.push_back(zeta[k - 1] - prev.zeta.x);
    res.adjoint.push_back(xi[k - 1] - prev.xi);
  }
  const CovectorPair term = transversality_m(model, gs[N], sol.v[N], m);
  res.transversality.push_back(zeta[N - 1] - term.zeta.x);
  res.transversality.push_back(xi[N - 1] - term.xi);
  for (int k = 0; k < N; ++k) {
    const StageTuple t{
        k, {AlgebraScalar{zeta[k]}, xi[k]}, gs[k], sol.v[k], sol.u[k],
        sol.d[k]};
    res.variational.push_back(grad_u_m(model, t, m));
    res.variational.push_back(grad_d_m(model, t, m));
  }
  return res;
}

double max_scaled_delta(const std::vector<double>& scaled,
                        const std::vector<double>& base, double factor) {
  double delta = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i)
    delta = std::max(delta, std::abs(scaled[i] - factor * base[i]));
  return delta;
}

}  // namespace

double hamiltonian(const SystemModel& model, const StageTuple& t) {
  return hamiltonian_m(model, t, -1.0);
}

double fd_grad_v(const SystemModel& model, const StageTuple& t) {
  return fd_grad_v_m(model, t, -1.0);
}
double fd_grad_u(const SystemModel& model, const StageTuple& t) {
  return fd_grad_u_m(model, t, -1.0);
}
double fd_grad_d(const SystemModel& model, const StageTuple& t) {
  return fd_grad_d_m(model, t, -1.0);
}
AlgebraScalar fd_grad_g(const SystemModel& model, const StageTuple& t) {
  return fd_grad_g_m(model, t, -1.0);
}

CovectorPair adjoint_step(const SystemModel& model, const StageTuple& t) {
  return adjoint_step_m(model, t, -1.0);
}

CovectorPair transversality(const SystemModel& model, const Rotation2& g_N,
                            double v_N) {
  return transversality_m(model, g_N, v_N, -1.0);
}

std::pair<std::vector<Rotation2>, std::vector<double>> forward_rollout(
    const SystemModel& model, const Rotation2& g0, double v0,
    const std::vector<double>& u_seq, const std::vector<double>& d_seq) {
  const int N = model.N;
  if (static_cast<int>(u_seq.size()) != N ||
      static_cast<int>(d_seq.size()) != N)
    throw std::invalid_argument("input sequences must have length N");
  std::vector<Rotation2> gs;
  std::vector<double> vs;
  gs.reserve(N + 1);
  vs.reserve(N + 1);
  gs.push_back(g0);
  vs.push_back(v0);
  for (int k = 0; k < N; ++k) {
    Rotation2 f;
    try {
      f = model.kinematics(gs[k], vs[k]);
    } catch (const DomainViolation& e) {
      throw DomainViolation(e.what(), k);
    }
    gs.push_back(gs[k] * f);
    vs.push_back(model.dynamics(gs[k], vs[k], u_seq[k], d_seq[k]));
  }
  return {std::move(gs), std::move(vs)};
}

VariationalReport variational_check(const SystemModel& model,
                                    const StageTuple& t,
                                    const Interval& u_interval,
                                    const Interval& d_interval, double tol) {
  if (t.u < u_interval.lo || t.u > u_interval.hi || t.d < d_interval.lo ||
      t.d > d_interval.hi)
    throw std::invalid_argument("stage inputs outside their intervals");

  VariationalReport rep;
  rep.grad_u = grad_u_m(model, t, -1.0);
  rep.grad_d = grad_d_m(model, t, -1.0);

  auto at_edge = [](double x, double edge) {
    return std::isfinite(edge) &&
           std::abs(x - edge) <= kBoundaryTol * (1.0 + std::abs(edge));
  };

  // u maximizes H: feasible moves from the upper edge point down, so the
  // gradient may stay positive there; symmetric at the lower edge.
  if (at_edge(t.u, u_interval.hi))
    rep.u_ok = rep.grad_u >= -tol;
  else if (at_edge(t.u, u_interval.lo))
    rep.u_ok = rep.grad_u <= tol;
  else
    rep.u_ok = std::abs(rep.grad_u) <= tol;

  // d minimizes H
  if (at_edge(t.d, d_interval.hi))
    rep.d_ok = rep.grad_d <= tol;
  else if (at_edge(t.d, d_interval.lo))
    rep.d_ok = rep.grad_d >= -tol;
  else
    rep.d_ok = std::abs(rep.grad_d) <= tol;

  rep.pass = rep.u_ok && rep.d_ok;
  return rep;
}

SubproblemReport subproblem_consistency(const SystemModel& model,
                                        const TrajectorySolution& sol) {
  const int N = model.N;
  const std::vector<Rotation2> gs = groups_from_angles(sol.theta);

  const CovectorSeq minimizer = backward_sweep(model, gs, sol, -1.0);
  const CovectorSeq maximizer = backward_sweep(model, gs, sol, +1.0);
  const CovectorSeq degenerate = backward_sweep(model, gs, sol, 0.0);

  // amalgamated recursion through the public single-step operations
  CovectorSeq amalgam;
  amalgam.zeta.assign(N, 0.0);
  amalgam.xi.assign(N, 0.0);
  const CovectorPair term = transversality(model, gs[N], sol.v[N]);
  amalgam.zeta[N - 1] = term.zeta.x;
  amalgam.xi[N - 1] = term.xi;
  for (int k = N - 1; k >= 1; --k) {
    const StageTuple t{k,
                       {AlgebraScalar{amalgam.zeta[k]}, amalgam.xi[k]},
                       gs[k],
                       sol.v[k],
                       sol.u[k],
                       sol.d[k]};
    const CovectorPair prev = adjoint_step(model, t);
    amalgam.zeta[k - 1] = prev.zeta.x;
    amalgam.xi[k - 1] = prev.xi;
  }

  SubproblemReport rep;
  for (int k = 0; k < N; ++k) {
    rep.max_negation_delta =
        std::max({rep.max_negation_delta,
                  std::abs(minimizer.zeta[k] + maximizer.zeta[k]),
                  std::abs(minimizer.xi[k] + maximizer.xi[k])});
    rep.max_amalgam_delta =
        std::max({rep.max_amalgam_delta,
                  std::abs(minimizer.zeta[k] - amalgam.zeta[k]),
                  std::abs(minimizer.xi[k] - amalgam.xi[k]),
                  std::abs(maximizer.zeta[k] + amalgam.zeta[k]),
                  std::abs(maximizer.xi[k] + amalgam.xi[k])});
    rep.max_multiplier_zero_abs =
        std::max({rep.max_multiplier_zero_abs, std::abs(degenerate.zeta[k]),
                  std::abs(degenerate.xi[k])});
  }
  rep.negation_ok = rep.max_negation_delta <= 1e-12;
  rep.amalgam_ok = rep.max_amalgam_delta <= 1e-12;
  rep.zero_multiplier_ok = rep.max_multiplier_zero_abs == 0.0;
  rep.pass = rep.negation_ok && rep.amalgam_ok && rep.zero_multiplier_ok;
  return rep;
}

ScalingReport scaling_invariance_check(const SystemModel& model,
                                       const TrajectorySolution& sol,
                                       double r) {
  if (!(r > 0.0)) throw std::invalid_argument("scale factor must be positive");
  const std::vector<Rotation2> gs = groups_from_angles(sol.theta);

  const ConditionResiduals base =
      evaluate_residuals(model, gs, sol, -1.0, sol.zeta, sol.xi);

  std::vector<double> zeta_r = sol.zeta, xi_r = sol.xi;
  for (double& z : zeta_r) z = r * z;
  for (double& x : xi_r) x = r * x;
  const ConditionResiduals scaled =
      evaluate_residuals(model, gs, sol, -r, zeta_r, xi_r);

  ScalingReport rep;
  // the state equations never see the covectors: factor 1
  rep.dynamics_delta = max_scaled_delta(scaled.dynamics, base.dynamics, 1.0);
  // everything else is linear in (m, ζ, ξ): factor r
  rep.adjoint_delta = max_scaled_delta(scaled.adjoint, base.adjoint, r);
  rep.transversality_delta =
      max_scaled_delta(scaled.transversality, base.transversality, r);
  rep.variational_delta =
      max_scaled_delta(scaled.variational, base.variational, r);

  constexpr double kTol = 1e-10;
  rep.dynamics_ok = rep.dynamics_delta <= kTol;
  rep.adjoint_ok = rep.adjoint_delta <= kTol;
  rep.transversality_ok = rep.transversality_delta <= kTol;
  rep.variational_ok = rep.variational_delta <= kTol;
  rep.pass = rep.dynamics_ok && rep.adjoint_ok && rep.transversality_ok &&
             rep.variational_ok;
  return rep;
}

}  // namespace mmoc
