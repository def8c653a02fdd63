#pragma once

// Discrete-time min-max maximum principle on SO(2): Hamiltonian, backward
// adjoint recursion, transversality, the variational (Hamiltonian saddle)
// inequalities, and the consistency checks relating the amalgamated
// conditions to the two one-sided subproblems.
//
// Cost-multiplier convention: internally every recursion is linear in a
// multiplier m applied to the costs, H = m·c + ⟨ζ, exp⁻¹f⟩ + ξ·F with
// matching transversality (ζ^{N−1}, ξ^{N−1}) = m·(group, velocity) terminal
// gradients. The public entry points fix m = −1 (minimisation orientation,
// covectors scaled accordingly); m = +1 reproduces the maximisation
// subproblem's covectors and m = 0 the vanishing-multiplier degeneracy.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "mmoc/saddle.hpp"
#include "mmoc/so2.hpp"

namespace mmoc {

struct CovectorPair {
  AlgebraScalar zeta;  // covector on the group part, identified with a real
  double xi = 0.0;     // covector on the velocity part
};

struct StageTuple {
  int k = 0;  // stage index, 0 ≤ k ≤ N−1
  CovectorPair covectors;
  Rotation2 g;
  double v = 0.0;
  double u = 0.0;
  double d = 0.0;
};

struct SystemModel {
  int N = 0;
  // g_{k+1} = g_k · kinematics(g_k, v_k)
  std::function<Rotation2(const Rotation2&, double)> kinematics;
  // v_{k+1} = dynamics(g_k, v_k, u_k, d_k)
  std::function<double(const Rotation2&, double, double, double)> dynamics;
  std::function<double(int, const Rotation2&, double, double, double)> stage_cost;
  std::function<double(const Rotation2&, double)> terminal_cost;

  // Optional analytic partials of H under multiplier m; finite differences
  // are used where these are absent.
  std::function<double(double m, const StageTuple&)> grad_v;
  std::function<double(double m, const StageTuple&)> grad_u;
  std::function<double(double m, const StageTuple&)> grad_d;
  std::function<AlgebraScalar(double m, const StageTuple&)> grad_g;
  // Unsigned terminal-cost gradients (no multiplier applied).
  std::function<double(const Rotation2&, double)> terminal_grad_v;
  std::function<AlgebraScalar(const Rotation2&, double)> terminal_grad_g;
};

struct TrajectorySolution {
  std::vector<double> theta;  // N+1, accumulated (unwrapped) angle
  std::vector<double> v;      // N+1
  std::vector<double> u;      // N
  std::vector<double> d;      // N
  std::vector<double> zeta;   // N, zeta[k] = ζᵏ
  std::vector<double> xi;     // N, xi[k] = ξᵏ
  double residual_inf = 0.0;
  std::optional<HessianReport> saddle;  // set when a certificate was run
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct VariationalReport {
  bool u_ok = false;
  bool d_ok = false;
  bool pass = false;
  double grad_u = 0.0;  // ∂H/∂u at the tuple (reported on failure too)
  double grad_d = 0.0;
};

struct SubproblemReport {
  double max_negation_delta = 0.0;  // |ζ̌ + ζ̂|, |ξ̌ + ξ̂| over all stages
  double max_amalgam_delta = 0.0;   // subproblem covectors vs amalgamated ones
  double max_multiplier_zero_abs = 0.0;  // covector magnitudes under m = 0
  bool negation_ok = false;
  bool amalgam_ok = false;
  bool zero_multiplier_ok = false;
  bool pass = false;
};

struct ScalingReport {
  double dynamics_delta = 0.0;
  double adjoint_delta = 0.0;
  double transversality_delta = 0.0;
  double variational_delta = 0.0;
  bool dynamics_ok = false;
  bool adjoint_ok = false;
  bool transversality_ok = false;
  bool variational_ok = false;
  bool pass = false;
};

// H(γ_k) = −c_k + ⟨ζ, exp⁻¹ f(g,v)⟩ + ξ·F(g,v,u,d). Throws ChartViolation
// when f(g,v) is at the cut locus (trace within 1e−12 of −2).
double hamiltonian(const SystemModel& model, const StageTuple& t);

// Finite-difference partials of H at t (central, step 1e−6·(1+|x|)); the
// group partial differentiates along s ↦ g·exp(σ(s)). These are the
// fallback paths behind the analytic overrides, exposed for cross-checks.
double fd_grad_v(const SystemModel& model, const StageTuple& t);
double fd_grad_u(const SystemModel& model, const StageTuple& t);
double fd_grad_d(const SystemModel& model, const StageTuple& t);
AlgebraScalar fd_grad_g(const SystemModel& model, const StageTuple& t);

// One backward step: from stage-k quantities and (ζᵏ, ξᵏ) in t to
// (ζᵏ⁻¹, ξᵏ⁻¹). ξᵏ⁻¹ = ∂_v H; ζᵏ⁻¹ = Ad*_{exp(−∂_ζ H)} ζᵏ + T_g H.
CovectorPair adjoint_step(const SystemModel& model, const StageTuple& t);

// Terminal covectors (ζᴺ⁻¹, ξᴺ⁻¹) = −(group, velocity) gradients of the
// terminal cost at (g_N, v_N).
CovectorPair transversality(const SystemModel& model, const Rotation2& g_N,
                            double v_N);

// Rolls the state equations forward from (g0, v0); returns N+1 group
// elements and N+1 velocities. DomainViolation carries the failing stage.
std::pair<std::vector<Rotation2>, std::vector<double>> forward_rollout(
    const SystemModel& model, const Rotation2& g0, double v0,
    const std::vector<double>& u_seq, const std::vector<double>& d_seq);

// Saddle variational inequalities at one stage: ⟨∂_u H, u′−u⟩ ≤ 0 and
// ⟨∂_d H, d′−d⟩ ≥ 0 for all feasible u′, d′ — endpoint sign conditions on
// intervals, |∂H| ≤ tol in the interior.
VariationalReport variational_check(const SystemModel& model,
                                    const StageTuple& t,
                                    const Interval& u_interval,
                                    const Interval& d_interval,
                                    double tol = 1e-8);

// Re-derives the covectors via the minimisation subproblem (m = −1), the
// maximisation subproblem (m = +1) and the degenerate m = 0 run; checks the
// sign-flip relation between the subproblems, agreement with the
// amalgamated recursion, and that m = 0 forces identically zero covectors.
SubproblemReport subproblem_consistency(const SystemModel& model,
                                        const TrajectorySolution& sol);

// Scales (m, ζ, ξ) by r > 0 and re-evaluates the residuals of the four
// conditions; state-equation residuals must be unchanged and the covector
// ones must scale by exactly r (compared at 1e−10).
ScalingReport scaling_invariance_check(const SystemModel& model,
                                       const TrajectorySolution& sol,
                                       double r);

}  // namespace mmoc
