#pragma once

// Single-axis spacecraft rotation: kinematics on SO(2) driven by an angular
// velocity, a control/disturbance pair fighting over a quadratic cost, and
// the reduction of the necessary conditions to a root-finding problem in
// the interior velocities v₁…v_N.

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mmoc/newton.hpp"
#include "mmoc/pmp.hpp"
#include "mmoc/so2.hpp"

namespace mmoc {

struct ProblemParams {
  int N = 50;
  double s = 0.1;         // integration step
  double Lambda = 0.1;    // velocity weight
  double lambda = 1.0;    // control weight
  double mu = 2.0;        // disturbance attenuation weight
  double psi = 0.0;       // attitude-deviation weight
  double u_c = std::numeric_limits<double>::infinity();  // control bound
  double d_c = std::numeric_limits<double>::infinity();  // disturbance bound
  double theta0 = 0.0;    // initial angle
  double v0 = 0.0;        // initial angular velocity
};

// Throws std::invalid_argument on inconsistent parameters (N < 1, s ≤ 0,
// negative weights, λ or μ zero while the matching input is unbounded, …).
void validate(const ProblemParams& p);

// The per-stage rotation increment [[√(1−s²v²), −sv], [sv, √(1−s²v²)]],
// i.e. exp_so2(asin(s·v)). DomainViolation when s²v² ≥ 1.
Rotation2 kinematics_factor(double v, double s);

// θ_{k+1} = θ_k + asin(s·v_k) accumulated from θ̄₀ (unwrapped); v has N+1
// entries, result has N+1.
std::vector<double> roll_angles(const ProblemParams& p,
                                const std::vector<double>& v);

// ζᵏ = −ψ² Σ_{i=k+1..N} sin θ_i and ξ by the backward recursion
// ξᵏ⁻¹ = s ζᵏ/√(1−(s vₖ)²) + ξᵏ − Λ² vₖ from ξᴺ⁻¹ = −Λ² v_N. The explicit
// double-sum form of ξ is evaluated alongside as a cross-check.
std::pair<std::vector<double>, std::vector<double>> closed_form_adjoints(
    const ProblemParams& p, const std::vector<double>& theta,
    const std::vector<double>& v);

// The explicit-sum form: ξᵏ = Σ_{i=k+1..N−1} s ζⁱ/√(1−(s vᵢ)²) − Λ² Σ_{i=k+1..N} vᵢ.
std::vector<double> xi_explicit_sum(const ProblemParams& p,
                                    const std::vector<double>& theta,
                                    const std::vector<double>& v);

// u = clamp(s·ξ/λ², ±u_c), d = clamp(−s·ξ/μ², ±d_c).
std::pair<double, double> optimal_inputs(double xi_k, const ProblemParams& p);

// Necessary-condition residual in the interior velocities: for unknowns
// x = (v₁…v_N), component k is v_{k+1} − (v_k + s(u_k + d_k)) with the
// adjoints and inputs induced by x. DomainViolation (with the stage) when
// any |s·v_k| ≥ 1.
std::vector<double> residual(const ProblemParams& p,
                             const std::vector<double>& v_interior);

// The full model wired for the general machinery, with analytic gradient
// overrides for every Hamiltonian partial.
SystemModel spacecraft_model(const ProblemParams& p);

// Game cost J(ū, d̄): states rolled forward from (θ̄₀, v̄₀), quadratic
// running cost plus the terminal velocity/attitude term.
double game_cost(const ProblemParams& p, const std::vector<double>& u_seq,
                 const std::vector<double>& d_seq);

// Initial-guess generators: "zero" (v ≡ 0) and "drift" (constant rate
// driving the attitude to the nearest rest orientation over the horizon).
std::vector<double> make_guess(const ProblemParams& p, const std::string& kind);

// Largest violation of the two dynamics identities across the trajectory.
double max_dynamics_defect(const ProblemParams& p,
                           const TrajectorySolution& sol);

struct SolveFailure : std::runtime_error {
  SolveReport report;
  SolveFailure(const std::string& what, SolveReport rep)
      : std::runtime_error(what), report(std::move(rep)) {}
};

// Newton solve of the residual from the given guess; on convergence returns
// the assembled trajectory with its saddle certificate embedded, after
// checking the stage variational inequalities and the subproblem covector
// consistency. Throws SolveFailure (carrying the solver report) when the
// iteration does not converge. When solver_report is non-null the full
// solver diagnostics are copied there (also on the success path).
TrajectorySolution simulate(const ProblemParams& p,
                            const std::vector<double>& initial_guess,
                            const SolverConfig& cfg = {},
                            SolveReport* solver_report = nullptr);

}  // namespace mmoc
