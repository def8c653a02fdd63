#pragma once

// Flat-space specialization of the maximum principle: states live in Rⁿ,
// the Hamiltonian loses its group term, and the adjoint system reduces to
// one covector sequence ξ. Kept as an independent thin layer rather than an
// alias of the group machinery so the two can be tested against each other.

#include <functional>
#include <vector>

#include "mmoc/pmp.hpp"  // Interval

namespace mmoc {

using Vec = std::vector<double>;

struct EuclidModel {
  int N = 0;
  // v_{k+1} = dynamics(v_k, u_k, d_k)
  std::function<Vec(const Vec&, const Vec&, const Vec&)> dynamics;
  std::function<double(int, const Vec&, const Vec&, const Vec&)> stage_cost;
  std::function<double(const Vec&)> terminal_cost;

  // optional analytic gradients; finite differences otherwise
  std::function<Vec(int k, const Vec& v, const Vec& u, const Vec& d,
                    const Vec& xi)>
      grad_v;  // D_v H at stage k
  std::function<Vec(const Vec& v)> terminal_grad_v;  // D_v c_N (unsigned)
};

struct EuclidStage {
  int k = 0;
  Vec v, u, d;
  Vec xi;  // ξᵏ
};

struct EuclidVariationalReport {
  bool u_ok = false;
  bool d_ok = false;
  bool pass = false;
  Vec grad_u, grad_d;  // per-coordinate ∂H at the stage
};

// H(γ_k) = −c_k(v,u,d) + ⟨ξ, F(v,u,d)⟩.
double euclid_hamiltonian(const EuclidModel& model, const EuclidStage& t);

// Backward sweep: ξᴺ⁻¹ = −D_v c_N(v_N), then ξᵏ⁻¹ = D_v H(γ_k) down to
// ξ⁰. Returns xi[k] = ξᵏ for k = 0..N−1. Trajectory has N+1 states; the
// input sequences have N entries each.
std::vector<Vec> euclid_adjoint_pass(const EuclidModel& model,
                                     const std::vector<Vec>& trajectory,
                                     const std::vector<Vec>& u_seq,
                                     const std::vector<Vec>& d_seq);

// Box version of the stage variational inequalities: per coordinate,
// interior points need |∂H| ≤ tol and boundary points the feasible sign.
EuclidVariationalReport euclid_variational_check(
    const EuclidModel& model, const EuclidStage& t,
    const std::vector<Interval>& u_box, const std::vector<Interval>& d_box,
    double tol = 1e-8);

}  // namespace mmoc
