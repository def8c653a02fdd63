#pragma once

// Closed-form solution of the unconstrained linear-quadratic dynamic game
// (the attitude weight plays no role here): a scalar Riccati-style backward
// recursion plus an explicit forward rollout. Serves as an independent
// oracle for the trajectory solver.

#include <vector>

#include "mmoc/pmp.hpp"
#include "mmoc/spacecraft.hpp"

namespace mmoc {

struct RiccatiSequences {
  std::vector<double> M;  // N+1 values, M[N] = Λ²
  std::vector<double> L;  // N values
};

// L_k = 1 + s²·M_{k+1}·(1 − μ⁻²), M_k = Λ² + M_{k+1}/L_k from M_N = Λ².
// μ = ∞ is admitted (μ⁻² = 0, the one-player limit). Requires λ = 1 exactly
// (the normalization the closed form is derived under; other values are
// rejected, not rescaled). Throws GameIllPosed when any L_k ≤ 0.
RiccatiSequences riccati_recursion(const ProblemParams& p);

// Forward rollout u_k = −s·M_{k+1}·v_k/L_k, d_k = μ⁻²·s·M_{k+1}·v_k/L_k,
// v_{k+1} = v_k/L_k, with covectors ζ ≡ 0 and ξᵏ = −Λ² Σ_{i>k} v_i. No
// saddle certificate is attached (the closed form carries its own
// optimality proof).
TrajectorySolution lq_trajectory(const ProblemParams& p,
                                 const RiccatiSequences& seqs);

// Max stage-wise |Δv|, |Δu|, |Δd| between sol and the closed-form game for
// the same parameters.
double lq_oracle_delta(const ProblemParams& p, const TrajectorySolution& sol);

}  // namespace mmoc
