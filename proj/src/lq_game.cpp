#include "mmoc/lq_game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mmoc/errors.hpp"

namespace mmoc {

RiccatiSequences riccati_recursion(const ProblemParams& p) {
  if (p.lambda != 1.0)
    throw std::invalid_argument(
        "closed-form game requires the control weight normalized to 1");
  if (!(p.mu > 0.0))
    throw std::invalid_argument("disturbance weight must be positive");

  const int N = p.N;
  const double lam2 = p.Lambda * p.Lambda;
  const double mu_inv2 = 1.0 / (p.mu * p.mu);  // 0 in the mu = inf limit

  RiccatiSequences seqs;
  seqs.M.assign(N + 1, 0.0);
  seqs.L.assign(N, 0.0);
  seqs.M[N] = lam2;
  for (int k = N - 1; k >= 0; --k) {
    seqs.L[k] = 1.0 + p.s * p.s * seqs.M[k + 1] * (1.0 - mu_inv2);
    if (seqs.L[k] <= 0.0)
      throw GameIllPosed("recursion factor L_k nonpositive at stage " +
                         std::to_string(k));
    seqs.M[k] = lam2 + seqs.M[k + 1] / seqs.L[k];
  }
  return seqs;
}

TrajectorySolution lq_trajectory(const ProblemParams& p,
                                 const RiccatiSequences& seqs) {
  const int N = p.N;
  const double lam2 = p.Lambda * p.Lambda;
  const double mu_inv2 = 1.0 / (p.mu * p.mu);

  TrajectorySolution sol;
  sol.v.assign(N + 1, 0.0);
  sol.u.assign(N, 0.0);
  sol.d.assign(N, 0.0);
  sol.zeta.assign(N, 0.0);
  sol.xi.assign(N, 0.0);

  sol.v[0] = p.v0;
  for (int k = 0; k < N; ++k) {
    sol.u[k] = -p.s * seqs.M[k + 1] * sol.v[k] / seqs.L[k];
    sol.d[k] = mu_inv2 * p.s * seqs.M[k + 1] * sol.v[k] / seqs.L[k];
    sol.v[k + 1] = sol.v[k] / seqs.L[k];
  }
  sol.theta = roll_angles(p, sol.v);

  double acc = 0.0;
  for (int k = N - 1; k >= 0; --k) {
    acc += sol.v[k + 1];
    sol.xi[k] = -lam2 * acc;
  }

  std::vector<double> interior(sol.v.begin() + 1, sol.v.end());
  const std::vector<double> res = residual(p, interior);
  for (double r : res)
    sol.residual_inf = std::max(sol.residual_inf, std::abs(r));
  return sol;
}

double lq_oracle_delta(const ProblemParams& p, const TrajectorySolution& sol) {
  const TrajectorySolution oracle = lq_trajectory(p, riccati_recursion(p));
  double delta = 0.0;
  for (int k = 0; k <= p.N; ++k)
    delta = std::max(delta, std::abs(sol.v[k] - oracle.v[k]));
  for (int k = 0; k < p.N; ++k) {
    delta = std::max(delta, std::abs(sol.u[k] - oracle.u[k]));
    delta = std::max(delta, std::abs(sol.d[k] - oracle.d[k]));
  }
  return delta;
}

}  // namespace mmoc
