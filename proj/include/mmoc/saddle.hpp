#pragma once

// Saddle-point verification: a grid check of the defining inequalities (with
// the equivalent sub-level/super-level set characterizations computed
// independently), and a second-order certificate from finite-difference
// Hessian blocks.

#include <functional>
#include <vector>

namespace mmoc {

struct GridSpec {
  double u_lo = -1.0, u_hi = 1.0;
  int u_count = 21;
  double d_lo = -1.0, d_hi = 1.0;
  int d_count = 21;
};

struct GridSaddleReport {
  // the three equivalent characterizations, each evaluated on its own
  bool definition_holds = false;      // F(u*,d) ≤ F(u*,d*) ≤ F(u,d*) on the grid
  bool omega_union_singleton = false; // (Ω₁ ∪ Ω₂ ∪ {*}) ∩ grid = {*}
  bool omega_split_singletons = false;// Ω₁′ ∩ grid = {*} and Ω₂′ ∩ grid = {*}
  bool verdicts_agree = false;
  bool is_saddle = false;
  int row_violations = 0;  // grid u with F(u,d*) below F(u*,d*)
  int col_violations = 0;  // grid d with F(u*,d) above F(u*,d*)
  GridSpec checked_box;    // verdict only covers this sampled box
};

struct HessianReport {
  double grad_u_norm = 0.0;  // ∞-norm of ∂F/∂u at the candidate
  double grad_d_norm = 0.0;
  double min_eig_Huu = 0.0;
  double max_eig_Hdd = 0.0;
  bool is_saddle_certified = false;
};

using ScalarGameFn = std::function<double(double u, double d)>;
using VectorGameFn = std::function<double(const std::vector<double>& u,
                                          const std::vector<double>& d)>;

// Checks whether (u_star, d_star) is a min-in-u / max-in-d saddle of F on
// the sampled box. Values within 1e-12 of F(u*,d*) count as ties. Throws
// std::invalid_argument when the candidate lies outside the box or the grid
// is degenerate.
GridSaddleReport grid_saddle_check(const ScalarGameFn& F, const GridSpec& grid,
                                   double u_star, double d_star);

// Central-difference gradient and Hessian blocks of F in u and d separately
// at the candidate; eigenvalues of the symmetrized blocks via Jacobi
// rotations. Certified iff both gradient norms ≤ grad_tol, the u-block is
// positive definite and the d-block negative definite. Hessian entries use
// per-coordinate steps fd_step·(1+|x_i|); gradients use steps 100× smaller.
HessianReport sufficient_saddle_check(const VectorGameFn& F,
                                      const std::vector<double>& u_star,
                                      const std::vector<double>& d_star,
                                      double fd_step = 1e-4,
                                      double grad_tol = 1e-6);

// All eigenvalues of a symmetric matrix (row-major n×n, symmetrized from A
// as (A+Aᵀ)/2 first), ascending. Exposed for tests.
std::vector<double> symmetric_eigenvalues(std::vector<double> A, int n);

}  // namespace mmoc
