#pragma once

// Damped Newton root finder with a finite-difference Jacobian. Globalized
// by Armijo backtracking on the merit ½‖F‖₂²; the linear solve is a dense
// partial-pivot elimination (n ≈ 50 here).

#include <functional>
#include <string>
#include <vector>

namespace mmoc {

struct SolverConfig {
  int max_iters = 200;
  double residual_tol = 1e-9;  // ∞-norm
  double fd_step = 1e-6;       // column j uses fd_step·(1+|x_j|)
  double armijo_c = 1e-4;
  double min_step = 1e-12;
};

struct SolveReport {
  std::vector<double> x;
  double residual_inf_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;  // ∞-norm after each accepted step, [0] = initial
  std::string termination;      // "converged" | "max_iters" | "step_collapse"
  std::vector<int> kink_iterations;  // iterations whose Jacobian stencil
                                     // straddled a clamp boundary
};

using VectorFn =
    std::function<std::vector<double>(const std::vector<double>&)>;

// True when the Jacobian stencil around x (per-column steps `steps`) crosses
// a non-smooth boundary of the problem. Supplied by the problem, since only
// it knows where its kinks are.
using KinkDetector = std::function<bool(const std::vector<double>& x,
                                        const std::vector<double>& steps)>;

// Column j = (F(x + step·e_j) - F(x - step·e_j)) / (2·step), row-major n×n.
// Throws NumericalBreakdown on non-finite values.
std::vector<double> numerical_jacobian(const VectorFn& F,
                                       const std::vector<double>& x,
                                       double step);
std::vector<double> numerical_jacobian(const VectorFn& F,
                                       const std::vector<double>& x,
                                       const std::vector<double>& steps);

// Solves the square system A x = b in place (A row-major n×n, overwritten).
// Pivots below 1e-14 raise SingularJacobian.
std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b);

// F(x) = 0 from x0. Trial points where F throws DomainViolation are treated
// as infinite merit (the step shrinks); a DomainViolation from the Jacobian
// stencil itself propagates to the caller.
SolveReport newton_solve(const VectorFn& F, const std::vector<double>& x0,
                         const SolverConfig& cfg = {},
                         const KinkDetector& kinks = nullptr);

}  // namespace mmoc
