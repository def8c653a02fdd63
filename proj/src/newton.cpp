#include "mmoc/newton.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "mmoc/errors.hpp"

namespace mmoc {

namespace {

double inf_norm(const std::vector<double>& v) {
  double n = 0.0;
  for (double e : v) n = std::max(n, std::abs(e));
  return n;
}

double half_sq_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return 0.5 * s;
}

void check_finite(const std::vector<double>& v, const char* where) {
  for (double e : v)
    if (!std::isfinite(e)) throw NumericalBreakdown(std::string("non-finite value in ") + where);
}

}  // namespace

std::vector<double> numerical_jacobian(const VectorFn& F,
                                       const std::vector<double>& x,
                                       const std::vector<double>& steps) {
  const std::size_t n = x.size();
  std::vector<double> J(n * n, 0.0);
  std::vector<double> xp = x, xm = x;
  for (std::size_t j = 0; j < n; ++j) {
    const double h = steps[j];
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    const std::vector<double> fp = F(xp);
    const std::vector<double> fm = F(xm);
    check_finite(fp, "jacobian stencil");
    check_finite(fm, "jacobian stencil");
    for (std::size_t i = 0; i < n; ++i) J[i * n + j] = (fp[i] - fm[i]) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return J;
}

std::vector<double> numerical_jacobian(const VectorFn& F,
                                       const std::vector<double>& x,
                                       double step) {
  std::vector<double> steps(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    steps[j] = step * (1.0 + std::abs(x[j]));
  return numerical_jacobian(F, x, steps);
}

std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b) {
  const std::size_t n = b.size();
  constexpr double kPivotTol = 1e-14;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(A[r * n + c]) > std::abs(A[p * n + c])) p = r;
    if (std::abs(A[p * n + c]) < kPivotTol)
      throw SingularJacobian("pivot below tolerance");
    if (p != c) {
      for (std::size_t j = c; j < n; ++j) std::swap(A[c * n + j], A[p * n + j]);
      std::swap(b[c], b[p]);
    }
    const double piv = A[c * n + c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = A[r * n + c] / piv;
      if (f == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) A[r * n + j] -= f * A[c * n + j];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A[i * n + j] * x[j];
    x[i] = s / A[i * n + i];
  }
  return x;
}

SolveReport newton_solve(const VectorFn& F, const std::vector<double>& x0,
                         const SolverConfig& cfg, const KinkDetector& kinks) {
  const std::size_t n = x0.size();
  SolveReport rep;
  rep.x = x0;

  std::vector<double> f = F(rep.x);
  check_finite(f, "residual at start");
  rep.residual_inf_norm = inf_norm(f);
  rep.history.push_back(rep.residual_inf_norm);

  if (rep.residual_inf_norm <= cfg.residual_tol) {
    rep.converged = true;
    rep.termination = "converged";
    return rep;
  }

  for (int it = 1; it <= cfg.max_iters; ++it) {
    std::vector<double> steps(n);
    for (std::size_t j = 0; j < n; ++j)
      steps[j] = cfg.fd_step * (1.0 + std::abs(rep.x[j]));
    if (kinks && kinks(rep.x, steps)) rep.kink_iterations.push_back(it);

    std::vector<double> J = numerical_jacobian(F, rep.x, steps);
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -f[i];

    std::vector<double> dx;
    try {
      dx = solve_dense(J, rhs);
    } catch (const SingularJacobian&) {
      // one shot at a regularized system before giving up
      const double lam = 1e-8 * (1.0 + inf_norm(f));
      std::vector<double> Jr = numerical_jacobian(F, rep.x, steps);
      for (std::size_t i = 0; i < n; ++i) Jr[i * n + i] += lam;
      dx = solve_dense(std::move(Jr), rhs);
    }

    const double phi0 = half_sq_norm(f);
    double t = 1.0;
    bool accepted = false;
    std::vector<double> xt(n), ft;
    while (t >= cfg.min_step) {
      for (std::size_t i = 0; i < n; ++i) xt[i] = rep.x[i] + t * dx[i];
      double phit = std::numeric_limits<double>::infinity();
      bool ok = true;
      try {
        ft = F(xt);
        check_finite(ft, "residual at trial point");
        phit = half_sq_norm(ft);
      } catch (const DomainViolation&) {
        ok = false;  // stepped outside the model's domain — shrink
      }
      if (ok && phit <= phi0 * (1.0 - 2.0 * cfg.armijo_c * t)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }

    if (!accepted) {
      rep.iterations = it;
      rep.termination = "step_collapse";
      return rep;
    }

    rep.x = xt;
    f = ft;
    rep.residual_inf_norm = inf_norm(f);
    rep.history.push_back(rep.residual_inf_norm);
    rep.iterations = it;

    if (rep.residual_inf_norm <= cfg.residual_tol) {
      rep.converged = true;
      rep.termination = "converged";
      return rep;
    }
  }

  rep.termination = "max_iters";
  return rep;
}

}  // namespace mmoc
