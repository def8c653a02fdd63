#include "mmoc/saddle.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

#include "mmoc/errors.hpp"

namespace mmoc {

namespace {

constexpr double kTieBand = 1e-12;

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  return out;
}

void validate_grid(const GridSpec& g, double u_star, double d_star) {
  if (g.u_count < 2 || g.d_count < 2)
    throw std::invalid_argument("grid needs at least 2 points per axis");
  if (!(g.u_lo < g.u_hi) || !(g.d_lo < g.d_hi))
    throw std::invalid_argument("grid range must have lo < hi");
  if (u_star < g.u_lo || u_star > g.u_hi || d_star < g.d_lo || d_star > g.d_hi)
    throw std::invalid_argument("candidate outside grid box");
}

}  // namespace

GridSaddleReport grid_saddle_check(const ScalarGameFn& F, const GridSpec& grid,
                                   double u_star, double d_star) {
  validate_grid(grid, u_star, d_star);
  GridSaddleReport rep;
  rep.checked_box = grid;

  const double f_star = F(u_star, d_star);
  const std::vector<double> us = linspace(grid.u_lo, grid.u_hi, grid.u_count);
  const std::vector<double> ds = linspace(grid.d_lo, grid.d_hi, grid.d_count);

  // Characterization 1: the two defining inequalities along the candidate's
  // row and column.
  bool right_ok = true;  // F(u, d*) ≥ F(u*, d*) for all grid u
  for (double u : us)
    if (F(u, d_star) < f_star - kTieBand) {
      right_ok = false;
      ++rep.row_violations;
    }
  bool left_ok = true;  // F(u*, d) ≤ F(u*, d*) for all grid d
  for (double d : ds)
    if (F(u_star, d) > f_star + kTieBand) {
      left_ok = false;
      ++rep.col_violations;
    }
  rep.definition_holds = left_ok && right_ok;

  // Characterization 2: Ω₁ = {(u,d*) : F < F*}, Ω₂ = {(u*,d) : F > F*};
  // saddle iff the union (plus the candidate) meets the grid only at the
  // candidate.
  std::vector<std::pair<double, double>> omega_union;
  for (double u : us)
    if (F(u, d_star) < f_star - kTieBand) omega_union.emplace_back(u, d_star);
  for (double d : ds)
    if (F(u_star, d) > f_star + kTieBand) omega_union.emplace_back(u_star, d);
  rep.omega_union_singleton = omega_union.empty();

  // Characterization 3: each augmented set Ωᵢ′ = Ωᵢ ∪ {(u*,d*)} meets the
  // grid in exactly the candidate.
  std::size_t omega1_extra = 0, omega2_extra = 0;
  for (double u : us)
    if (F(u, d_star) < f_star - kTieBand) ++omega1_extra;
  for (double d : ds)
    if (F(u_star, d) > f_star + kTieBand) ++omega2_extra;
  rep.omega_split_singletons = (omega1_extra == 0) && (omega2_extra == 0);

  rep.verdicts_agree = (rep.definition_holds == rep.omega_union_singleton) &&
                       (rep.definition_holds == rep.omega_split_singletons);
  assert(rep.verdicts_agree && "saddle characterizations must coincide");
  rep.is_saddle = rep.definition_holds && rep.verdicts_agree;
  return rep;
}

std::vector<double> symmetric_eigenvalues(std::vector<double> A, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double s = 0.5 * (A[i * n + j] + A[j * n + i]);
      A[i * n + j] = A[j * n + i] = s;
    }

  // cyclic Jacobi sweeps; n ≤ 100 here so this is plenty fast
  constexpr int kMaxSweeps = 100;
  constexpr double kOffTol = 1e-14;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += A[i * n + j] * A[i * n + j];
    if (std::sqrt(off) < kOffTol * n) break;

    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = A[p * n + q];
        if (apq == 0.0) continue;
        const double app = A[p * n + p];
        const double aqq = A[q * n + q];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0)
                             ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = A[k * n + p];
          const double akq = A[k * n + q];
          A[k * n + p] = c * akp - s * akq;
          A[k * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A[p * n + k];
          const double aqk = A[q * n + k];
          A[p * n + k] = c * apk - s * aqk;
          A[q * n + k] = s * apk + c * aqk;
        }
      }
  }

  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = A[i * n + i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

HessianReport sufficient_saddle_check(const VectorGameFn& F,
                                      const std::vector<double>& u_star,
                                      const std::vector<double>& d_star,
                                      double fd_step, double grad_tol) {
  HessianReport rep;
  const double grad_step = 0.01 * fd_step;

  auto grad_norm = [&](const std::vector<double>& base, bool in_u) {
    double norm = 0.0;
    std::vector<double> p = base, m = base;
    for (std::size_t i = 0; i < base.size(); ++i) {
      const double h = grad_step * (1.0 + std::abs(base[i]));
      p[i] = base[i] + h;
      m[i] = base[i] - h;
      const double fp = in_u ? F(p, d_star) : F(u_star, p);
      const double fm = in_u ? F(m, d_star) : F(u_star, m);
      norm = std::max(norm, std::abs((fp - fm) / (2.0 * h)));
      p[i] = base[i];
      m[i] = base[i];
    }
    return norm;
  };
  rep.grad_u_norm = grad_norm(u_star, true);
  rep.grad_d_norm = grad_norm(d_star, false);

  auto hessian = [&](const std::vector<double>& base, bool in_u) {
    const int n = static_cast<int>(base.size());
    std::vector<double> H(static_cast<std::size_t>(n) * n, 0.0);
    auto eval = [&](const std::vector<double>& x) {
      return in_u ? F(x, d_star) : F(u_star, x);
    };
    std::vector<double> x = base;
    for (int i = 0; i < n; ++i) {
      const double hi = fd_step * (1.0 + std::abs(base[i]));
      for (int j = i; j < n; ++j) {
        const double hj = fd_step * (1.0 + std::abs(base[j]));
        x[i] += hi; x[j] += hj; const double fpp = eval(x); x = base;
        x[i] += hi; x[j] -= hj; const double fpm = eval(x); x = base;
        x[i] -= hi; x[j] += hj; const double fmp = eval(x); x = base;
        x[i] -= hi; x[j] -= hj; const double fmm = eval(x); x = base;
        const double hij = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
        if (!std::isfinite(hij))
          throw NumericalBreakdown("non-finite Hessian entry");
        H[i * n + j] = H[j * n + i] = hij;
      }
    }
    return H;
  };

  const int nu = static_cast<int>(u_star.size());
  const int nd = static_cast<int>(d_star.size());
  const std::vector<double> eu = symmetric_eigenvalues(hessian(u_star, true), nu);
  const std::vector<double> ed = symmetric_eigenvalues(hessian(d_star, false), nd);
  rep.min_eig_Huu = eu.front();
  rep.max_eig_Hdd = ed.back();

  rep.is_saddle_certified = rep.grad_u_norm <= grad_tol &&
                            rep.grad_d_norm <= grad_tol &&
                            rep.min_eig_Huu > 0.0 && rep.max_eig_Hdd < 0.0;
  return rep;
}

}  // namespace mmoc
