#include "mmoc/euclid.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace mmoc {

namespace {

constexpr double kFdStep = 1e-6;
constexpr double kBoundaryTol = 1e-9;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// central difference of a scalar function along coordinate i of x
template <typename F>
double partial(const F& f, Vec x, std::size_t i) {
  const double h = kFdStep * (1.0 + std::abs(x[i]));
  const double xi = x[i];
  x[i] = xi + h;
  const double fp = f(x);
  x[i] = xi - h;
  const double fm = f(x);
  return (fp - fm) / (2.0 * h);
}

}  // namespace

double euclid_hamiltonian(const EuclidModel& model, const EuclidStage& t) {
  return -model.stage_cost(t.k, t.v, t.u, t.d) +
         dot(t.xi, model.dynamics(t.v, t.u, t.d));
}

std::vector<Vec> euclid_adjoint_pass(const EuclidModel& model,
                                     const std::vector<Vec>& trajectory,
                                     const std::vector<Vec>& u_seq,
                                     const std::vector<Vec>& d_seq) {
  const int N = model.N;
  if (static_cast<int>(trajectory.size()) != N + 1 ||
      static_cast<int>(u_seq.size()) != N ||
      static_cast<int>(d_seq.size()) != N)
    throw std::invalid_argument("sequence lengths inconsistent with horizon");
  const std::size_t n = trajectory[0].size();

  std::vector<Vec> xi(N, Vec(n, 0.0));

  if (model.terminal_grad_v) {
    const Vec g = model.terminal_grad_v(trajectory[N]);
    for (std::size_t i = 0; i < n; ++i) xi[N - 1][i] = -g[i];
  } else {
    for (std::size_t i = 0; i < n; ++i)
      xi[N - 1][i] = -partial(model.terminal_cost, trajectory[N], i);
  }

  for (int k = N - 1; k >= 1; --k) {
    if (model.grad_v) {
      xi[k - 1] =
          model.grad_v(k, trajectory[k], u_seq[k], d_seq[k], xi[k]);
      continue;
    }
    EuclidStage t{k, trajectory[k], u_seq[k], d_seq[k], xi[k]};
    auto h_of_v = [&](const Vec& v) {
      EuclidStage s = t;
      s.v = v;
      return euclid_hamiltonian(model, s);
    };
    for (std::size_t i = 0; i < n; ++i)
      xi[k - 1][i] = partial(h_of_v, trajectory[k], i);
  }
  return xi;
}

EuclidVariationalReport euclid_variational_check(
    const EuclidModel& model, const EuclidStage& t,
    const std::vector<Interval>& u_box, const std::vector<Interval>& d_box,
    double tol) {
  if (u_box.size() != t.u.size() || d_box.size() != t.d.size())
    throw std::invalid_argument("box dimensions mismatch the stage inputs");

  EuclidVariationalReport rep;
  rep.grad_u.resize(t.u.size());
  rep.grad_d.resize(t.d.size());

  auto h_of_u = [&](const Vec& u) {
    EuclidStage s = t;
    s.u = u;
    return euclid_hamiltonian(model, s);
  };
  auto h_of_d = [&](const Vec& d) {
    EuclidStage s = t;
    s.d = d;
    return euclid_hamiltonian(model, s);
  };

  auto at_edge = [](double x, double edge) {
    return std::isfinite(edge) &&
           std::abs(x - edge) <= kBoundaryTol * (1.0 + std::abs(edge));
  };

  rep.u_ok = true;
  for (std::size_t i = 0; i < t.u.size(); ++i) {
    if (t.u[i] < u_box[i].lo || t.u[i] > u_box[i].hi)
      throw std::invalid_argument("stage input outside its box");
    const double g = partial(h_of_u, t.u, i);
    rep.grad_u[i] = g;
    bool ok;  // u maximizes H
    if (at_edge(t.u[i], u_box[i].hi))
      ok = g >= -tol;
    else if (at_edge(t.u[i], u_box[i].lo))
      ok = g <= tol;
    else
      ok = std::abs(g) <= tol;
    rep.u_ok = rep.u_ok && ok;
  }

  rep.d_ok = true;
  for (std::size_t i = 0; i < t.d.size(); ++i) {
    if (t.d[i] < d_box[i].lo || t.d[i] > d_box[i].hi)
      throw std::invalid_argument("stage input outside its box");
    const double g = partial(h_of_d, t.d, i);
    rep.grad_d[i] = g;
    bool ok;  // d minimizes H
    if (at_edge(t.d[i], d_box[i].hi))
      ok = g <= tol;
    else if (at_edge(t.d[i], d_box[i].lo))
      ok = g >= -tol;
    else
      ok = std::abs(g) <= tol;
    rep.d_ok = rep.d_ok && ok;
  }

  rep.pass = rep.u_ok && rep.d_ok;
  return rep;
}

}  // namespace mmoc
