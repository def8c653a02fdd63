#include "mmoc/so2.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mmoc {

namespace {
constexpr double kEntryTol = 1e-12;   // per-entry invariant tolerance
constexpr double kDriftTol = 1e-10;   // renormalization trigger for products
}  // namespace

Rotation2 Rotation2::from_matrix(double m00, double m01, double m10,
                                 double m11) {
  Rotation2 g(m00, m01, m10, m11);
  if (g.orthogonality_defect() > kEntryTol ||
      std::abs(g.det() - 1.0) > kEntryTol) {
    throw std::invalid_argument("Rotation2::from_matrix: not a rotation");
  }
  return g;
}

double Rotation2::orthogonality_defect() const {
  // mᵀm entries
  const double a = m00_ * m00_ + m10_ * m10_ - 1.0;
  const double b = m00_ * m01_ + m10_ * m11_;
  const double c = m01_ * m01_ + m11_ * m11_ - 1.0;
  double d = std::abs(a);
  if (std::abs(b) > d) d = std::abs(b);
  if (std::abs(c) > d) d = std::abs(c);
  return d;
}

Rotation2 Rotation2::renormalized(double a, double b, double c, double d) {
  (void)b;
  (void)d;
  const double r = std::sqrt(a * a + c * c);
  const double ca = a / r, sa = c / r;
  return Rotation2(ca, -sa, sa, ca);
}

Rotation2 Rotation2::operator*(const Rotation2& o) const {
  Rotation2 p(m00_ * o.m00_ + m01_ * o.m10_, m00_ * o.m01_ + m01_ * o.m11_,
              m10_ * o.m00_ + m11_ * o.m10_, m10_ * o.m01_ + m11_ * o.m11_);
  if (p.orthogonality_defect() > kDriftTol) {
    p = renormalized(p.m00_, p.m01_, p.m10_, p.m11_);
  }
  return p;
}

Rotation2 exp_so2(double x) {
  const double c = std::cos(x), s = std::sin(x);
  return Rotation2(c, -s, s, c);
}

double log_so2(const Rotation2& g) {
  double t = std::atan2(g.m10(), g.m00());
  if (t == -std::numbers::pi) t = std::numbers::pi;  // branch tie-break
  return t;
}

double pairing(const AlgebraScalar& eta, const AlgebraScalar& v) {
  // σ(eta)ᵀ σ(v) is diagonal with both entries eta·v; take the half-trace
  // literally.
  const double e = eta.x, w = v.x;
  // rows of σ(e)ᵀ are (0, e) and (-e, 0); columns of σ(w) are (0, w)ᵀ and
  // (-w, 0)ᵀ.
  const double p00 = 0.0 * 0.0 + e * w;
  const double p11 = (-e) * (-w) + 0.0 * 0.0;
  return 0.5 * (p00 + p11);
}

AlgebraScalar adjoint_action(const Rotation2& g, const AlgebraScalar& v) {
  // g σ(v) gᵀ, then vex of the (2,1) entry.
  const double x = v.x;
  // s1 = g σ(v): columns (x·g01? — write it out)
  const double s00 = g.m01() * x, s01 = -g.m00() * x;
  const double s10 = g.m11() * x, s11 = -g.m10() * x;
  // s2 = s1 gᵀ
  const double r10 = s10 * g.m00() + s11 * g.m01();
  const double r01 = s00 * g.m10() + s01 * g.m11();
  const double out = 0.5 * (r10 - r01);  // skew part's vex
  assert(std::abs(out - x) <= 1e-12 * (1.0 + std::abs(x)));
  return AlgebraScalar{out};
}

double group_deviation_cost(const Rotation2& g) { return 2.0 - g.trace(); }

double skew_part_vex(const Rotation2& g) {
  // (gᵀ - g)/2 = σ((m01 - m10)/2)
  return 0.5 * (g.m01() - g.m10());
}

}  // namespace mmoc
