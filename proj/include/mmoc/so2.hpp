#pragma once

// Planar rotations and their (one-dimensional) algebra.
//
// The algebra element x corresponds to the skew matrix
//   σ(x) = [ 0 -x ]
//          [ x  0 ]
// and vex is the inverse map. Covectors live in the same coordinates via
// the pairing <η,v> = ½ tr(σ(η)ᵀ σ(v)) = η·v.

namespace mmoc {

struct AlgebraScalar {
  double x = 0.0;
};

class Rotation2 {
 public:
  Rotation2() : m00_(1), m01_(0), m10_(0), m11_(1) {}

  // Validating factory for externally supplied matrices; throws
  // std::invalid_argument if the entries are not orthonormal with unit
  // determinant (1e-12 per entry).
  static Rotation2 from_matrix(double m00, double m01, double m10, double m11);

  static Rotation2 identity() { return Rotation2(); }

  double m00() const { return m00_; }
  double m01() const { return m01_; }
  double m10() const { return m10_; }
  double m11() const { return m11_; }

  double trace() const { return m00_ + m11_; }
  double det() const { return m00_ * m11_ - m01_ * m10_; }

  // max-abs entry of mᵀm - I.
  double orthogonality_defect() const;

  Rotation2 transposed() const { return Rotation2(m00_, m10_, m01_, m11_); }

  // Product with drift guard: if the orthogonality defect of the result
  // exceeds 1e-10 it is projected back onto the rotation manifold
  // (normalize the first column, second column follows).
  Rotation2 operator*(const Rotation2& o) const;

 private:
  Rotation2(double a, double b, double c, double d)
      : m00_(a), m01_(b), m10_(c), m11_(d) {}

  static Rotation2 renormalized(double a, double b, double c, double d);

  friend Rotation2 exp_so2(double x);

  double m00_, m01_, m10_, m11_;
};

// exp σ(x) = [[cos x, -sin x], [sin x, cos x]].
Rotation2 exp_so2(double x);

// Principal angle in (-π, π]; the θ = π boundary maps deterministically
// to +π.
double log_so2(const Rotation2& g);

// ½ tr(σ(eta)ᵀ σ(v)); equals eta·v, computed through the matrices.
double pairing(const AlgebraScalar& eta, const AlgebraScalar& v);

// vex(g σ(v) g⁻¹). The group is abelian so this is v itself; computed as
// the literal matrix product with the simplification asserted.
AlgebraScalar adjoint_action(const Rotation2& g, const AlgebraScalar& v);

// 2 - tr(g), i.e. 4 sin²(θ/2) for g = exp_so2(θ). Minimum 0 at identity.
double group_deviation_cost(const Rotation2& g);

// vex((gᵀ - g)/2) = -sin(log_so2(g)); the group gradient of the trace
// penalty comes out in this form.
double skew_part_vex(const Rotation2& g);

}  // namespace mmoc
