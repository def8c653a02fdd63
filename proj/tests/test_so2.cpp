#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "mmoc/so2.hpp"

using namespace mmoc;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("exp produces the literal rotation matrix") {
  const Rotation2 g = exp_so2(0.7);
  CHECK(g.m00() == std::cos(0.7));
  CHECK(g.m01() == -std::sin(0.7));
  CHECK(g.m10() == std::sin(0.7));
  CHECK(g.m11() == std::cos(0.7));

  const Rotation2 id = exp_so2(0.0);
  CHECK(id.m00() == 1.0);
  CHECK(id.m01() == 0.0);
  CHECK(id.m10() == 0.0);
  CHECK(id.m11() == 1.0);

  const Rotation2 q = exp_so2(kPi / 2.0);
  CHECK(std::abs(q.m00()) < 1e-15);
  CHECK(q.m01() == doctest::Approx(-1.0));
  CHECK(q.m10() == doctest::Approx(1.0));

  const Rotation2 h = exp_so2(kPi);
  CHECK(h.m00() == doctest::Approx(-1.0));
  CHECK(std::abs(h.m10()) < 1e-15);
}

TEST_CASE("log inverts exp across the principal branch") {
  CHECK(log_so2(Rotation2::identity()) == 0.0);
  CHECK(log_so2(Rotation2::from_matrix(0, -1, 1, 0)) ==
        doctest::Approx(kPi / 2.0).epsilon(1e-15));
  CHECK(log_so2(exp_so2(0.3)) == doctest::Approx(0.3).epsilon(1e-14));

  for (int i = 0; i < 1000; ++i) {
    const double x = -kPi + (i + 0.5) * (2.0 * kPi / 1000.0);
    CHECK(std::abs(log_so2(exp_so2(x)) - x) <= 1e-12);
  }
}

TEST_CASE("cut-locus angle maps deterministically to +pi") {
  const Rotation2 half_turn = Rotation2::from_matrix(-1, 0, 0, -1);
  CHECK(log_so2(half_turn) == kPi);
  // a hair past the cut lands just inside the branch from the other side
  CHECK(log_so2(exp_so2(kPi)) == doctest::Approx(kPi).epsilon(1e-15));
}

TEST_CASE("pairing is the scalar product computed through the matrices") {
  CHECK(pairing(AlgebraScalar{1.0}, AlgebraScalar{1.0}) == 1.0);
  CHECK(pairing(AlgebraScalar{0.0}, AlgebraScalar{7.0}) == 0.0);
  CHECK(pairing(AlgebraScalar{2.0}, AlgebraScalar{3.0}) == 6.0);
  CHECK(pairing(AlgebraScalar{-1.5}, AlgebraScalar{0.25}) ==
        doctest::Approx(-0.375).epsilon(1e-16));
}

TEST_CASE("adjoint action is the identity on an abelian group") {
  CHECK(adjoint_action(Rotation2::identity(), AlgebraScalar{0.5}).x == 0.5);
  CHECK(adjoint_action(exp_so2(kPi / 3.0), AlgebraScalar{1.0}).x ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(adjoint_action(exp_so2(-2.0), AlgebraScalar{-0.25}).x ==
        doctest::Approx(-0.25).epsilon(1e-14));
  for (int i = 0; i < 100; ++i) {
    const double th = -3.0 + 0.06 * i;
    const double x = std::sin(7.0 * i) * 5.0;
    CHECK(std::abs(adjoint_action(exp_so2(th), AlgebraScalar{x}).x - x) <=
          1e-12 * (1.0 + std::abs(x)));
  }
}

TEST_CASE("deviation cost equals 4 sin^2(theta/2)") {
  CHECK(group_deviation_cost(Rotation2::identity()) == 0.0);
  CHECK(group_deviation_cost(exp_so2(kPi)) == doctest::Approx(4.0));
  CHECK(group_deviation_cost(exp_so2(kPi / 2.0)) == doctest::Approx(2.0));
  for (int i = 0; i < 1000; ++i) {
    const double th = i * (2.0 * kPi / 1000.0);
    const double want = 4.0 * std::pow(std::sin(th / 2.0), 2);
    CHECK(std::abs(group_deviation_cost(exp_so2(th)) - want) <= 1e-12);
    CHECK(group_deviation_cost(exp_so2(th)) >= 0.0);
    CHECK(group_deviation_cost(exp_so2(th)) <= 4.0 + 1e-15);
  }
}

TEST_CASE("skew part recovers minus the sine of the angle") {
  for (int i = 0; i < 200; ++i) {
    const double th = -kPi + i * (2.0 * kPi / 200.0) + 1e-3;
    CHECK(std::abs(skew_part_vex(exp_so2(th)) + std::sin(log_so2(exp_so2(th)))) <=
          1e-12);
  }
  CHECK(skew_part_vex(Rotation2::identity()) == 0.0);
}

TEST_CASE("from_matrix validates group membership") {
  CHECK_NOTHROW(Rotation2::from_matrix(1, 0, 0, 1));
  const double c = std::cos(0.3), s = std::sin(0.3);
  CHECK(log_so2(Rotation2::from_matrix(c, -s, s, c)) ==
        doctest::Approx(0.3).epsilon(1e-15));
  // reflection: orthogonal but det = -1
  CHECK_THROWS_AS(Rotation2::from_matrix(1, 0, 0, -1), std::invalid_argument);
  CHECK_THROWS_AS(Rotation2::from_matrix(1.1, 0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Rotation2::from_matrix(c, -s, s, c + 1e-9),
                  std::invalid_argument);
}

TEST_CASE("long products stay on the manifold") {
  Rotation2 g;
  const Rotation2 step = exp_so2(1e-3);
  const int n = 100000;
  for (int i = 0; i < n; ++i) g = g * step;
  CHECK(g.orthogonality_defect() <= 1e-10);
  CHECK(std::abs(g.det() - 1.0) <= 1e-10);
  const double want = std::remainder(n * 1e-3, 2.0 * kPi);
  CHECK(log_so2(g) == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("transpose is the group inverse") {
  const Rotation2 g = exp_so2(1.1);
  const Rotation2 h = g * g.transposed();
  CHECK(std::abs(h.m00() - 1.0) <= 1e-15);
  CHECK(std::abs(h.m01()) <= 1e-15);
  CHECK(std::abs(h.m10()) <= 1e-15);
  CHECK(std::abs(h.m11() - 1.0) <= 1e-15);
}
