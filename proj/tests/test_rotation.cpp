#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "patchrot/rotation.hpp"
#include "test_helpers.hpp"

using namespace patchrot;
using Catch::Approx;

namespace {

Mat3 rows(double a, double b, double c, double d, double e, double f, double g, double h,
          double i) {
  return {{{{a, b, c}, {d, e, f}, {g, h, i}}}};
}

}  // namespace

TEST_CASE("skew matches its explicit matrix and realizes the cross product",
          "[rotation]") {
  CHECK(frobenius_norm(skew({0, 0, 0})) == 0.0);
  CHECK(testutil::same_bits(skew({1, 2, 3}), rows(0, -3, 2, 3, 0, -1, -2, 1, 0)));
  CHECK(testutil::same_bits(skew({1, 0, 0}) * Vec3{0, 1, 0}, Vec3{0, 0, 1}));
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 a = testutil::random_vec3(rng, -3, 3);
    const Vec3 b = testutil::random_vec3(rng, -3, 3);
    CHECK(testutil::max_abs_diff(skew(a) * b, cross(a, b)) < 1e-15);
  }
}

TEST_CASE("UnitQuaternion normalizes on construction and rejects zero", "[rotation]") {
  const UnitQuaternion q(Quat{3.0, {0.0, 4.0, 0.0}});
  CHECK(q.scalar() == Approx(0.6));
  CHECK(q.vector().y == Approx(0.8));
  CHECK(norm(q.value()) == Approx(1.0).margin(1e-15));
  CHECK_THROWS_AS(UnitQuaternion(Quat{0.0, {0.0, 0.0, 0.0}}), std::domain_error);
}

TEST_CASE("quat_to_matrix reproduces known rotations", "[rotation]") {
  CHECK(testutil::frobenius_diff(quat_to_matrix(UnitQuaternion{}), Mat3::identity()) == 0.0);

  const double h = std::sqrt(0.5);
  const Mat3 x90 = quat_to_matrix(UnitQuaternion(h, {h, 0, 0}));
  CHECK(testutil::frobenius_diff(x90, rows(1, 0, 0, 0, 0, -1, 0, 1, 0)) < 1e-15);

  const Mat3 z180 = quat_to_matrix(UnitQuaternion(0.0, {0, 0, 1}));
  CHECK(testutil::frobenius_diff(z180, rows(-1, 0, 0, 0, -1, 0, 0, 0, 1)) < 1e-15);
}

TEST_CASE("quat_to_matrix outputs are orthogonal with det +1", "[rotation]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const Mat3 r = quat_to_matrix(UnitQuaternion(testutil::random_unit_quat(rng)));
    REQUIRE(orthogonality_defect(r) < 1e-12);
    REQUIRE(determinant(r) > 0.0);
    REQUIRE(determinant(r) == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("double cover: q and -q give the bitwise-identical matrix", "[rotation]") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const Quat q = testutil::random_unit_quat(rng);
    const Quat neg{-q.s, -q.v};
    REQUIRE(testutil::same_bits(detail::rotation_matrix_unit_formula(q),
                                detail::rotation_matrix_unit_formula(neg)));
  }
}

TEST_CASE("hamilton satisfies the quaternion algebra", "[rotation]") {
  const Quat i{0, {1, 0, 0}}, j{0, {0, 1, 0}}, k{0, {0, 0, 1}}, one{1, {0, 0, 0}};
  CHECK(testutil::max_abs_diff(hamilton(one, j), j) == 0.0);
  CHECK(testutil::max_abs_diff(hamilton(i, i), Quat{-1, {0, 0, 0}}) == 0.0);
  CHECK(testutil::max_abs_diff(hamilton(i, j), k) == 0.0);
  CHECK(testutil::max_abs_diff(hamilton(j, k), i) == 0.0);
}

TEST_CASE("hamilton is a homomorphism onto rotation matrices", "[rotation]") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const Quat a = testutil::random_unit_quat(rng);
    const Quat b = testutil::random_unit_quat(rng);
    const Mat3 lhs = quat_to_matrix(UnitQuaternion(hamilton(a, b)));
    const Mat3 rhs = quat_to_matrix(UnitQuaternion(a)) * quat_to_matrix(UnitQuaternion(b));
    REQUIRE(testutil::frobenius_diff(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("quat_to_patch picks the dominant component's chart", "[rotation]") {
  const PatchRotation p0 = quat_to_patch(UnitQuaternion{});
  CHECK(p0.patch_index == 0);
  CHECK(testutil::same_bits(p0.x, Vec3{0, 0, 0}));

  // Negated identity: same patch, same coordinates by value (the chart
  // divides by the pivot's sign, which can only flip zero signs).
  const PatchRotation pneg = quat_to_patch(UnitQuaternion(-1.0, {0, 0, 0}));
  CHECK(pneg.patch_index == 0);
  CHECK(pneg.x.x == 0.0);
  CHECK(pneg.x.y == 0.0);
  CHECK(pneg.x.z == 0.0);

  const UnitQuaternion q(Quat{0.1, {0.2, -0.9, 0.3}});
  const PatchRotation p = quat_to_patch(q);
  CHECK(p.patch_index == 2);
  CHECK(p.x.x == Approx(-1.0 / 9.0).epsilon(1e-14));
  CHECK(p.x.y == Approx(-2.0 / 9.0).epsilon(1e-14));
  CHECK(p.x.z == Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(max_abs(p.x) <= 1.0);
}

TEST_CASE("quat_to_patch is antipode-invariant bitwise", "[rotation]") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 1000; ++trial) {
    const Quat q = testutil::random_unit_quat(rng);
    const PatchRotation a = quat_to_patch(UnitQuaternion(q));
    const PatchRotation b = quat_to_patch(UnitQuaternion(Quat{-q.s, -q.v}));
    REQUIRE(a.patch_index == b.patch_index);
    REQUIRE(testutil::same_bits(a.x, b.x));
  }
}

TEST_CASE("patch_to_quat normalizes the lift with a positive pivot", "[rotation]") {
  const UnitQuaternion a = patch_to_quat({0, {0, 0, 0}});
  CHECK(testutil::max_abs_diff(a.value(), Quat{1, {0, 0, 0}}) == 0.0);

  const UnitQuaternion b = patch_to_quat({0, {1, 0, 0}});
  CHECK(b.scalar() == Approx(std::sqrt(0.5)));
  CHECK(b.vector().x == Approx(std::sqrt(0.5)));

  const UnitQuaternion c = patch_to_quat({2, {0, 0, 1}});
  CHECK(c.vector().y == Approx(std::sqrt(0.5)));
  CHECK(c.vector().z == Approx(std::sqrt(0.5)));
  CHECK(c.scalar() == 0.0);
}

TEST_CASE("patch round-trips stay on the same rotation", "[rotation]") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const UnitQuaternion q(testutil::random_unit_quat(rng));
    const UnitQuaternion back = patch_to_quat(quat_to_patch(q));
    REQUIRE(geodesic_distance(back, q) < 1e-12);
  }
  // Chart-coordinate round trip through the quaternion and back, inside the
  // open unit box so the best patch is the original patch.
  for (int trial = 0; trial < 1000; ++trial) {
    const PatchRotation p{static_cast<int>(rng() & 3), testutil::random_vec3(rng, -0.99, 0.99)};
    const PatchRotation back = quat_to_patch(patch_to_quat(p));
    REQUIRE(back.patch_index == p.patch_index);
    REQUIRE(testutil::max_abs_diff(back.x, p.x) < 1e-13);
  }
}

TEST_CASE("patch_to_matrix agrees with the normalized path and known values",
          "[rotation]") {
  CHECK(testutil::frobenius_diff(patch_to_matrix({0, {0, 0, 0}}), Mat3::identity()) == 0.0);
  CHECK(testutil::frobenius_diff(patch_to_matrix({0, {1, 0, 0}}),
                                 rows(1, 0, 0, 0, 0, -1, 0, 1, 0)) < 1e-15);
  CHECK(testutil::frobenius_diff(patch_to_matrix({3, {0, 0, 0}}),
                                 rows(-1, 0, 0, 0, -1, 0, 0, 0, 1)) < 1e-15);

  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 1000; ++trial) {
    const PatchRotation p{static_cast<int>(rng() & 3), testutil::random_vec3(rng, -2, 2)};
    const Mat3 rational = patch_to_matrix(p);
    const Mat3 normalized = quat_to_matrix(patch_to_quat(p));
    REQUIRE(testutil::frobenius_diff(rational, normalized) < 1e-13);
    REQUIRE(orthogonality_defect(rational) < 1e-12);
    REQUIRE(determinant(rational) > 0.0);
  }
}

TEST_CASE("charts agree wherever they overlap", "[rotation]") {
  std::mt19937_64 rng(31);
  int tested = 0;
  while (tested < 1000) {
    const Quat q = testutil::random_unit_quat(rng);
    const std::array<double, 4> z = to_array(q);
    for (std::size_t i = 0; i < 4 && tested < 1000; ++i) {
      if (std::fabs(z[i]) < 0.1) continue;
      for (std::size_t j = i + 1; j < 4; ++j) {
        if (std::fabs(z[j]) < 0.1) continue;
        const HomogeneousPoint<3> hp{z};
        const PatchRotation pi{static_cast<int>(i), vec3_from_array(to_patch<3>(hp, i))};
        const PatchRotation pj{static_cast<int>(j), vec3_from_array(to_patch<3>(hp, j))};
        REQUIRE(testutil::frobenius_diff(patch_to_matrix(pi), patch_to_matrix(pj)) < 1e-12);
        ++tested;
      }
    }
  }
}

TEST_CASE("quat_exp_body produces axis-angle rotations", "[rotation]") {
  CHECK(testutil::max_abs_diff(quat_exp_body({0, 0, 0}, 1.0).value(), Quat{1, {0, 0, 0}}) ==
        0.0);

  const Quat z_pi = quat_exp_body({0, 0, std::numbers::pi}, 1.0).value();
  CHECK(testutil::max_abs_diff(z_pi, Quat{0, {0, 0, 1}}) < 1e-15);

  const Quat x_quarter = quat_exp_body({std::numbers::pi, 0, 0}, 0.5).value();
  CHECK(x_quarter.s == Approx(std::sqrt(0.5)));
  CHECK(x_quarter.v.x == Approx(std::sqrt(0.5)));
}

TEST_CASE("quat_exp_body small-angle branch is continuous and accurate", "[rotation]") {
  // Angles just below the series cutoff against the direct formula just
  // above it: the two branches must agree through the crossover.
  const Vec3 axis{0.6, -0.8, 0.0};
  const Quat below = quat_exp_body(axis, 0.99e-8).value();
  const Quat above = quat_exp_body(axis, 1.01e-8).value();
  CHECK(testutil::max_abs_diff(below, above) < 1e-10);
  CHECK(norm(below) == Approx(1.0).margin(1e-15));
  // Series branch: vector part is (t/2) omega to first order.
  const Quat tiny = quat_exp_body({1e-9, 0, 0}, 1e-3).value();
  CHECK(tiny.v.x == Approx(5e-13).epsilon(1e-12));
  CHECK(tiny.s == 1.0);
}

TEST_CASE("geodesic_distance measures rotation angle, antipode-invariant",
          "[rotation]") {
  const UnitQuaternion id{};
  const UnitQuaternion h(std::sqrt(0.5), {std::sqrt(0.5), 0, 0});
  CHECK(geodesic_distance(id, id) == 0.0);
  CHECK(geodesic_distance(h, h) == 0.0);
  CHECK(geodesic_distance(id, h) == Approx(std::numbers::pi / 2).epsilon(1e-14));

  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 500; ++trial) {
    const UnitQuaternion q(testutil::random_unit_quat(rng));
    const UnitQuaternion neg(Quat{-q.scalar(), -q.vector()});
    REQUIRE(geodesic_distance(q, neg) < 1e-7);  // same rotation
    // Agreement with the arccos form away from its accuracy cliff.
    const UnitQuaternion r(testutil::random_unit_quat(rng));
    const double d = std::fabs(dot(q.value(), r.value()));
    if (d < 0.99) {
      const double via_acos = 2.0 * std::acos(std::fmin(1.0, d));
      REQUIRE(geodesic_distance(q, r) == Approx(via_acos).margin(1e-10));
    }
  }
}

TEST_CASE("geodesic_distance resolves rotations far below the arccos floor",
          "[rotation]") {
  // Exact construction from the identity: the relative quaternion carries
  // the tiny angle directly, so the metric must report it to full relative
  // precision (arccos of the dot product would round all of these to 0).
  for (double angle : {1e-9, 1e-11, 1e-13}) {
    const UnitQuaternion moved = quat_exp_body({0, 0, 1}, angle);
    REQUIRE(geodesic_distance(UnitQuaternion{}, moved) == Approx(angle).epsilon(1e-9));
  }
  // Through a generic base attitude the products add ~1 ulp of absolute
  // noise; the measurement still lands within it.
  std::mt19937_64 rng(41);
  const UnitQuaternion q(testutil::random_unit_quat(rng));
  const double angle = 1e-11;
  const UnitQuaternion moved(hamilton(q.value(), quat_exp_body({0, 0, 1}, angle).value()));
  REQUIRE(geodesic_distance(q, moved) == Approx(angle).margin(1e-14));
}
