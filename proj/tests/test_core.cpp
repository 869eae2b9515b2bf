#include <cmath>
#include <random>

#include "doctest.h"
#include "precut/core.hpp"

using namespace precut;

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec3 random_vec(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

// Rodrigues' formula, written out independently of the library.
Vec3 rotate(const Vec3& v, double theta, const Vec3& k) {
  return v * std::cos(theta) + k.cross(v) * std::sin(theta) +
         k * k.dot(v) * (1.0 - std::cos(theta));
}

}  // namespace

TEST_CASE("skew matches the cross product") {
  CHECK((skew(Vec3(0, 0, 1)) * Vec3(1, 0, 0) - Vec3(0, 1, 0)).norm() == 0.0);
  const Vec3 v(0.3, -1.2, 2.5);
  CHECK((skew(v) * v).norm() < 1e-15);
  CHECK((skew(Vec3(1, 2, 3)) * Vec3(4, 5, 6) - Vec3(-3, 6, -3)).norm() == 0.0);
  CHECK((skew(v).transpose() + skew(v)).norm() == 0.0);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const Vec3 a = random_vec(rng), b = random_vec(rng);
    CHECK((skew(a) * b + skew(b) * a).norm() < 1e-15);
  }
}

TEST_CASE("angle_axis_between examples") {
  const AngleAxis par = angle_axis_between(Vec3(0, 0, 1), Vec3(0, 0, 2));
  CHECK(par.theta == doctest::Approx(0.0));
  CHECK(par.condition == AxisCondition::kParallel);

  const AngleAxis q = angle_axis_between(Vec3(0, 0, 1), Vec3(1, 0, 1));
  CHECK(q.theta == doctest::Approx(kPi / 4).epsilon(1e-12));
  CHECK((q.axis.vec() - Vec3(0, 1, 0)).norm() < 1e-12);

  const AngleAxis h = angle_axis_between(Vec3(0, 0, 1), Vec3(1, 0, 0));
  CHECK(h.theta == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK((h.axis.vec() - Vec3(0, 1, 0)).norm() < 1e-12);

  const AngleAxis anti = angle_axis_between(Vec3(0, 0, 1), Vec3(0, 0, -3));
  CHECK(anti.condition == AxisCondition::kAntiParallel);
  CHECK(anti.theta == doctest::Approx(kPi));
  CHECK(std::abs(anti.axis.vec().dot(Vec3(0, 0, 1))) < 1e-12);

  CHECK_THROWS_AS(angle_axis_between(Vec3::Zero(), Vec3(1, 0, 0)), Error);
}

TEST_CASE("angle_axis_between rotates a onto b") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 a = random_vec(rng), b = random_vec(rng);
    const AngleAxis aa = angle_axis_between(a, b);
    REQUIRE(aa.condition == AxisCondition::kRegular);
    const Vec3 r = rotate(a.normalized(), aa.theta, aa.axis.vec());
    CHECK((r - b.normalized()).norm() < 1e-9);
  }
}

TEST_CASE("project_onto_sphere") {
  CHECK((project_onto_sphere(Vec3(2, 0, 0), Vec3::Zero(), 1.0) - Vec3(1, 0, 0)).norm() == 0.0);
  const Vec3 on(0.6, 0.8, 0.0);
  CHECK((project_onto_sphere(on, Vec3::Zero(), 1.0) - on).norm() < 1e-15);
  const Vec3 p = project_onto_sphere(Vec3(1, 1, 0), Vec3::Zero(), 0.0631);
  CHECK((p - 0.0631 * Vec3(1, 1, 0) / std::sqrt(2.0)).norm() < 1e-15);
  CHECK_THROWS_AS(project_onto_sphere(Vec3(1, 2, 3), Vec3(1, 2, 3), 1.0), Error);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Vec3 c = random_vec(rng), q = random_vec(rng, 5.0);
    const Vec3 once = project_onto_sphere(q, c, 0.07);
    CHECK((project_onto_sphere(once, c, 0.07) - once).norm() < 1e-12);
    CHECK((once - c).norm() == doctest::Approx(0.07).epsilon(1e-12));
  }
}

TEST_CASE("UnitVec3 and Rotation validation") {
  CHECK_THROWS_AS(UnitVec3(Vec3::Zero()), Error);
  CHECK_THROWS_AS(UnitVec3(Vec3(NAN, 0, 0)), Error);
  CHECK(UnitVec3(Vec3(3, 4, 0)).vec().norm() == doctest::Approx(1.0).epsilon(1e-15));

  Mat3 reflect = Mat3::Identity();
  reflect(2, 2) = -1.0;
  CHECK_THROWS_AS(Rotation{reflect}, Error);
  CHECK_THROWS_AS(Rotation{Mat3::Identity() * 1.01}, Error);

  const Rotation r = Rotation::look_along(UnitVec3(Vec3(0, 1, 0)), Vec3(1, 0, 0.3));
  CHECK((r.z().vec() - Vec3(0, 1, 0)).norm() < 1e-12);
  CHECK(r.x().vec().dot(Vec3(1, 0, 0)) > 0.9);
  CHECK(r.orthonormality_error() < 1e-12);
}

TEST_CASE("Rotation integration: half turn about z") {
  const double omega = 0.5;
  const double dt = 0.002;
  const int steps = static_cast<int>(std::lround(kPi / omega / dt));
  Rotation r;
  // The last step is shortened so the total time is exactly pi / omega.
  for (int i = 0; i < steps - 1; ++i) r = r.integrated(Vec3(0, 0, omega), dt);
  r = r.integrated(Vec3(0, 0, omega), kPi / omega - (steps - 1) * dt);
  Mat3 expected = Mat3::Identity();
  expected(0, 0) = -1.0;
  expected(1, 1) = -1.0;
  CHECK((r.matrix() - expected).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("Rotation integration keeps orthonormality over 1e6 steps") {
  Rotation r;
  const Vec3 omega(0.31, -0.47, 0.22);
  for (int i = 0; i < 1000000; ++i) r = r.integrated(omega, 0.002);
  CHECK(r.orthonormality_error() <= 1e-9);
  CHECK(r.matrix().determinant() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Twist stacking") {
  const Twist t{Vec3(1, 2, 3), Vec3(4, 5, 6)};
  const Vec6 s = t.stacked();
  CHECK(s(0) == 1.0);
  CHECK(s(5) == 6.0);
  const Twist back = Twist::from_stacked(s);
  CHECK(back.linear == t.linear);
  CHECK(back.angular == t.angular);
  CHECK(t.is_finite());
  CHECK_FALSE(Twist{Vec3(INFINITY, 0, 0), Vec3::Zero()}.is_finite());
}
