#include <cmath>
#include <random>

#include "doctest.h"
#include "precut/grasp_control.hpp"

using namespace precut;

namespace {

UnitVec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return UnitVec3(Vec3(g(rng), g(rng), g(rng)));
}

double angle(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace

TEST_CASE("control_direction") {
  const UnitVec3 n = control_direction(Vec3(0, -0.07, 1), Vec3(0, 0, 1));
  CHECK((n.vec() - Vec3(0, -1, 0)).norm() < 1e-15);
  CHECK_THROWS_AS(control_direction(Vec3(1, 1, 1), Vec3(1, 1, 1)), Error);
}

TEST_CASE("position_velocity examples") {
  const UnitVec3 n = UnitVec3::z();
  CHECK(position_velocity(Vec3(0, 0, 0.3), Vec3::Zero(), n, 0.15).norm() == 0.0);
  const Vec3 v = position_velocity(Vec3(0.02, -0.01, 0.3), Vec3::Zero(), n, 0.15);
  CHECK((v - Vec3(-0.003, 0.0015, 0)).norm() < 1e-15);
}

TEST_CASE("force_velocity: PI law along n_c") {
  GraspGains g;
  GraspState s;
  s.n_c = UnitVec3::z();
  // At the set point with a settled integral the command vanishes.
  CHECK(force_velocity(Vec3(0.4, -0.2, 3.0), s.n_c, s, g, 0.002).norm() == 0.0);

  // Below the set point the gripper moves along +n_c to stretch the stem.
  s.integral_e_f = 0.0;
  const Vec3 v = force_velocity(Vec3(0, 0, 1.0), s.n_c, s, g, 0.002);
  CHECK((v - Vec3(0, 0, 0.002)).norm() < 1e-15);
  CHECK(s.integral_e_f == doctest::Approx(-2.0 * 0.002));
  const Vec3 v2 = force_velocity(Vec3(0, 0, 1.0), s.n_c, s, g, 0.002);
  CHECK(v2.z() == doctest::Approx(0.002 + 0.0002 * 0.004).epsilon(1e-12));

  // Anti-windup.
  for (int i = 0; i < 100000; ++i) force_velocity(Vec3::Zero(), s.n_c, s, g, 0.01);
  CHECK(s.integral_e_f == -g.integral_limit);
  CHECK_THROWS_AS(force_velocity(Vec3::Zero(), s.n_c, s, g, 0.0), Error);
}

TEST_CASE("orientation_velocity examples") {
  CHECK(orientation_velocity(UnitVec3::z(), UnitVec3::z(), 0.3).norm() == 0.0);
  const Vec3 w = orientation_velocity(UnitVec3::y(), UnitVec3::z(), 0.3);
  CHECK((w - Vec3(0.3, 0, 0)).norm() < 1e-15);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const UnitVec3 y = random_unit(rng), n = random_unit(rng);
    CHECK(orientation_velocity(y, n, 0.3).norm() ==
          doctest::Approx(0.3 * std::sin(angle(y.vec(), n.vec()))).epsilon(1e-9));
  }
}

TEST_CASE("grasp_twist") {
  CHECK(grasp_twist(Vec3::Zero(), Vec3::Zero(), Vec3::Zero()).is_zero());
  const Vec3 v_p(0.01, 0.02, 0), v_f(0, 0, 0.03), w(0.1, 0, 0);
  const Twist t = grasp_twist(v_p, v_f, w);
  CHECK(t.linear.squaredNorm() == doctest::Approx(v_p.squaredNorm() + v_f.squaredNorm()));
  CHECK(t.angular == w);
}

TEST_CASE("position and force commands are orthogonal/parallel to n_c") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GraspGains g;
  for (int i = 0; i < 10000; ++i) {
    GraspState s;
    s.n_c = random_unit(rng);
    s.integral_e_f = 10.0 * u(rng);
    const Vec3 p_g(u(rng), u(rng), u(rng)), p_gd(u(rng), u(rng), u(rng)), f(5 * u(rng), 5 * u(rng), 5 * u(rng));
    const Vec3 v_p = position_velocity(p_g, p_gd, s.n_c, g.k_pg);
    const Vec3 v_f = force_velocity(f, s.n_c, s, g, 0.002);
    CHECK(std::abs(v_p.dot(s.n_c.vec())) <= 1e-12);
    CHECK(v_f.cross(s.n_c.vec()).norm() <= 1e-12);
  }
}

TEST_CASE("alignment angle decreases strictly under the kinematics") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const UnitVec3 n = random_unit(rng);
    Rotation r = Rotation::from_angle_axis(3.0 * (trial + 1) / 21.0, random_unit(rng));
    double prev = angle(r.y().vec(), n.vec());
    for (int k = 0; k < 20000 && prev > 1e-9; ++k) {
      r = r.integrated(orientation_velocity(r.y(), n, 0.3), 0.002);
      const double a = angle(r.y().vec(), n.vec());
      CHECK(a < prev + 1e-9);
      if (a > 1e-6) CHECK(a < prev);
      prev = a;
    }
    CHECK(prev < 1e-3);
  }
}
