#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "precut/error.hpp"

namespace precut {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

struct Tolerances {
  double orthonormality = 1e-9;
  double degeneracy = 1e-12;
};

inline constexpr Tolerances kDefaultTolerances{};

bool is_finite(const Vec3& v);

// A direction with norm 1. Construction normalizes; zero or non-finite input
// throws kDegenerateInput.
class UnitVec3 {
 public:
  UnitVec3() : v_(Vec3::UnitZ()) {}
  explicit UnitVec3(const Vec3& v);

  static UnitVec3 x() { return UnitVec3(Vec3::UnitX()); }
  static UnitVec3 y() { return UnitVec3(Vec3::UnitY()); }
  static UnitVec3 z() { return UnitVec3(Vec3::UnitZ()); }

  const Vec3& vec() const { return v_; }
  operator const Vec3&() const { return v_; }
  double operator[](int i) const { return v_[i]; }
  UnitVec3 operator-() const;

 private:
  Vec3 v_;
};

// Element of SO(3), stored as the matrix [x y z] of frame axes.
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}
  // Validates orthonormality and det = +1 within `tol`.
  explicit Rotation(const Mat3& m, double tol = kDefaultTolerances.orthonormality);

  static Rotation identity() { return Rotation(); }
  static Rotation from_angle_axis(double angle, const UnitVec3& axis);
  // Frame whose z axis is `z` and whose x axis is as close as possible to
  // `x_hint` (projected onto the plane orthogonal to z).
  static Rotation look_along(const UnitVec3& z, const Vec3& x_hint);

  const Mat3& matrix() const { return m_; }
  UnitVec3 x() const { return UnitVec3(m_.col(0)); }
  UnitVec3 y() const { return UnitVec3(m_.col(1)); }
  UnitVec3 z() const { return UnitVec3(m_.col(2)); }

  // Left-multiplies by exp(S(omega)) and re-projects onto SO(3).
  Rotation integrated(const Vec3& omega, double dt) const;

  // Largest entry of |R^T R - I|.
  double orthonormality_error() const;

 private:
  struct Unchecked {};
  Rotation(const Mat3& m, Unchecked) : m_(m) {}
  Mat3 m_;
};

struct Pose {
  Vec3 position = Vec3::Zero();
  Rotation orientation;
};

// End-effector velocity, stacked [linear; angular].
struct Twist {
  Vec3 linear = Vec3::Zero();
  Vec3 angular = Vec3::Zero();

  static Twist zero() { return {}; }
  Vec6 stacked() const;
  static Twist from_stacked(const Vec6& v);
  bool is_finite() const;
  bool is_zero() const { return linear.isZero(0.0) && angular.isZero(0.0); }

  Twist operator+(const Twist& o) const { return {linear + o.linear, angular + o.angular}; }
  Twist operator*(double s) const { return {linear * s, angular * s}; }
};

Mat3 skew(const Vec3& v);

enum class AxisCondition {
  kRegular,
  kParallel,      // theta = 0, axis is an arbitrary fixed direction
  kAntiParallel,  // theta = pi, axis is an arbitrary perpendicular direction
};

struct AngleAxis {
  double theta = 0.0;
  UnitVec3 axis;
  AxisCondition condition = AxisCondition::kRegular;
};

// Minimum rotation taking the direction of `a` onto the direction of `b`.
// Throws kDegenerateInput for zero-length inputs.
AngleAxis angle_axis_between(const Vec3& a, const Vec3& b,
                             const Tolerances& tol = kDefaultTolerances);

// Radial projection of `p` onto the sphere S(center, radius).
Vec3 project_onto_sphere(const Vec3& p, const Vec3& center, double radius);

}  // namespace precut
