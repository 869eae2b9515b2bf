#include "precut/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace precut {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDegenerateInput: return "degenerate-input";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kNoFreeSpace: return "no-free-space";
    case ErrorCode::kSingular: return "singular";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kNonFinite: return "non-finite";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

bool is_finite(const Vec3& v) { return v.allFinite(); }

UnitVec3::UnitVec3(const Vec3& v) {
  const double n = v.norm();
  if (!std::isfinite(n) || n <= 0.0) {
    throw Error(ErrorCode::kDegenerateInput, "cannot normalize a zero or non-finite vector");
  }
  v_ = v / n;
}

UnitVec3 UnitVec3::operator-() const {
  UnitVec3 r;
  r.v_ = -v_;
  return r;
}

Rotation::Rotation(const Mat3& m, double tol) : m_(m) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "rotation matrix has non-finite entries");
  }
  if (orthonormality_error() > tol || std::abs(m.determinant() - 1.0) > tol) {
    throw Error(ErrorCode::kInvalidArgument, "matrix is not a proper rotation");
  }
}

Rotation Rotation::from_angle_axis(double angle, const UnitVec3& axis) {
  return Rotation(Eigen::AngleAxisd(angle, axis.vec()).toRotationMatrix(), Unchecked{});
}

Rotation Rotation::look_along(const UnitVec3& z, const Vec3& x_hint) {
  Vec3 x = x_hint - x_hint.dot(z.vec()) * z.vec();
  if (x.norm() < 1e-9) {
    // Hint parallel to z: pick any perpendicular.
    x = z.vec().unitOrthogonal();
  }
  x.normalize();
  Mat3 m;
  m.col(0) = x;
  m.col(1) = z.vec().cross(x);
  m.col(2) = z.vec();
  return Rotation(m, Unchecked{});
}

Rotation Rotation::integrated(const Vec3& omega, double dt) const {
  const Vec3 phi = omega * dt;
  const double angle = phi.norm();
  Mat3 next = m_;
  if (angle > 0.0) {
    next = Eigen::AngleAxisd(angle, phi / angle).toRotationMatrix() * m_;
  }
  // Re-project onto SO(3) to stop round-off drift from accumulating.
  Eigen::Quaterniond q(next);
  q.normalize();
  return Rotation(q.toRotationMatrix(), Unchecked{});
}

double Rotation::orthonormality_error() const {
  return (m_.transpose() * m_ - Mat3::Identity()).cwiseAbs().maxCoeff();
}

Vec6 Twist::stacked() const {
  Vec6 v;
  v << linear, angular;
  return v;
}

Twist Twist::from_stacked(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }

bool Twist::is_finite() const { return linear.allFinite() && angular.allFinite(); }

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return s;
}

AngleAxis angle_axis_between(const Vec3& a, const Vec3& b, const Tolerances& tol) {
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw Error(ErrorCode::kDegenerateInput, "angle_axis_between: zero-length input");
  }
  const Vec3 ua = a / na;
  const Vec3 ub = b / nb;
  const double c = std::clamp(ua.dot(ub), -1.0, 1.0);
  const Vec3 cross = skew(ua) * ub;
  const double s = cross.norm();

  AngleAxis out;
  if (s < tol.degeneracy) {
    if (c > 0.0) {
      out.theta = 0.0;
      out.axis = UnitVec3::z();
      out.condition = AxisCondition::kParallel;
    } else {
      out.theta = std::numbers::pi;
      out.axis = UnitVec3(ua.unitOrthogonal());
      out.condition = AxisCondition::kAntiParallel;
    }
    return out;
  }
  // atan2 keeps full precision near 0 and pi where acos does not.
  out.theta = std::atan2(s, c);
  out.axis = UnitVec3(cross / s);
  return out;
}

Vec3 project_onto_sphere(const Vec3& p, const Vec3& center, double radius) {
  if (!(radius > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "project_onto_sphere: radius must be positive");
  }
  const Vec3 d = p - center;
  const double n = d.norm();
  if (!(n > 0.0)) {
    throw Error(ErrorCode::kDegenerateInput, "project_onto_sphere: point coincides with center");
  }
  return center + d * (radius / n);
}

}  // namespace precut
