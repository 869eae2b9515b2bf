#include "precut/grasp_control.hpp"

#include <algorithm>

namespace precut {

UnitVec3 control_direction(const Vec3& p_gd, const Vec3& p_sb) {
  const Vec3 d = p_gd - p_sb;
  if (!(d.norm() > 0.0)) {
    throw Error(ErrorCode::kDegenerateInput, "control_direction: target coincides with stem base");
  }
  return UnitVec3(d);
}

Vec3 position_velocity(const Vec3& p_g, const Vec3& p_gd, const UnitVec3& n_c, double k_pg) {
  const Vec3 e = p_g - p_gd;
  const Vec3& n = n_c.vec();
  // (I - n n^T) e, written so the result is orthogonal to n to round-off.
  Vec3 orth = e - n.dot(e) * n;
  orth -= n.dot(orth) * n;
  return -k_pg * orth;
}

Vec3 force_velocity(const Vec3& f, const UnitVec3& n_c, GraspState& state, const GraspGains& gains,
                    double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "force_velocity: dt must be positive");
  const double e_f = n_c.vec().dot(f) - gains.f_d;
  const Vec3 v = -(gains.k_fp * e_f + gains.k_fi * state.integral_e_f) * n_c.vec();
  state.integral_e_f =
      std::clamp(state.integral_e_f + e_f * dt, -gains.integral_limit, gains.integral_limit);
  return v;
}

Vec3 orientation_velocity(const UnitVec3& y_g, const UnitVec3& n_c, double k_og) {
  return -k_og * n_c.vec().cross(y_g.vec());
}

Twist grasp_twist(const Vec3& v_p, const Vec3& v_f, const Vec3& v_gw) {
  return {v_p + v_f, v_gw};
}

}  // namespace precut
