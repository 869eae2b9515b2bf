#pragma once

#include "precut/core.hpp"

namespace precut {

struct GraspGains {
  double k_pg = 0.15;
  double k_fp = 0.001;
  double k_fi = 0.0002;
  double k_og = 0.3;
  double f_d = 3.0;             // desired stretching force, N
  double integral_limit = 50.0;  // anti-windup bound on the force-error integral, N*s
};

// Mutable part of the grasp controller. The integral survives target updates.
struct GraspState {
  double integral_e_f = 0.0;
  UnitVec3 n_c;
  Vec3 p_gd = Vec3::Zero();
};

// Unit direction from the stem base to the free-space target.
UnitVec3 control_direction(const Vec3& p_gd, const Vec3& p_sb);

// Position control restricted to the plane orthogonal to n_c.
Vec3 position_velocity(const Vec3& p_g, const Vec3& p_gd, const UnitVec3& n_c, double k_pg);

// PI force control along n_c. Advances state.integral_e_f by e_f * dt (clamped)
// after computing the command from the current integral.
Vec3 force_velocity(const Vec3& f, const UnitVec3& n_c, GraspState& state, const GraspGains& gains,
                    double dt);

// Rotates y_g toward n_c.
Vec3 orientation_velocity(const UnitVec3& y_g, const UnitVec3& n_c, double k_og);

Twist grasp_twist(const Vec3& v_p, const Vec3& v_f, const Vec3& v_gw);

}  // namespace precut
