#pragma once

#include <cstddef>
#include <vector>

#include "precut/core.hpp"

namespace precut {

// Region of interest: sphere S(center, radius). reach_bound is reported, never
// used by the control law.
struct RoiSpec {
  Vec3 center = Vec3::Zero();
  double radius = 0.35;
  double reach_bound = 0.35;
};

struct ReachGains {
  double k_cp = 1.0;
  double k_co = 1.0;
};

struct UnveilParams {
  double d_o = 0.001;  // obstacle point radius
  double d_a = 0.01;   // influence distance from the obstacle surface
  double k_c = 0.00025;
  double filter_tau = 0.1;
};

struct TwistLimits {
  double linear = 0.1;   // m/s
  double angular = 0.5;  // rad/s
};

// Which branch of the closest-point rule produced p_hat.
enum class RayCase {
  kAtCamera,  // projection <= 0
  kInterior,  // projection strictly inside the segment
  kAtStem,    // projection >= segment length
};

struct RayObstaclePair {
  Vec3 p_hat = Vec3::Zero();
  double r_hat = 0.0;  // |p_hat - p_o| - d_o
  Vec3 e = Vec3::Zero();
  RayCase ray_case = RayCase::kAtCamera;
};

// Region-reaching translation plus centering rotation of z_c onto p_r - p_c.
Twist reaching_centering_twist(const Vec3& p_c, const UnitVec3& z_c, const RoiSpec& roi,
                               const ReachGains& gains);

// Closest point to p_o on the segment [p_c, p_s]. Throws kDegenerateInput when
// p_s == p_c.
RayObstaclePair nearest_point_on_ray(const Vec3& p_c, const Vec3& p_s, const Vec3& p_o,
                                     double d_o = 0.001, double d_a = 0.01);

// Barrier potential 0.5 * ln^2(d_a^2 / (d_a^2 - (d_a - r_hat)^2)) inside the
// influence band, zero outside. Throws kDomain for r_hat <= 0.
double barrier_potential(double r_hat, double d_a);

// Negative gradient of the barrier potential w.r.t. p_hat.
Vec3 repulsive_velocity(const RayObstaclePair& pair, const Vec3& p_o, double d_a);

// Angular velocity about p_s induced by u acting at p_hat (interior case
// only). Returns zero when |p_hat - p_s| < pivot_eps.
Vec3 pivot_angular_velocity(const RayObstaclePair& pair, const Vec3& p_s, const Vec3& u,
                            double pivot_eps = 1e-9);

struct UnveilStats {
  std::size_t active_pairs = 0;     // pairs inside the influence band
  std::size_t pivot_clamps = 0;     // interior pairs with p_hat at the pivot
  std::size_t contact_skipped = 0;  // stem points whose ray touches an obstacle sphere
};

// Superimposed unveiling twist over all stem rays and obstacle points. A stem
// point whose ray already penetrates an obstacle sphere (r_hat <= 0) is not
// visible by definition and contributes nothing. Contributions are summed in
// lexicographic order of the points, so the result does not depend on input
// order.
Twist unveiling_twist(const Vec3& p_c, const std::vector<Vec3>& stem_pts,
                      const std::vector<Vec3>& obstacle_pts, const UnveilParams& params,
                      UnveilStats* stats = nullptr);

// Uniform scaling of the linear and angular parts to their limits.
Twist saturate(const Twist& t, const TwistLimits& limits);

Twist camera_twist(const Twist& reach, const Twist& unveil, const TwistLimits& limits);

// First-order low-pass filter: y += min(1, dt/tau) * (x - y); tau = 0 passes
// the input through.
class TwistFilter {
 public:
  explicit TwistFilter(double tau = 0.1) : tau_(tau) {}
  const Twist& update(const Twist& input, double dt);
  const Twist& value() const { return state_; }
  void reset(const Twist& value = Twist::zero()) { state_ = value; }

 private:
  double tau_;
  Twist state_;
};

}  // namespace precut
