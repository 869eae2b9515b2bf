#include "precut/camera_control.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace precut {

namespace {

bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x() != b.x()) return a.x() < b.x();
  if (a.y() != b.y()) return a.y() < b.y();
  return a.z() < b.z();
}

std::vector<std::size_t> lex_order(const std::vector<Vec3>& pts) {
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return lex_less(pts[a], pts[b]); });
  return idx;
}

}  // namespace

Twist reaching_centering_twist(const Vec3& p_c, const UnitVec3& z_c, const RoiSpec& roi,
                               const ReachGains& gains) {
  const Vec3 e = roi.center - p_c;
  const double f = e.squaredNorm() - roi.radius * roi.radius;

  Twist out;
  out.linear = gains.k_cp * std::max(0.0, f) * e;
  if (e.norm() > 0.0) {
    const AngleAxis aa = angle_axis_between(z_c.vec(), e);
    // theta ~ 0 leaves the axis undefined, but theta * k vanishes anyway.
    if (aa.condition != AxisCondition::kParallel && aa.theta >= 1e-9) {
      out.angular = gains.k_co * aa.theta * aa.axis.vec();
    }
  }
  return out;
}

RayObstaclePair nearest_point_on_ray(const Vec3& p_c, const Vec3& p_s, const Vec3& p_o,
                                     double d_o, double d_a) {
  const Vec3 cs = p_s - p_c;
  const double len = cs.norm();
  if (!(len > 0.0)) {
    throw Error(ErrorCode::kDegenerateInput, "nearest_point_on_ray: stem point at camera");
  }
  const Vec3 co = p_o - p_c;
  const double proj = cs.dot(co) / len;

  RayObstaclePair pair;
  if (proj <= 0.0) {
    pair.p_hat = p_c;
    pair.ray_case = RayCase::kAtCamera;
  } else if (proj < len) {
    pair.p_hat = p_c + cs * (cs.dot(co) / cs.squaredNorm());
    pair.ray_case = RayCase::kInterior;
  } else {
    pair.p_hat = p_s;
    pair.ray_case = RayCase::kAtStem;
  }
  const Vec3 away = pair.p_hat - p_o;
  const double dist = away.norm();
  pair.r_hat = dist - d_o;
  if (dist > 0.0) pair.e = (d_a - pair.r_hat) * away / dist;
  return pair;
}

double barrier_potential(double r_hat, double d_a) {
  if (!(r_hat > 0.0)) {
    throw Error(ErrorCode::kDomain, "barrier_potential: r_hat must be positive (obstacle contact)");
  }
  if (r_hat >= d_a) return 0.0;
  const double gap = d_a - r_hat;
  const double log_ratio = std::log(d_a * d_a / (d_a * d_a - gap * gap));
  return 0.5 * log_ratio * log_ratio;
}

Vec3 repulsive_velocity(const RayObstaclePair& pair, const Vec3& p_o, double d_a) {
  if (!(pair.r_hat > 0.0)) {
    throw Error(ErrorCode::kDomain, "repulsive_velocity: r_hat must be positive (obstacle contact)");
  }
  if (pair.r_hat >= d_a) return Vec3::Zero();
  const double gap = d_a - pair.r_hat;
  const double denom = d_a * d_a - gap * gap;
  const Vec3 away = pair.p_hat - p_o;
  const Vec3 e = gap * away / away.norm();
  return (2.0 / denom) * std::log(d_a * d_a / denom) * e;
}

Vec3 pivot_angular_velocity(const RayObstaclePair& pair, const Vec3& p_s, const Vec3& u,
                            double pivot_eps) {
  if (pair.ray_case != RayCase::kInterior) return Vec3::Zero();
  const Vec3 lever = pair.p_hat - p_s;
  const double n2 = lever.squaredNorm();
  if (n2 < pivot_eps * pivot_eps) return Vec3::Zero();
  return skew(lever) * u / n2;
}

Twist unveiling_twist(const Vec3& p_c, const std::vector<Vec3>& stem_pts,
                      const std::vector<Vec3>& obstacle_pts, const UnveilParams& params,
                      UnveilStats* stats) {
  UnveilStats local;
  Twist total;
  if (stem_pts.empty()) {
    if (stats) *stats = local;
    return total;
  }
  const double reach = params.d_o + params.d_a;
  std::vector<std::size_t> active;

  for (const std::size_t j : lex_order(stem_pts)) {
    const Vec3& p_s = stem_pts[j];
    const Vec3 cs = p_s - p_c;
    const double len2 = cs.squaredNorm();
    if (!(len2 > 0.0)) continue;

    active.clear();
    bool in_contact = false;
    for (std::size_t k = 0; k < obstacle_pts.size(); ++k) {
      // Cheap reject: the ray cannot come within d_o + d_a of this point.
      const Vec3 co = obstacle_pts[k] - p_c;
      const double t = std::clamp(cs.dot(co) / len2, 0.0, 1.0);
      if ((co - t * cs).squaredNorm() >= reach * reach) continue;
      active.push_back(k);
    }
    std::stable_sort(active.begin(), active.end(), [&](std::size_t a, std::size_t b) {
      return lex_less(obstacle_pts[a], obstacle_pts[b]);
    });

    Vec3 omega_j = Vec3::Zero();
    std::size_t n_active = 0;
    std::size_t clamps = 0;
    for (const std::size_t k : active) {
      const Vec3& p_o = obstacle_pts[k];
      const RayObstaclePair pair = nearest_point_on_ray(p_c, p_s, p_o, params.d_o, params.d_a);
      if (pair.r_hat <= 0.0) {
        in_contact = true;
        break;
      }
      if (pair.r_hat >= params.d_a) continue;
      ++n_active;
      const Vec3 u = repulsive_velocity(pair, p_o, params.d_a);
      if (pair.ray_case == RayCase::kInterior && (pair.p_hat - p_s).norm() < 1e-9) ++clamps;
      omega_j += pivot_angular_velocity(pair, p_s, u);
    }
    if (in_contact) {
      ++local.contact_skipped;
      continue;
    }
    local.active_pairs += n_active;
    local.pivot_clamps += clamps;
    total.linear += skew(cs) * omega_j;
    total.angular += omega_j;
  }
  total.linear *= params.k_c;
  total.angular *= params.k_c;
  if (stats) *stats = local;
  return total;
}

Twist saturate(const Twist& t, const TwistLimits& limits) {
  Twist out = t;
  const double vl = t.linear.norm();
  if (vl > limits.linear) out.linear *= limits.linear / vl;
  const double va = t.angular.norm();
  if (va > limits.angular) out.angular *= limits.angular / va;
  return out;
}

Twist camera_twist(const Twist& reach, const Twist& unveil, const TwistLimits& limits) {
  return saturate(reach + unveil, limits);
}

const Twist& TwistFilter::update(const Twist& input, double dt) {
  if (tau_ <= 0.0) {
    state_ = input;
  } else {
    const double a = std::min(1.0, dt / tau_);
    state_.linear += a * (input.linear - state_.linear);
    state_.angular += a * (input.angular - state_.angular);
  }
  return state_;
}

}  // namespace precut
