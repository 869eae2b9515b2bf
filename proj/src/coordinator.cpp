#include "precut/coordinator.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace precut {

void PhaseState::enter_bimanual(double t) {
  if (phase_ == Phase::kBimanual) return;
  phase_ = Phase::kBimanual;
  transition_time_ = t;
}

bool check_transition(const Vec3& p_c, const RoiSpec& roi, const Twist& tip_twist,
                      const ThresholdSpec& thresholds) {
  return (roi.center - p_c).norm() <= thresholds.dist_factor * roi.radius &&
         tip_twist.linear.norm() <= thresholds.v_lin_max &&
         tip_twist.angular.norm() <= thresholds.v_ang_max;
}

Vec3 smooth_target(SmoothedTarget& state, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "smooth_target: dt must be positive");
  if (state.tau <= 0.0) {
    state.filtered = state.raw;
  } else {
    state.filtered += std::min(1.0, dt / state.tau) * (state.raw - state.filtered);
  }
  return state.filtered;
}

Twist couple_velocities(const Twist& camera, const Vec3& v_gt, const Vec3& p_c, const Vec3& p_sb) {
  return {camera.linear + v_gt, camera.angular + skew(p_c - p_sb) * v_gt};
}

JointVector joint_velocities(const ArmModel& arm, const Twist& twist, double damping) {
  if (damping < 0.0) throw Error(ErrorCode::kInvalidArgument, "damping must be non-negative");
  const Jacobian j = arm.jacobian();
  const Vec6 v = twist.stacked();
  if (damping == 0.0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(j);
    const auto& s = svd.singularValues();
    if (j.cols() < 6 || s.size() < 6 || !(s(5) > 1e-12 * std::max(s(0), 1e-300))) {
      throw Error(ErrorCode::kSingular, "Jacobian is rank deficient; use damping > 0");
    }
    const Eigen::Matrix<double, 6, 6> jjt = j * j.transpose();
    return j.transpose() * jjt.ldlt().solve(v);
  }
  const Eigen::Matrix<double, 6, 6> a =
      j * j.transpose() + damping * damping * Eigen::Matrix<double, 6, 6>::Identity();
  return j.transpose() * a.ldlt().solve(v);
}

Coordinator::Coordinator(const ControlParams& params, const Vec3& initial_roi_center)
    : params_(params), unveil_filter_(params.unveil.filter_tau) {
  roi_.raw = initial_roi_center;
  roi_.filtered = initial_roi_center;
  roi_.tau = params.roi_filter_tau;
}

void Coordinator::observe(const LabeledCloud& cloud, const Vec3& gripper_pos) {
  last_cloud_ = cloud;
  stem_pts_ = cloud.select(Label::kStem);
  other_pts_ = cloud.select(Label::kOther);
  if (stem_ || phase_.phase() != Phase::kCameraOnly) return;
  if (stem_pts_.size() < std::max<std::size_t>(4, params_.min_stem_points)) return;
  try {
    stem_ = build_stem_model(stem_pts_, gripper_pos);
    roi_.raw = stem_->base;
  } catch (const Error&) {
    // Not enough geometry yet; retry on the next frame.
  }
}

void Coordinator::enter_bimanual(double t, const Vec3& p_c, const Vec3& p_g) {
  if (stem_pts_.size() >= std::max<std::size_t>(4, params_.min_stem_points)) {
    try {
      stem_ = build_stem_model(stem_pts_, p_g);
    } catch (const Error&) {
      // Keep the first estimate.
    }
  }
  const Vec3 p_sb = stem_->base;
  const double l = stem_->l;
  grasp_obstacles_ =
      select_obstacles(last_cloud_, p_sb, params_.r_o_factor * l, l, params_.unveil.d_o);
  free_space_ = compute_free_space(*grasp_obstacles_, p_sb, l, p_c, params_.lattice_n);
  grasp_.p_gd = free_space_->target;
  grasp_.n_c = control_direction(grasp_.p_gd, p_sb);
  roi_.raw = p_sb;
  phase_.enter_bimanual(t);
}

StepCommands Coordinator::update(double t, double dt, const Pose& camera, const Pose& gripper,
                                 const Vec3& measured_force) {
  const Vec3& p_c = camera.position;
  smooth_target(roi_, dt);
  const RoiSpec roi{roi_.filtered, params_.roi_radius, params_.roi_radius};

  StepCommands out;
  out.camera_reach = reaching_centering_twist(p_c, camera.orientation.z(), roi, params_.reach);
  const Twist unveil_raw =
      unveiling_twist(p_c, stem_pts_, other_pts_, params_.unveil, &last_unveil_);
  out.camera_unveil = unveil_filter_.update(unveil_raw, dt);
  out.camera = camera_twist(out.camera_reach, out.camera_unveil, params_.limits);

  if (phase_.phase() == Phase::kCameraOnly) {
    if (stem_ && check_transition(p_c, roi, out.camera, params_.thresholds)) {
      enter_bimanual(t, p_c, gripper.position);
      out.transitioned = true;
    }
    return out;
  }

  const Vec3 v_p =
      position_velocity(gripper.position, grasp_.p_gd, grasp_.n_c, params_.grasp.k_pg);
  const Vec3 v_f = force_velocity(measured_force, grasp_.n_c, grasp_, params_.grasp, dt);
  const Vec3 v_w = orientation_velocity(gripper.orientation.y(), grasp_.n_c, params_.grasp.k_og);
  out.grasp = grasp_twist(v_p, v_f, v_w);
  out.camera = couple_velocities(out.camera, out.grasp.linear, p_c, stem_->base);
  return out;
}

StepDiagnostics Coordinator::diagnostics(const Pose& camera, const Pose& gripper,
                                         const Vec3& measured_force) const {
  StepDiagnostics d;
  const Vec3 e = roi_.filtered - camera.position;
  d.roi_dist = e.norm();
  d.theta = d.roi_dist > 0.0 ? angle_axis_between(camera.orientation.z().vec(), e).theta : 0.0;
  d.unveil = last_unveil_;
  if (phase_.phase() == Phase::kBimanual) {
    const Vec3& n = grasp_.n_c.vec();
    d.force_along_nc = n.dot(measured_force);
    const Vec3 err = gripper.position - grasp_.p_gd;
    d.pos_err_orth = (err - n.dot(err) * n).norm();
    d.align_angle = angle_axis_between(gripper.orientation.y().vec(), n).theta;
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    d.force_along_nc = nan;
    d.pos_err_orth = nan;
    d.align_angle = nan;
  }
  return d;
}

}  // namespace precut
