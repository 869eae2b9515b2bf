#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "precut/arm_model.hpp"
#include "precut/camera_control.hpp"
#include "precut/core.hpp"
#include "precut/grasp_control.hpp"
#include "precut/scene.hpp"

namespace precut {

enum class Phase : int { kCameraOnly = 0, kBimanual = 1 };

// Monotone phase machine: CameraOnly -> Bimanual, never back.
class PhaseState {
 public:
  Phase phase() const { return phase_; }
  std::optional<double> transition_time() const { return transition_time_; }
  void enter_bimanual(double t);

 private:
  Phase phase_ = Phase::kCameraOnly;
  std::optional<double> transition_time_;
};

struct ThresholdSpec {
  double dist_factor = 1.05;  // multiples of the ROI radius
  double v_lin_max = 0.01;    // m/s
  double v_ang_max = 0.025;   // rad/s
};

struct SmoothedTarget {
  Vec3 raw = Vec3::Zero();
  Vec3 filtered = Vec3::Zero();
  double tau = 0.5;
};

// All comparisons inclusive.
bool check_transition(const Vec3& p_c, const RoiSpec& roi, const Twist& tip_twist,
                      const ThresholdSpec& thresholds);

// filtered += min(1, dt/tau) * (raw - filtered); tau = 0 snaps to raw.
Vec3 smooth_target(SmoothedTarget& state, double dt);

// Adds the grasping arm's translation to the camera twist together with the
// rotation that keeps the stem base centred. The grasp angular part is never
// forwarded.
Twist couple_velocities(const Twist& camera, const Vec3& v_gt, const Vec3& p_c, const Vec3& p_sb);

// Damped least squares q_dot = J^T (J J^T + damping^2 I)^-1 V. With zero
// damping a rank-deficient J throws kSingular.
JointVector joint_velocities(const ArmModel& arm, const Twist& twist, double damping);

struct ControlParams {
  double roi_radius = 0.35;
  ReachGains reach;
  UnveilParams unveil;
  TwistLimits limits;
  GraspGains grasp;
  ThresholdSpec thresholds;
  double roi_filter_tau = 0.5;
  int lattice_n = 500;
  double r_o_factor = 1.0;  // obstacle search radius in multiples of the stem length estimate
  std::size_t min_stem_points = 4;
};

struct StepCommands {
  Twist camera;         // final camera twist, coupling included
  Twist grasp;          // zero before the bimanual phase
  Twist camera_reach;   // reaching/centering term
  Twist camera_unveil;  // filtered unveiling term
  bool transitioned = false;
};

struct StepDiagnostics {
  double roi_dist = 0.0;
  double theta = 0.0;
  double force_along_nc = 0.0;
  double pos_err_orth = 0.0;
  double align_angle = 0.0;
  UnveilStats unveil;
};

// Owns the mutable control state of a run: phase, ROI filter, unveiling
// filter, stem model, grasp target and force integral. Single writer.
class Coordinator {
 public:
  Coordinator(const ControlParams& params, const Vec3& initial_roi_center);

  // Feed a new perceived cloud. The first cloud with enough stem points fixes
  // the stem base used as ROI centre for the rest of the camera-only phase.
  void observe(const LabeledCloud& cloud, const Vec3& gripper_pos);

  StepCommands update(double t, double dt, const Pose& camera, const Pose& gripper,
                      const Vec3& measured_force);

  StepDiagnostics diagnostics(const Pose& camera, const Pose& gripper,
                              const Vec3& measured_force) const;

  Phase phase() const { return phase_.phase(); }
  std::optional<double> transition_time() const { return phase_.transition_time(); }
  const std::optional<StemModel>& stem_model() const { return stem_; }
  const std::optional<FreeSpaceResult>& free_space() const { return free_space_; }
  const std::optional<ObstacleSet>& grasp_obstacles() const { return grasp_obstacles_; }
  const GraspState& grasp_state() const { return grasp_; }
  Vec3 roi_center() const { return roi_.filtered; }
  std::size_t visible_stem() const { return stem_pts_.size(); }
  bool stem_identified() const { return stem_.has_value(); }
  const ControlParams& params() const { return params_; }

 private:
  void enter_bimanual(double t, const Vec3& p_c, const Vec3& p_g);

  ControlParams params_;
  PhaseState phase_;
  SmoothedTarget roi_;
  TwistFilter unveil_filter_;
  std::vector<Vec3> stem_pts_;
  std::vector<Vec3> other_pts_;
  LabeledCloud last_cloud_;
  std::optional<StemModel> stem_;
  std::optional<FreeSpaceResult> free_space_;
  std::optional<ObstacleSet> grasp_obstacles_;
  GraspState grasp_;
  UnveilStats last_unveil_;
};

}  // namespace precut
