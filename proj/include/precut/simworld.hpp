#pragma once

#include <cstdint>
#include <vector>

#include "precut/core.hpp"
#include "precut/scene.hpp"
#include "precut/scene_io.hpp"

namespace precut {

// Mock-vine generator settings. Lengths in meters, angles in radians.
struct SceneConfig {
  Vec3 branch_anchor{0.0, 0.0, 1.0};
  double stem_length = 0.07;
  double stem_slack = 0.03;      // initial chord is (1 - slack) * stem_length
  Vec3 stem_hang_dir{0.0, 0.0, -1.0};
  Vec3 stem_sag_dir{1.0, 0.0, 0.0};
  int stem_points = 150;
  double stem_jitter = 0.0015;   // lateral scatter about the stem axis

  Vec3 branch_axis{1.0, 0.0, 0.0};
  double branch_radius = 0.01;
  double branch_length = 0.5;
  double branch_gap = 0.006;     // clearance between branch surface and anchor

  double grape_radius = 0.035;
  double grape_length = 0.10;    // extent along the crop axis
  double grape_gap = 0.006;      // clearance between stem end and grape surface
  double point_spacing = 0.004;

  // Initial camera placement relative to the stem middle.
  double camera_distance = 0.6;
  double camera_azimuth = -1.5707963267948966;  // about +z from +x; -pi/2 looks along +y
  double camera_elevation = 0.1;                 // positive: camera above the stem middle
  double camera_misalignment = 0.25;             // initial angle between z_c and the stem

  int leaf_patches = 2;          // occluders between camera and stem
  int background_leaves = 2;     // leaves near the stem, away from the camera
  double leaf_depth_min = 0.03;  // distance in front of the stem along the line of sight
  double leaf_depth_max = 0.06;
  double leaf_semi_major = 0.04;
  double leaf_semi_minor = 0.008;
  double leaf_cover = 0.5;       // 1: stem crosses the leaf centre; 0: grazes its edge
};

struct StemSample {
  double s = 0.0;               // arc-length fraction from the anchor
  Vec3 offset = Vec3::Zero();   // world-frame scatter, made orthogonal to the local axis
};

// Ground-truth scene. When `attached` is true the stem and grape follow the
// gripper: the stem runs from the anchor to the gripper point (bending when
// slack) and the grape is rigid in the gripper frame.
struct VineScene {
  LabeledCloud static_cloud;    // branch, leaves (all Other); everything for loaded scenes
  std::vector<std::vector<Vec3>> obstacle_patches;
  Vec3 branch_anchor = Vec3::Zero();
  double stem_length = 0.0;
  Vec3 stem_sag_dir = Vec3::UnitX();
  std::vector<StemSample> stem_samples;
  std::vector<Vec3> grape_local;  // grape points in the gripper frame
  Vec3 grape_center_local = Vec3::Zero();
  Pose gripper_start;
  Pose camera_start;
  bool attached = false;

  // Stem centreline from anchor to gripper point: straight when taut, two
  // equal segments when slack.
  std::vector<Vec3> stem_polyline(const Vec3& gripper_pos) const;
  std::vector<Vec3> stem_polyline() const { return stem_polyline(gripper_start.position); }
  Vec3 grape_center(const Pose& gripper) const;

  // Labeled cloud for a gripper pose: static points, then stem, then grape.
  LabeledCloud cloud_at(const Pose& gripper) const;
  LabeledCloud full_cloud() const { return cloud_at(gripper_start); }
  SceneTruth truth() const;
};

// Deterministic for a fixed seed and config.
VineScene generate_scene(std::uint64_t seed, const SceneConfig& config);

// Static scene from a labeled cloud. Missing truth is estimated from the stem
// points (anchor = stem point farthest from the lowest stem point).
VineScene scene_from_cloud(const LabeledCloud& cloud, const std::optional<SceneTruth>& truth,
                           const SceneConfig& config);

struct CameraModel {
  double hfov = 65.0 * 3.14159265358979323846 / 180.0;
  double vfov = 40.0 * 3.14159265358979323846 / 180.0;
  double max_stem_range = 0.7;
  double d_vis = 0.005;
  int downsample_factor = 3;
};

bool in_field_of_view(const Vec3& p, const Pose& camera, const CameraModel& model);

// True when the segment a-b passes within `radius` of `center`.
bool segment_hits_sphere(const Vec3& a, const Vec3& b, const Vec3& center, double radius);

// Perceived cloud: every downsample_factor-th scene point (by scene index)
// inside the view pyramid. Stem points farther than max_stem_range come back
// as Other; stem points whose line of sight passes within d_vis of any
// non-stem scene point are dropped.
LabeledCloud render_view(const LabeledCloud& scene_cloud, const Pose& camera,
                         const CameraModel& model);
LabeledCloud render_view(const VineScene& scene, const Pose& gripper, const Pose& camera,
                         const CameraModel& model);

struct StemCompliance {
  double stiffness = 100.0;
  double rest_length = 0.07;
  Vec3 anchor = Vec3::Zero();
};

// Tension pulling the gripper back toward the anchor, reported as the force
// the gripper applies to the stem (directed away from the anchor).
Vec3 stem_force(const Vec3& gripper_pos, const StemCompliance& compliance);

struct WorldState {
  Pose camera_pose;
  Pose gripper_pose;
  double time = 0.0;
  double dt = 0.002;
  Vec3 measured_force = Vec3::Zero();
};

// Explicit Euler on both end-effectors, exponential-map orientation update,
// first-order force sensor filter. Throws kNonFinite on a bad twist.
WorldState step(const WorldState& world, const Twist& camera_twist, const Twist& gripper_twist,
                const StemCompliance& compliance, double force_tau = 0.02);

// Re-filters the force after the poses were set externally (joint-space arms).
void update_force_sensor(WorldState& world, const StemCompliance& compliance, double force_tau);

}  // namespace precut
