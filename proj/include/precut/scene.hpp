#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "precut/core.hpp"

namespace precut {

enum class Label : int { kOther = 0, kStem = 1 };

// Perceived (or ground-truth) scene cloud in the world frame. points[i] carries
// labels[i].
struct LabeledCloud {
  std::vector<Vec3> points;
  std::vector<Label> labels;

  std::size_t size() const { return points.size(); }
  void push_back(const Vec3& p, Label l) {
    points.push_back(p);
    labels.push_back(l);
  }
  std::size_t count(Label l) const;
  std::vector<Vec3> select(Label l) const;
  // Throws kInvalidArgument on length mismatch, kNonFinite on bad coordinates.
  void validate() const;
};

struct StemClusters {
  std::vector<Vec3> top;     // farther from the gripper
  std::vector<Vec3> bottom;  // nearer to the gripper
};

struct SegmentFit {
  UnitVec3 direction;
  double length = 0.0;
  Vec3 mean = Vec3::Zero();
};

struct StemModel {
  std::vector<Vec3> top_points;
  std::vector<Vec3> bottom_points;
  UnitVec3 n_st;  // top segment axis, oriented toward the bottom cluster
  UnitVec3 n_sb;  // bottom segment axis, oriented away from the top cluster
  double l_t = 0.0;
  double l_b = 0.0;
  double l = 0.0;  // l_t + l_b
  Vec3 base = Vec3::Zero();
};

struct ObstacleSet {
  std::vector<Vec3> points;     // non-stem points inside S(p_sb, search_radius)
  std::vector<Vec3> projected;  // radial projections onto S(p_sb, l)
  double search_radius = 0.0;
  double point_radius = 0.0;
};

struct FreeSpaceResult {
  std::vector<Vec3> lattice;
  std::vector<std::size_t> removed;  // lattice indices matched by a projected obstacle
  std::vector<Vec3> free;
  std::vector<std::size_t> free_indices;
  Vec3 target = Vec3::Zero();
  std::size_t target_index = 0;  // lattice index of target
  bool plane_applied = false;
  Vec3 plane_point = Vec3::Zero();
  UnitVec3 plane_normal;
};

// Two-means partition of the stem points. Initialisation splits at the median
// of the projections onto the major principal axis, so the result does not
// depend on any RNG. Throws kInsufficientData for fewer than 4 points.
StemClusters cluster_stem(const std::vector<Vec3>& stem_points, const Vec3& gripper_pos);

// Principal-axis line fit. `direction` is flipped to point toward
// `orient_toward`; `length` is the extent of the projections on the axis.
SegmentFit fit_segment(const std::vector<Vec3>& cluster, const Vec3& orient_toward);

Vec3 compute_stem_base(const Vec3& top_mean, double l_t, const UnitVec3& n_st);

// Clusters, fits both segments and places the base at the free end of the top
// segment.
StemModel build_stem_model(const std::vector<Vec3>& stem_points, const Vec3& gripper_pos);

// Non-stem points with |p - p_sb| <= search_radius (inclusive), projected onto
// S(p_sb, sphere_radius). Points exactly at p_sb have no projection and are
// skipped.
ObstacleSet select_obstacles(const LabeledCloud& world, const Vec3& p_sb, double search_radius,
                             double sphere_radius, double point_radius = 0.001);

// Spherical Fibonacci point set: z_i = 1 - (2i + 1)/n, longitude advancing by
// the golden angle. n = 1 yields the north pole.
std::vector<Vec3> fibonacci_lattice(int n, const Vec3& center, double radius);
Vec3 fibonacci_point(int i, int n, const Vec3& center, double radius);

// Index of the lattice point nearest to `p` (after radial projection), found
// through the inverse spherical Fibonacci mapping. Constant time in n.
int nearest_lattice_index(const Vec3& p, int n, const Vec3& center, double radius);

// Brute-force argmax over `free` of the minimum distance to the projected
// obstacles. Ties resolve to the lowest index; an empty obstacle list makes
// every candidate tie at +inf. Throws kNoFreeSpace on empty `free`.
std::size_t select_free_space_target_index(const std::vector<Vec3>& free,
                                           const std::vector<Vec3>& projected_obstacles);
Vec3 select_free_space_target(const std::vector<Vec3>& free,
                              const std::vector<Vec3>& projected_obstacles);

// Samples S(p_sb, l), removes the samples hit by projected obstacles and the
// ones behind the principal plane of the obstacles (as seen from the camera),
// then picks the target. Throws kNoFreeSpace when nothing survives.
FreeSpaceResult compute_free_space(const ObstacleSet& obstacles, const Vec3& p_sb, double l,
                                   const Vec3& camera_pos, int n);

}  // namespace precut
