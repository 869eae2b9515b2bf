#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "precut/scene.hpp"

namespace precut {

// Scene CSV: header `x,y,z,label`, one point per row, label 0 = other,
// 1 = stem, coordinates in meters in the world frame.
inline constexpr const char* kSceneCsvHeader = "x,y,z,label";

// Parse errors carry kParse and a 1-based line number in the message.
LabeledCloud read_scene_csv(std::istream& in);
LabeledCloud read_scene_csv(const std::string& path);
void write_scene_csv(std::ostream& out, const LabeledCloud& cloud);
void write_scene_csv(const std::string& path, const LabeledCloud& cloud);

struct SceneReport {
  std::size_t n_points = 0;
  std::size_t n_stem = 0;
  std::size_t n_other = 0;
};

// Full schema check of a scene file; throws on the first bad row.
SceneReport validate_scene(const std::string& path);

// Evaluation-only facts about a scene, stored next to it as `<scene>.truth`.
struct SceneTruth {
  Vec3 branch_anchor = Vec3::Zero();
  double stem_length = 0.0;
  Vec3 gripper_start = Vec3::Zero();
  Vec3 grape_center = Vec3::Zero();
};

std::string truth_path_for(const std::string& scene_path);
void write_scene_truth(const std::string& path, const SceneTruth& truth);
std::optional<SceneTruth> read_scene_truth(const std::string& path);

}  // namespace precut
