#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "precut/coordinator.hpp"
#include "precut/simworld.hpp"

namespace precut {

enum class ArmKind { kFreeFlyer, kSerial6 };

// Everything a run depends on. Controller defaults are the published lab
// values; simulation settings are documented in the README.
struct RunConfig {
  ControlParams control;
  SceneConfig scene;
  CameraModel camera;

  double stem_stiffness = 100.0;   // N/m
  double force_tau = 0.02;         // force sensor filter, s
  double dt = 0.002;               // control cycle, s
  double camera_period = 1.0 / 30.0;

  double duration = 90.0;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::string scene_path;          // empty: generate from `seed`
  ArmKind arm = ArmKind::kFreeFlyer;
  double ik_damping = 0.01;
  int log_every = 10;
  bool full_rate = false;
};

// Key registry over a RunConfig. Keys are namespaced ("grasp.k_pg").
// Vectors are written "x,y,z".
class ConfigKeys {
 public:
  explicit ConfigKeys(RunConfig& cfg);

  std::vector<std::string> names() const;
  bool has(const std::string& key) const;
  // Throws kInvalidArgument for unknown keys, kParse for malformed values.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;

 private:
  enum class Kind { kDouble, kInt, kSize, kU64, kBool, kString, kVec3, kArm };
  struct Entry {
    std::string name;
    Kind kind;
    void* ptr;
  };
  const Entry& find(const std::string& key) const;
  std::vector<Entry> entries_;
};

// Applies `key = value` lines; '#' starts a comment. Errors carry line numbers.
void apply_config(RunConfig& cfg, std::istream& in);
void load_config_file(RunConfig& cfg, const std::string& path);

// Checks ranges that would make a run meaningless (dt <= 0, radius <= 0, ...).
void validate_config(const RunConfig& cfg);

// One `key = value` line per key, in registry order.
std::string dump_config(const RunConfig& cfg);

}  // namespace precut
