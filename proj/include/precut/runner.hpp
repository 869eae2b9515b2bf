#pragma once

#include <optional>
#include <string>
#include <vector>

#include "precut/config.hpp"

namespace precut {

inline constexpr const char* kTraceHeader =
    "t,roi_dist,theta,n_visible_stem,force_along_nc,pos_err_orth,align_angle,phase";

struct TraceRow {
  double t = 0.0;
  double roi_dist = 0.0;
  double theta = 0.0;
  std::size_t n_visible_stem = 0;
  double force_along_nc = 0.0;  // nan before the bimanual phase
  double pos_err_orth = 0.0;    // nan before the bimanual phase
  double align_angle = 0.0;     // nan before the bimanual phase
  int phase = 0;
};

struct RunMetrics {
  std::size_t steps = 0;
  double final_roi_dist = 0.0;
  double final_theta = 0.0;
  bool stem_detected = false;
  double first_detection_time = 0.0;
  std::size_t visible_at_first_detection = 0;
  std::size_t visible_final = 0;
  std::optional<double> transition_time;
  std::size_t visible_at_transition = 0;
  std::optional<double> force_settling_time;  // entry into the 5% band, for good
  double final_force_along_nc = 0.0;
  double final_pos_err_orth = 0.0;
  double final_align_angle = 0.0;
  std::optional<StemModel> stem_model;        // model used from the transition on
  Vec3 grasp_target = Vec3::Zero();
  Vec3 control_direction = Vec3::Zero();
  std::size_t free_samples = 0;
  std::size_t grasp_obstacles = 0;
};

struct RunResult {
  bool ok = true;
  ErrorCode fault = ErrorCode::kInvalidArgument;  // meaningful when !ok
  std::string message;
  std::vector<TraceRow> trace;
  RunMetrics metrics;
  LabeledCloud snapshot_start;
  std::optional<LabeledCloud> snapshot_transition;
  LabeledCloud snapshot_end;
};

// Builds the world described by `config` (generated, or loaded from
// `config.scene_path`) and runs both phases for `config.duration`. Faults
// stop the loop and are reported in the result; rows logged so far are kept.
RunResult simulate(const RunConfig& config);

std::string format_trace(const std::vector<TraceRow>& rows);
std::string format_metrics(const RunConfig& config, const RunResult& result);

// simulate() plus trace.csv, metrics.txt and scene snapshots in
// config.output_dir. Throws on I/O errors and on faults (after writing).
RunResult run_to_directory(const RunConfig& config);

}  // namespace precut
