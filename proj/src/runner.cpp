#include "precut/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

#include "precut/scene_io.hpp"

namespace precut {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string vec(const Vec3& v) { return num(v.x()) + "," + num(v.y()) + "," + num(v.z()); }

// One end-effector: either integrated directly in task space or driven
// through a six-joint chain.
class Arm {
 public:
  Arm(ArmKind kind, const Pose& start, double damping) : kind_(kind), damping_(damping) {
    if (kind_ == ArmKind::kSerial6) {
      constexpr double h = std::numbers::pi / 2.0;
      JointVector q_home(6);
      q_home << 0.0, -h, h, -h, -h, 0.0;
      chain_.emplace(SerialChain::ur5e_links(), q_home, start);
      model_ = make_serial_model(*chain_);
    }
  }

  Pose advance(const Pose& pose, const Twist& v, double dt) {
    if (!v.is_finite()) throw Error(ErrorCode::kNonFinite, "non-finite twist command");
    if (kind_ == ArmKind::kFreeFlyer) {
      return {pose.position + v.linear * dt, pose.orientation.integrated(v.angular, dt)};
    }
    const JointVector qd = joint_velocities(model_, v, damping_);
    if (!qd.allFinite()) throw Error(ErrorCode::kNonFinite, "non-finite joint velocity");
    model_.q += qd * dt;
    return chain_->forward(model_.q);
  }

 private:
  ArmKind kind_;
  double damping_;
  std::optional<SerialChain> chain_;
  ArmModel model_;
};

VineScene build_scene(const RunConfig& cfg) {
  if (cfg.scene_path.empty()) return generate_scene(cfg.seed, cfg.scene);
  const LabeledCloud cloud = read_scene_csv(cfg.scene_path);
  return scene_from_cloud(cloud, read_scene_truth(truth_path_for(cfg.scene_path)), cfg.scene);
}

}  // namespace

RunResult simulate(const RunConfig& cfg) {
  validate_config(cfg);
  RunResult res;
  RunMetrics& m = res.metrics;

  const VineScene scene = build_scene(cfg);
  const StemCompliance compliance{cfg.stem_stiffness, scene.stem_length, scene.branch_anchor};

  WorldState world;
  world.camera_pose = scene.camera_start;
  world.gripper_pose = scene.gripper_start;
  world.dt = cfg.dt;
  update_force_sensor(world, compliance, 0.0);

  Arm camera_arm(cfg.arm, world.camera_pose, cfg.ik_damping);
  Arm gripper_arm(cfg.arm, world.gripper_pose, cfg.ik_damping);
  Coordinator coord(cfg.control, scene.gripper_start.position);

  res.snapshot_start = scene.cloud_at(world.gripper_pose);
  const long long n_steps = std::llround(cfg.duration / cfg.dt);
  const long long frame_steps = std::max(1LL, std::llround(cfg.camera_period / cfg.dt));
  const long long log_every = cfg.full_rate ? 1 : cfg.log_every;

  long long k = 0;
  try {
    for (; k < n_steps; ++k) {
      const double t = static_cast<double>(k) * cfg.dt;
      if (k % frame_steps == 0) {
        const bool had_model = coord.stem_identified();
        coord.observe(render_view(scene, world.gripper_pose, world.camera_pose, cfg.camera),
                      world.gripper_pose.position);
        if (!had_model && coord.stem_identified()) {
          m.stem_detected = true;
          m.first_detection_time = t;
          m.visible_at_first_detection = coord.visible_stem();
        }
      }

      const StepCommands cmd =
          coord.update(t, cfg.dt, world.camera_pose, world.gripper_pose, world.measured_force);
      if (cmd.transitioned) {
        m.transition_time = t;
        m.visible_at_transition = coord.visible_stem();
        res.snapshot_transition = scene.cloud_at(world.gripper_pose);
      }

      world.camera_pose = camera_arm.advance(world.camera_pose, cmd.camera, cfg.dt);
      world.gripper_pose = gripper_arm.advance(world.gripper_pose, cmd.grasp, cfg.dt);
      world.time = static_cast<double>(k + 1) * cfg.dt;
      update_force_sensor(world, compliance, cfg.force_tau);

      if ((k + 1) % log_every == 0) {
        const StepDiagnostics d =
            coord.diagnostics(world.camera_pose, world.gripper_pose, world.measured_force);
        res.trace.push_back({world.time, d.roi_dist, d.theta, coord.visible_stem(),
                             d.force_along_nc, d.pos_err_orth, d.align_angle,
                             static_cast<int>(coord.phase())});
      }
    }
  } catch (const Error& e) {
    res.ok = false;
    res.fault = e.code();
    char buf[64];
    std::snprintf(buf, sizeof buf, "fault at t = %.4f s: ", static_cast<double>(k) * cfg.dt);
    res.message = buf + std::string(e.what());
  }

  m.steps = static_cast<std::size_t>(k);
  const StepDiagnostics d =
      coord.diagnostics(world.camera_pose, world.gripper_pose, world.measured_force);
  m.final_roi_dist = d.roi_dist;
  m.final_theta = d.theta;
  m.visible_final = coord.visible_stem();
  m.final_force_along_nc = d.force_along_nc;
  m.final_pos_err_orth = d.pos_err_orth;
  m.final_align_angle = d.align_angle;
  if (coord.phase() == Phase::kBimanual) {
    m.stem_model = coord.stem_model();
    m.grasp_target = coord.grasp_state().p_gd;
    m.control_direction = coord.grasp_state().n_c.vec();
    if (coord.free_space()) m.free_samples = coord.free_space()->free.size();
    if (coord.grasp_obstacles()) m.grasp_obstacles = coord.grasp_obstacles()->points.size();
  }

  const double band = 0.05 * cfg.control.grasp.f_d;
  bool in_band_to_end = false;
  for (auto it = res.trace.rbegin(); it != res.trace.rend(); ++it) {
    if (it->phase != 1 || !(std::abs(it->force_along_nc - cfg.control.grasp.f_d) <= band)) break;
    m.force_settling_time = it->t;
    in_band_to_end = true;
  }
  if (!in_band_to_end) m.force_settling_time.reset();

  res.snapshot_end = scene.cloud_at(world.gripper_pose);
  return res;
}

std::string format_trace(const std::vector<TraceRow>& rows) {
  std::string out = std::string(kTraceHeader) + "\n";
  for (const TraceRow& r : rows) {
    out += num(r.t) + "," + num(r.roi_dist) + "," + num(r.theta) + "," +
           std::to_string(r.n_visible_stem) + "," + num(r.force_along_nc) + "," +
           num(r.pos_err_orth) + "," + num(r.align_angle) + "," + std::to_string(r.phase) + "\n";
  }
  return out;
}

std::string format_metrics(const RunConfig& cfg, const RunResult& res) {
  const RunMetrics& m = res.metrics;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::string out;
  auto line = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  line("status", res.ok ? "ok" : "fault");
  if (!res.ok) line("fault_message", res.message);
  line("steps", std::to_string(m.steps));
  line("final_roi_dist", num(m.final_roi_dist));
  line("final_theta", num(m.final_theta));
  line("stem_detected", m.stem_detected ? "true" : "false");
  if (!m.stem_detected) line("note", "stem never detected");
  line("first_detection_time", m.stem_detected ? num(m.first_detection_time) : "nan");
  line("visible_at_first_detection", std::to_string(m.visible_at_first_detection));
  line("visible_at_transition", std::to_string(m.visible_at_transition));
  line("visible_final", std::to_string(m.visible_final));
  line("transition_time", num(m.transition_time.value_or(nan)));
  line("force_settling_time", num(m.force_settling_time.value_or(nan)));
  line("final_force_along_nc", num(m.final_force_along_nc));
  line("final_pos_err_orth", num(m.final_pos_err_orth));
  line("final_align_angle", num(m.final_align_angle));
  if (m.stem_model) {
    line("stem_base", vec(m.stem_model->base));
    line("stem_length_estimate", num(m.stem_model->l));
    line("grasp_target", vec(m.grasp_target));
    line("control_direction", vec(m.control_direction));
    line("free_samples", std::to_string(m.free_samples));
    line("grasp_obstacles", std::to_string(m.grasp_obstacles));
  }
  out += "# configuration\n";
  out += dump_config(cfg);
  return out;
}

RunResult run_to_directory(const RunConfig& cfg) {
  RunResult res = simulate(cfg);
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create output directory '" + cfg.output_dir + "'");
  const fs::path dir(cfg.output_dir);
  auto write_text = [](const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorCode::kIo, "cannot write '" + p.string() + "'");
    f << text;
    if (!f) throw Error(ErrorCode::kIo, "write failed for '" + p.string() + "'");
  };
  write_text(dir / "trace.csv", format_trace(res.trace));
  write_text(dir / "metrics.txt", format_metrics(cfg, res));
  write_scene_csv((dir / "scene_snapshot_start.csv").string(), res.snapshot_start);
  if (res.snapshot_transition) {
    write_scene_csv((dir / "scene_snapshot_transition.csv").string(), *res.snapshot_transition);
  }
  write_scene_csv((dir / "scene_snapshot_end.csv").string(), res.snapshot_end);
  if (!res.ok) throw Error(res.fault, res.message);
  return res;
}

}  // namespace precut
