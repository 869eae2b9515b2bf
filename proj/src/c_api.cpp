#include "precut/precut.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <optional>
#include <string>

#include "precut/runner.hpp"
#include "precut/scene_io.hpp"

struct precut_config {
  precut::RunConfig cfg;
};

struct precut_scene {
  precut::LabeledCloud cloud;
  std::optional<precut::SceneTruth> truth;
};

namespace {

thread_local std::string g_last_error;

int fail(int status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

template <typename F>
int guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return PRECUT_OK;
  } catch (const precut::Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PRECUT_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PRECUT_E_INTERNAL, e.what());
  } catch (...) {
    return fail(PRECUT_E_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw precut::Error(precut::ErrorCode::kInvalidArgument, what);
}

void copy_out(const std::string& s, char* buf, size_t buf_len, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (buf == nullptr) return;
  if (buf_len < s.size() + 1) {
    throw precut::Error(precut::ErrorCode::kInvalidArgument, "buffer too small");
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
}

precut::Vec3 vec_at(const double* xyz, size_t i) {
  return {xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]};
}

}  // namespace

extern "C" {

const char* precut_last_error(void) { return g_last_error.c_str(); }

const char* precut_status_name(int status) {
  if (status == PRECUT_OK) return "ok";
  if (status == PRECUT_E_INTERNAL) return "internal";
  if (status >= 1 && status <= 9) {
    return precut::error_code_name(static_cast<precut::ErrorCode>(status));
  }
  return "unknown";
}

int precut_config_create(precut_config** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new precut_config();
  });
}

void precut_config_destroy(precut_config* cfg) { delete cfg; }

int precut_config_load(precut_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg && path, "null argument");
    precut::RunConfig tmp = cfg->cfg;
    precut::load_config_file(tmp, path);
    cfg->cfg = tmp;
  });
}

int precut_config_set(precut_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg && key && value, "null argument");
    precut::ConfigKeys(cfg->cfg).set(key, value);
  });
}

int precut_config_get(const precut_config* cfg, const char* key, char* buf, size_t buf_len,
                      size_t* needed) {
  return guarded([&] {
    require(cfg && key, "null argument");
    precut::RunConfig copy = cfg->cfg;
    copy_out(precut::ConfigKeys(copy).get(key), buf, buf_len, needed);
  });
}

int precut_config_key_count(const precut_config* cfg, size_t* count) {
  return guarded([&] {
    require(cfg && count, "null argument");
    precut::RunConfig copy = cfg->cfg;
    *count = precut::ConfigKeys(copy).names().size();
  });
}

int precut_config_key_name(const precut_config* cfg, size_t index, char* buf, size_t buf_len,
                           size_t* needed) {
  return guarded([&] {
    require(cfg != nullptr, "null argument");
    precut::RunConfig copy = cfg->cfg;
    const auto names = precut::ConfigKeys(copy).names();
    require(index < names.size(), "key index out of range");
    copy_out(names[index], buf, buf_len, needed);
  });
}

int precut_scene_generate(const precut_config* cfg, uint64_t seed, precut_scene** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    const precut::VineScene scene = precut::generate_scene(seed, cfg->cfg.scene);
    auto* s = new precut_scene();
    s->cloud = scene.full_cloud();
    s->truth = scene.truth();
    *out = s;
  });
}

int precut_scene_load(const char* path, precut_scene** out) {
  return guarded([&] {
    require(path && out, "null argument");
    auto* s = new precut_scene();
    try {
      s->cloud = precut::read_scene_csv(std::string(path));
      s->truth = precut::read_scene_truth(precut::truth_path_for(path));
    } catch (...) {
      delete s;
      throw;
    }
    *out = s;
  });
}

int precut_scene_save(const precut_scene* scene, const char* path) {
  return guarded([&] {
    require(scene && path, "null argument");
    precut::write_scene_csv(std::string(path), scene->cloud);
    if (scene->truth) precut::write_scene_truth(precut::truth_path_for(path), *scene->truth);
  });
}

int precut_scene_counts(const precut_scene* scene, size_t* n_points, size_t* n_stem) {
  return guarded([&] {
    require(scene != nullptr, "null argument");
    if (n_points) *n_points = scene->cloud.size();
    if (n_stem) *n_stem = scene->cloud.count(precut::Label::kStem);
  });
}

void precut_scene_destroy(precut_scene* scene) { delete scene; }

int precut_validate_scene(const char* path, size_t* n_points, size_t* n_stem, size_t* n_other) {
  return guarded([&] {
    require(path != nullptr, "null argument");
    const precut::SceneReport r = precut::validate_scene(path);
    if (n_points) *n_points = r.n_points;
    if (n_stem) *n_stem = r.n_stem;
    if (n_other) *n_other = r.n_other;
  });
}

int precut_run(const precut_config* cfg, precut_run_summary* summary) {
  return guarded([&] {
    require(cfg != nullptr, "null argument");
    precut::RunResult res;
    std::optional<precut::Error> fault;
    try {
      res = precut::run_to_directory(cfg->cfg);
    } catch (const precut::Error& e) {
      // run_to_directory writes its outputs before rethrowing a run fault.
      fault = e;
    }
    if (summary) {
      const precut::RunMetrics& m = res.metrics;
      summary->completed = !fault;
      summary->transitioned = m.transition_time.has_value();
      summary->stem_detected = m.stem_detected;
      summary->transition_time =
          m.transition_time.value_or(std::numeric_limits<double>::quiet_NaN());
      summary->final_roi_dist = m.final_roi_dist;
      summary->final_theta = m.final_theta;
      summary->final_force_along_nc = m.final_force_along_nc;
      summary->final_pos_err_orth = m.final_pos_err_orth;
      summary->final_align_angle = m.final_align_angle;
      summary->visible_at_first_detection = m.visible_at_first_detection;
      summary->visible_at_transition = m.visible_at_transition;
      summary->visible_final = m.visible_final;
      summary->trace_rows = res.trace.size();
    }
    if (fault) throw *fault;
  });
}

int precut_fibonacci_lattice(int n, const double center[3], double radius, double* out_xyz) {
  return guarded([&] {
    require(center && out_xyz, "null argument");
    const auto pts = precut::fibonacci_lattice(n, vec_at(center, 0), radius);
    for (size_t i = 0; i < pts.size(); ++i) {
      out_xyz[3 * i] = pts[i].x();
      out_xyz[3 * i + 1] = pts[i].y();
      out_xyz[3 * i + 2] = pts[i].z();
    }
  });
}

int precut_nearest_lattice_index(int n, const double center[3], double radius,
                                 const double query[3], int* out_index) {
  return guarded([&] {
    require(center && query && out_index, "null argument");
    *out_index = precut::nearest_lattice_index(vec_at(query, 0), n, vec_at(center, 0), radius);
  });
}

int precut_free_space_target(const double* candidates_xyz, size_t n_candidates,
                             const double* obstacles_xyz, size_t n_obstacles,
                             size_t* out_index) {
  return guarded([&] {
    require(out_index != nullptr, "null argument");
    require(n_candidates == 0 || candidates_xyz, "null candidates");
    require(n_obstacles == 0 || obstacles_xyz, "null obstacles");
    std::vector<precut::Vec3> free, obs;
    for (size_t i = 0; i < n_candidates; ++i) free.push_back(vec_at(candidates_xyz, i));
    for (size_t i = 0; i < n_obstacles; ++i) obs.push_back(vec_at(obstacles_xyz, i));
    *out_index = precut::select_free_space_target_index(free, obs);
  });
}

}  // extern "C"
