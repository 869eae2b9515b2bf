// Command-line front end. Talks to the library only through precut.h.
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "precut/precut.h"

namespace {

int report(int status, const char* what) {
  if (status != PRECUT_OK) {
    std::fprintf(stderr, "error: %s: %s (%s)\n", what, precut_last_error(),
                 precut_status_name(status));
  }
  return status;
}

// Owns a config handle for the duration of a command.
struct Config {
  precut_config* h = nullptr;
  Config() { report(precut_config_create(&h), "config"); }
  ~Config() { precut_config_destroy(h); }
  Config(const Config&) = delete;
  Config& operator=(const Config&) = delete;

  int set(const char* key, const std::string& value) {
    return report(precut_config_set(h, key, value.c_str()), key);
  }
  std::string get(const char* key) const {
    size_t needed = 0;
    if (precut_config_get(h, key, nullptr, 0, &needed) != PRECUT_OK) return "";
    std::string s(needed, '\0');
    precut_config_get(h, key, s.data(), s.size(), &needed);
    s.resize(needed - 1);
    return s;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bimanual pre-cut simulation: scene generation, closed-loop runs, scene checks"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run both control phases and write trace/metrics");
  std::string scene, config_path, out_dir, arm_model;
  long long seed = -1;
  double duration = -1.0;
  bool full_rate = false;
  std::vector<std::string> overrides;
  run->add_option("--scene", scene, "Scene CSV (default: generate from --seed)");
  run->add_option("--config", config_path, "Config file of key = value lines");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Scene generator seed")->check(CLI::NonNegativeNumber);
  run->add_option("--duration", duration, "Simulated seconds")->check(CLI::NonNegativeNumber);
  run->add_option("--arm-model", arm_model, "Arm model")
      ->check(CLI::IsMember({"freeflyer", "serial6"}));
  run->add_flag("--full-rate", full_rate, "Log every control step instead of every 10th");
  run->add_option("--set", overrides, "Extra key=value overrides (repeatable)");

  // validate-scene
  auto* validate = app.add_subcommand("validate-scene", "Check a scene CSV and count labels");
  std::string validate_path;
  validate->add_option("path", validate_path, "Scene CSV")->required();

  // export-scene
  auto* exp = app.add_subcommand("export-scene", "Generate a scene and write it as CSV");
  std::string export_path, export_config;
  long long export_seed = 1;
  exp->add_option("path", export_path, "Output CSV")->required();
  exp->add_option("--seed", export_seed, "Scene generator seed")->check(CLI::NonNegativeNumber);
  exp->add_option("--config", export_config, "Config file of key = value lines");

  // print-config
  auto* print = app.add_subcommand("print-config", "Print every config key with its value");
  std::string print_config;
  print->add_option("--config", print_config, "Config file to apply first");

  CLI11_PARSE(app, argc, argv);

  Config cfg;
  if (cfg.h == nullptr) return 1;

  if (*run) {
    if (!config_path.empty() &&
        report(precut_config_load(cfg.h, config_path.c_str()), config_path.c_str())) {
      return 2;
    }
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
        return 2;
      }
      if (cfg.set(kv.substr(0, eq).c_str(), kv.substr(eq + 1))) return 2;
    }
    if (!scene.empty() && cfg.set("run.scene", scene)) return 2;
    if (!out_dir.empty() && cfg.set("run.output_dir", out_dir)) return 2;
    if (seed >= 0 && cfg.set("run.seed", std::to_string(seed))) return 2;
    if (duration >= 0.0) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", duration);
      if (cfg.set("run.duration", buf)) return 2;
    }
    if (!arm_model.empty() && cfg.set("sim.arm_model", arm_model)) return 2;
    if (full_rate && cfg.set("run.full_rate", "true")) return 2;

    precut_run_summary s{};
    const int status = precut_run(cfg.h, &s);
    std::printf("output: %s\n", cfg.get("run.output_dir").c_str());
    std::printf("rows: %zu\n", s.trace_rows);
    if (s.transitioned) {
      std::printf("transition: %.3f s\n", s.transition_time);
    } else {
      std::printf("transition: none%s\n", s.stem_detected ? "" : " (stem never detected)");
    }
    std::printf("final roi_dist: %.4f m, theta: %.4f rad\n", s.final_roi_dist, s.final_theta);
    std::printf("visible stem points: first %zu, transition %zu, final %zu\n",
                s.visible_at_first_detection, s.visible_at_transition, s.visible_final);
    if (s.transitioned) {
      std::printf("force along n_c: %.4f N, position error: %.3g m, alignment: %.3g rad\n",
                  s.final_force_along_nc, s.final_pos_err_orth, s.final_align_angle);
    }
    return report(status, "run") == PRECUT_OK ? 0 : 1;
  }

  if (*validate) {
    size_t n = 0, n_stem = 0, n_other = 0;
    if (report(precut_validate_scene(validate_path.c_str(), &n, &n_stem, &n_other),
               validate_path.c_str())) {
      return 1;
    }
    std::printf("OK %s: %zu points (stem %zu, other %zu)\n", validate_path.c_str(), n, n_stem,
                n_other);
    return 0;
  }

  if (*exp) {
    if (!export_config.empty() &&
        report(precut_config_load(cfg.h, export_config.c_str()), export_config.c_str())) {
      return 2;
    }
    precut_scene* sc = nullptr;
    if (report(precut_scene_generate(cfg.h, static_cast<uint64_t>(export_seed), &sc), "generate")) {
      return 1;
    }
    const int status = report(precut_scene_save(sc, export_path.c_str()), export_path.c_str());
    size_t n = 0, n_stem = 0;
    precut_scene_counts(sc, &n, &n_stem);
    precut_scene_destroy(sc);
    if (status) return 1;
    std::printf("wrote %s: %zu points (stem %zu)\n", export_path.c_str(), n, n_stem);
    return 0;
  }

  if (*print) {
    if (!print_config.empty() &&
        report(precut_config_load(cfg.h, print_config.c_str()), print_config.c_str())) {
      return 2;
    }
    size_t count = 0;
    precut_config_key_count(cfg.h, &count);
    for (size_t i = 0; i < count; ++i) {
      size_t needed = 0;
      precut_config_key_name(cfg.h, i, nullptr, 0, &needed);
      std::string key(needed, '\0');
      precut_config_key_name(cfg.h, i, key.data(), key.size(), &needed);
      key.resize(needed - 1);
      std::printf("%s = %s\n", key.c_str(), cfg.get(key.c_str()).c_str());
    }
    return 0;
  }
  return 0;
}
