#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "precut/precut.h"

namespace {

std::string get(const precut_config* cfg, const char* key) {
  size_t needed = 0;
  REQUIRE(precut_config_get(cfg, key, nullptr, 0, &needed) == PRECUT_OK);
  std::string s(needed, '\0');
  REQUIRE(precut_config_get(cfg, key, s.data(), s.size(), &needed) == PRECUT_OK);
  s.resize(needed - 1);
  return s;
}

}  // namespace

TEST_CASE("config handle: set, get, errors") {
  precut_config* cfg = nullptr;
  REQUIRE(precut_config_create(&cfg) == PRECUT_OK);
  CHECK(std::stod(get(cfg, "grasp.f_d")) == 3.0);
  CHECK(precut_config_set(cfg, "grasp.f_d", "2.5") == PRECUT_OK);
  CHECK(std::stod(get(cfg, "grasp.f_d")) == 2.5);

  CHECK(precut_config_set(cfg, "grasp.nope", "1") == PRECUT_E_INVALID_ARGUMENT);
  CHECK(std::string(precut_last_error()).find("grasp.nope") != std::string::npos);
  CHECK(precut_config_set(cfg, "grasp.f_d", "abc") == PRECUT_E_PARSE);
  CHECK(precut_config_load(cfg, "/nonexistent/x.cfg") == PRECUT_E_IO);
  CHECK(std::string(precut_status_name(PRECUT_E_IO)) == "io");

  char tiny[2];
  size_t needed = 0;
  CHECK(precut_config_get(cfg, "grasp.f_d", tiny, sizeof tiny, &needed) == PRECUT_E_INVALID_ARGUMENT);
  CHECK(needed > sizeof tiny);

  size_t count = 0;
  REQUIRE(precut_config_key_count(cfg, &count) == PRECUT_OK);
  CHECK(count > 40);
  CHECK(precut_config_key_name(cfg, count, nullptr, 0, &needed) == PRECUT_E_INVALID_ARGUMENT);

  CHECK(precut_config_create(nullptr) == PRECUT_E_INVALID_ARGUMENT);
  precut_config_destroy(cfg);
  precut_config_destroy(nullptr);
}

TEST_CASE("scene handle: generate, save, validate, load") {
  precut_config* cfg = nullptr;
  REQUIRE(precut_config_create(&cfg) == PRECUT_OK);
  precut_scene* s = nullptr;
  REQUIRE(precut_scene_generate(cfg, 5, &s) == PRECUT_OK);
  size_t n = 0, n_stem = 0;
  REQUIRE(precut_scene_counts(s, &n, &n_stem) == PRECUT_OK);
  CHECK(n_stem == 150);
  REQUIRE(precut_scene_save(s, "capi_scene.csv") == PRECUT_OK);
  precut_scene_destroy(s);

  size_t vn = 0, vs = 0, vo = 0;
  REQUIRE(precut_validate_scene("capi_scene.csv", &vn, &vs, &vo) == PRECUT_OK);
  CHECK(vn == n);
  CHECK(vs == n_stem);
  CHECK(vo == n - n_stem);

  precut_scene* l = nullptr;
  REQUIRE(precut_scene_load("capi_scene.csv", &l) == PRECUT_OK);
  size_t ln = 0;
  precut_scene_counts(l, &ln, nullptr);
  CHECK(ln == n);
  precut_scene_destroy(l);

  CHECK(precut_scene_load("/nonexistent.csv", &l) == PRECUT_E_IO);
  CHECK(precut_validate_scene(nullptr, nullptr, nullptr, nullptr) == PRECUT_E_INVALID_ARGUMENT);
  precut_config_destroy(cfg);
}

TEST_CASE("run through the C API") {
  precut_config* cfg = nullptr;
  REQUIRE(precut_config_create(&cfg) == PRECUT_OK);
  REQUIRE(precut_config_set(cfg, "run.duration", "0.5") == PRECUT_OK);
  REQUIRE(precut_config_set(cfg, "run.output_dir", "capi_run") == PRECUT_OK);
  precut_run_summary s{};
  REQUIRE(precut_run(cfg, &s) == PRECUT_OK);
  CHECK(s.completed == 1);
  CHECK(s.trace_rows == 25);
  CHECK(s.transitioned == 0);
  CHECK(std::isnan(s.transition_time));
  precut_config_destroy(cfg);
}

TEST_CASE("geometry helpers") {
  const double c[3] = {0, 0, 1};
  std::vector<double> xyz(3 * 500);
  REQUIRE(precut_fibonacci_lattice(500, c, 0.07, xyz.data()) == PRECUT_OK);
  for (int i = 0; i < 500; ++i) {
    const double dx = xyz[3 * i], dy = xyz[3 * i + 1], dz = xyz[3 * i + 2] - 1.0;
    CHECK(std::sqrt(dx * dx + dy * dy + dz * dz) == doctest::Approx(0.07).epsilon(1e-12));
    int idx = -1;
    REQUIRE(precut_nearest_lattice_index(500, c, 0.07, &xyz[3 * i], &idx) == PRECUT_OK);
    CHECK(idx == i);
  }
  CHECK(precut_fibonacci_lattice(0, c, 1.0, xyz.data()) == PRECUT_E_INVALID_ARGUMENT);

  const double cand[9] = {1, 0, 0, 0, 1, 0, -1, 0, 0};
  const double obs[3] = {0.9, 0.1, 0};
  size_t pick = 99;
  REQUIRE(precut_free_space_target(cand, 3, obs, 1, &pick) == PRECUT_OK);
  CHECK(pick == 2);
  CHECK(precut_free_space_target(cand, 0, obs, 1, &pick) == PRECUT_E_NO_FREE_SPACE);
}
