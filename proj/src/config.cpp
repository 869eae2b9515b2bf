#include "precut/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace precut {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Shortest text that reads back to the same double.
std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::kParse, key + ": expected a finite number, got '" + text + "'");
  }
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw Error(ErrorCode::kParse, key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

}  // namespace

ConfigKeys::ConfigKeys(RunConfig& c) {
  auto d = [&](const char* n, double& v) { entries_.push_back({n, Kind::kDouble, &v}); };
  auto i = [&](const char* n, int& v) { entries_.push_back({n, Kind::kInt, &v}); };
  auto v3 = [&](const char* n, Vec3& v) { entries_.push_back({n, Kind::kVec3, &v}); };
  ControlParams& p = c.control;
  SceneConfig& s = c.scene;

  d("camera.roi_radius", p.roi_radius);
  d("camera.k_cp", p.reach.k_cp);
  d("camera.k_co", p.reach.k_co);
  d("camera.d_o", p.unveil.d_o);
  d("camera.d_a", p.unveil.d_a);
  d("camera.k_c", p.unveil.k_c);
  d("camera.unveil_filter_tau", p.unveil.filter_tau);
  d("camera.max_linear", p.limits.linear);
  d("camera.max_angular", p.limits.angular);

  d("grasp.k_pg", p.grasp.k_pg);
  d("grasp.k_fp", p.grasp.k_fp);
  d("grasp.k_fi", p.grasp.k_fi);
  d("grasp.k_og", p.grasp.k_og);
  d("grasp.f_d", p.grasp.f_d);
  d("grasp.integral_limit", p.grasp.integral_limit);

  d("coord.dist_factor", p.thresholds.dist_factor);
  d("coord.v_lin_max", p.thresholds.v_lin_max);
  d("coord.v_ang_max", p.thresholds.v_ang_max);
  d("coord.roi_filter_tau", p.roi_filter_tau);
  i("coord.lattice_n", p.lattice_n);
  d("coord.r_o_factor", p.r_o_factor);
  entries_.push_back({"coord.min_stem_points", Kind::kSize, &p.min_stem_points});

  d("sensor.hfov", c.camera.hfov);
  d("sensor.vfov", c.camera.vfov);
  d("sensor.max_stem_range", c.camera.max_stem_range);
  d("sensor.d_vis", c.camera.d_vis);
  i("sensor.downsample", c.camera.downsample_factor);
  d("sensor.camera_period", c.camera_period);
  d("sensor.force_tau", c.force_tau);

  d("sim.dt", c.dt);
  d("sim.stem_stiffness", c.stem_stiffness);
  d("sim.ik_damping", c.ik_damping);
  entries_.push_back({"sim.arm_model", Kind::kArm, &c.arm});

  v3("world.branch_anchor", s.branch_anchor);
  d("world.stem_length", s.stem_length);
  d("world.stem_slack", s.stem_slack);
  v3("world.stem_hang_dir", s.stem_hang_dir);
  v3("world.stem_sag_dir", s.stem_sag_dir);
  i("world.stem_points", s.stem_points);
  d("world.stem_jitter", s.stem_jitter);
  v3("world.branch_axis", s.branch_axis);
  d("world.branch_radius", s.branch_radius);
  d("world.branch_length", s.branch_length);
  d("world.branch_gap", s.branch_gap);
  d("world.grape_radius", s.grape_radius);
  d("world.grape_length", s.grape_length);
  d("world.grape_gap", s.grape_gap);
  d("world.point_spacing", s.point_spacing);
  d("world.camera_distance", s.camera_distance);
  d("world.camera_azimuth", s.camera_azimuth);
  d("world.camera_elevation", s.camera_elevation);
  d("world.camera_misalignment", s.camera_misalignment);
  i("world.leaf_patches", s.leaf_patches);
  i("world.background_leaves", s.background_leaves);
  d("world.leaf_depth_min", s.leaf_depth_min);
  d("world.leaf_depth_max", s.leaf_depth_max);
  d("world.leaf_semi_major", s.leaf_semi_major);
  d("world.leaf_semi_minor", s.leaf_semi_minor);
  d("world.leaf_cover", s.leaf_cover);

  d("run.duration", c.duration);
  entries_.push_back({"run.seed", Kind::kU64, &c.seed});
  entries_.push_back({"run.output_dir", Kind::kString, &c.output_dir});
  entries_.push_back({"run.scene", Kind::kString, &c.scene_path});
  i("run.log_every", c.log_every);
  entries_.push_back({"run.full_rate", Kind::kBool, &c.full_rate});
}

std::vector<std::string> ConfigKeys::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) out.push_back(e.name);
  return out;
}

bool ConfigKeys::has(const std::string& key) const {
  for (const Entry& e : entries_) {
    if (e.name == key) return true;
  }
  return false;
}

const ConfigKeys::Entry& ConfigKeys::find(const std::string& key) const {
  for (const Entry& e : entries_) {
    if (e.name == key) return e;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
}

void ConfigKeys::set(const std::string& key, const std::string& raw) {
  const Entry& e = find(key);
  const std::string value = trim(raw);
  switch (e.kind) {
    case Kind::kDouble:
      *static_cast<double*>(e.ptr) = parse_double(key, value);
      break;
    case Kind::kInt: {
      const long long v = parse_integer(key, value);
      if (v < -2147483647LL || v > 2147483647LL) {
        throw Error(ErrorCode::kParse, key + ": integer out of range");
      }
      *static_cast<int*>(e.ptr) = static_cast<int>(v);
      break;
    }
    case Kind::kSize: {
      const long long v = parse_integer(key, value);
      if (v < 0) throw Error(ErrorCode::kParse, key + ": must be non-negative");
      *static_cast<std::size_t*>(e.ptr) = static_cast<std::size_t>(v);
      break;
    }
    case Kind::kU64: {
      const long long v = parse_integer(key, value);
      if (v < 0) throw Error(ErrorCode::kParse, key + ": must be non-negative");
      *static_cast<std::uint64_t*>(e.ptr) = static_cast<std::uint64_t>(v);
      break;
    }
    case Kind::kBool:
      if (value == "1" || value == "true") {
        *static_cast<bool*>(e.ptr) = true;
      } else if (value == "0" || value == "false") {
        *static_cast<bool*>(e.ptr) = false;
      } else {
        throw Error(ErrorCode::kParse, key + ": expected true/false, got '" + value + "'");
      }
      break;
    case Kind::kString:
      *static_cast<std::string*>(e.ptr) = value;
      break;
    case Kind::kVec3: {
      std::string t = value;
      for (char& ch : t) {
        if (ch == ',') ch = ' ';
      }
      std::istringstream in(t);
      std::string a, b, c, extra;
      if (!(in >> a >> b >> c) || (in >> extra)) {
        throw Error(ErrorCode::kParse, key + ": expected three numbers 'x,y,z'");
      }
      *static_cast<Vec3*>(e.ptr) =
          Vec3(parse_double(key, a), parse_double(key, b), parse_double(key, c));
      break;
    }
    case Kind::kArm:
      if (value == "freeflyer") {
        *static_cast<ArmKind*>(e.ptr) = ArmKind::kFreeFlyer;
      } else if (value == "serial6") {
        *static_cast<ArmKind*>(e.ptr) = ArmKind::kSerial6;
      } else {
        throw Error(ErrorCode::kParse, key + ": expected freeflyer or serial6, got '" + value + "'");
      }
      break;
  }
}

std::string ConfigKeys::get(const std::string& key) const {
  const Entry& e = find(key);
  switch (e.kind) {
    case Kind::kDouble:
      return fmt_double(*static_cast<const double*>(e.ptr));
    case Kind::kInt:
      return std::to_string(*static_cast<const int*>(e.ptr));
    case Kind::kSize:
      return std::to_string(*static_cast<const std::size_t*>(e.ptr));
    case Kind::kU64:
      return std::to_string(*static_cast<const std::uint64_t*>(e.ptr));
    case Kind::kBool:
      return *static_cast<const bool*>(e.ptr) ? "true" : "false";
    case Kind::kString:
      return *static_cast<const std::string*>(e.ptr);
    case Kind::kVec3: {
      const Vec3& v = *static_cast<const Vec3*>(e.ptr);
      return fmt_double(v.x()) + "," + fmt_double(v.y()) + "," + fmt_double(v.z());
    }
    case Kind::kArm:
      return *static_cast<const ArmKind*>(e.ptr) == ArmKind::kSerial6 ? "serial6" : "freeflyer";
  }
  return "";
}

void apply_config(RunConfig& cfg, std::istream& in) {
  ConfigKeys keys(cfg);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    try {
      keys.set(key, line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config file '" + path + "'");
  apply_config(cfg, in);
}

void validate_config(const RunConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, std::string("invalid config: ") + what);
  };
  require(c.dt > 0.0, "sim.dt must be > 0");
  require(c.duration >= 0.0, "run.duration must be >= 0");
  require(c.camera_period > 0.0, "sensor.camera_period must be > 0");
  require(c.log_every >= 1, "run.log_every must be >= 1");
  require(c.stem_stiffness > 0.0, "sim.stem_stiffness must be > 0");
  require(c.force_tau >= 0.0, "sensor.force_tau must be >= 0");
  require(c.ik_damping >= 0.0, "sim.ik_damping must be >= 0");
  require(c.control.roi_radius > 0.0, "camera.roi_radius must be > 0");
  require(c.control.unveil.d_o >= 0.0 && c.control.unveil.d_a > 0.0, "camera.d_o/d_a");
  require(c.control.limits.linear > 0.0 && c.control.limits.angular > 0.0, "camera limits");
  require(c.control.lattice_n >= 1, "coord.lattice_n must be >= 1");
  require(c.control.r_o_factor > 0.0, "coord.r_o_factor must be > 0");
  require(c.camera.hfov > 0.0 && c.camera.hfov < 3.141592653589793, "sensor.hfov in (0, pi)");
  require(c.camera.vfov > 0.0 && c.camera.vfov < 3.141592653589793, "sensor.vfov in (0, pi)");
  require(c.camera.downsample_factor >= 1, "sensor.downsample must be >= 1");
  require(c.camera.d_vis >= 0.0, "sensor.d_vis must be >= 0");
  require(c.scene.stem_length > 0.0, "world.stem_length must be > 0");
  require(c.scene.point_spacing > 0.0, "world.point_spacing must be > 0");
}

std::string dump_config(const RunConfig& cfg) {
  RunConfig copy = cfg;
  ConfigKeys keys(copy);
  std::string out;
  for (const std::string& k : keys.names()) out += k + " = " + keys.get(k) + "\n";
  return out;
}

}  // namespace precut
