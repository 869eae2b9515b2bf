#include "precut/scene_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace precut {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view s, std::size_t line, const char* field) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    parse_error(line, std::string("bad number in field '") + field + "': '" + std::string(s) + "'");
  }
  if (!std::isfinite(v)) parse_error(line, std::string("non-finite value in field '") + field + "'");
  return v;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

LabeledCloud read_scene_csv(std::istream& in) {
  LabeledCloud cloud;
  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view row = trim(raw);
    if (!header_seen) {
      if (row != kSceneCsvHeader) {
        parse_error(line, "expected header '" + std::string(kSceneCsvHeader) + "', got '" +
                              std::string(row) + "'");
      }
      header_seen = true;
      continue;
    }
    if (row.empty()) continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = row.find(',', start);
      fields.push_back(row.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4) {
      parse_error(line, "expected 4 fields, got " + std::to_string(fields.size()));
    }
    const Vec3 p(parse_double(fields[0], line, "x"), parse_double(fields[1], line, "y"),
                 parse_double(fields[2], line, "z"));
    const std::string_view lab = trim(fields[3]);
    if (lab == "0") {
      cloud.push_back(p, Label::kOther);
    } else if (lab == "1") {
      cloud.push_back(p, Label::kStem);
    } else {
      parse_error(line, "label must be 0 (other) or 1 (stem), got '" + std::string(lab) + "'");
    }
  }
  if (cloud.size() == 0) throw Error(ErrorCode::kParse, "no points");
  return cloud;
}

LabeledCloud read_scene_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open scene file '" + path + "'");
  return read_scene_csv(in);
}

void write_scene_csv(std::ostream& out, const LabeledCloud& cloud) {
  cloud.validate();
  out << kSceneCsvHeader << '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.points[i];
    out << fmt_double(p.x()) << ',' << fmt_double(p.y()) << ',' << fmt_double(p.z()) << ','
        << static_cast<int>(cloud.labels[i]) << '\n';
  }
}

void write_scene_csv(const std::string& path, const LabeledCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write scene file '" + path + "'");
  write_scene_csv(out, cloud);
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

SceneReport validate_scene(const std::string& path) {
  const LabeledCloud cloud = read_scene_csv(path);
  SceneReport r;
  r.n_points = cloud.size();
  r.n_stem = cloud.count(Label::kStem);
  r.n_other = cloud.count(Label::kOther);
  return r;
}

std::string truth_path_for(const std::string& scene_path) { return scene_path + ".truth"; }

void write_scene_truth(const std::string& path, const SceneTruth& t) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write truth file '" + path + "'");
  auto vec = [](const Vec3& v) {
    return fmt_double(v.x()) + " " + fmt_double(v.y()) + " " + fmt_double(v.z());
  };
  out << "# ground truth for evaluation; not read by the controllers\n";
  out << "branch_anchor = " << vec(t.branch_anchor) << '\n';
  out << "stem_length = " << fmt_double(t.stem_length) << '\n';
  out << "gripper_start = " << vec(t.gripper_start) << '\n';
  out << "grape_center = " << vec(t.grape_center) << '\n';
}

std::optional<SceneTruth> read_scene_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  SceneTruth t;
  std::string raw;
  std::size_t line = 0;
  bool have_anchor = false, have_length = false, have_gripper = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view row = trim(raw);
    if (row.empty() || row.front() == '#') continue;
    const auto eq = row.find('=');
    if (eq == std::string_view::npos) parse_error(line, "expected 'key = value'");
    const std::string key(trim(row.substr(0, eq)));
    std::istringstream vals{std::string(trim(row.substr(eq + 1)))};
    auto read_vec = [&]() {
      Vec3 v;
      if (!(vals >> v.x() >> v.y() >> v.z())) parse_error(line, "expected three numbers for " + key);
      return v;
    };
    if (key == "branch_anchor") {
      t.branch_anchor = read_vec();
      have_anchor = true;
    } else if (key == "stem_length") {
      if (!(vals >> t.stem_length)) parse_error(line, "bad stem_length");
      have_length = true;
    } else if (key == "gripper_start") {
      t.gripper_start = read_vec();
      have_gripper = true;
    } else if (key == "grape_center") {
      t.grape_center = read_vec();
    } else {
      parse_error(line, "unknown key '" + key + "'");
    }
  }
  if (!have_anchor || !have_length || !have_gripper) {
    throw Error(ErrorCode::kParse, "truth file '" + path + "' is missing required keys");
  }
  return t;
}

}  // namespace precut
