#include "precut/simworld.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace precut {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 any_perpendicular(const Vec3& axis, const Vec3& hint) {
  Vec3 p = hint - hint.dot(axis) * axis;
  if (p.norm() < 1e-9) p = axis.unitOrthogonal();
  return p.normalized();
}

// Frame whose y axis is `y` and whose x axis leans toward `x_hint`.
Rotation frame_with_y(const Vec3& y, const Vec3& x_hint) {
  const Vec3 yy = y.normalized();
  const Vec3 x = any_perpendicular(yy, x_hint);
  Mat3 m;
  m.col(0) = x;
  m.col(1) = yy;
  m.col(2) = x.cross(yy);
  return Rotation(m);
}

// Evenly spread samples on an axis-aligned ellipsoid surface (semi-axes a, b, c).
std::vector<Vec3> ellipsoid_surface(double a, double b, double c, double spacing) {
  // Knud Thomsen's approximation of the ellipsoid area.
  constexpr double p = 1.6075;
  const double area =
      4.0 * kPi *
      std::pow((std::pow(a * b, p) + std::pow(a * c, p) + std::pow(b * c, p)) / 3.0, 1.0 / p);
  const int n = std::max(8, static_cast<int>(std::lround(area / (spacing * spacing))));
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(n));
  for (const Vec3& u : fibonacci_lattice(n, Vec3::Zero(), 1.0)) {
    out.emplace_back(a * u.x(), b * u.y(), c * u.z());
  }
  return out;
}

// Elliptic leaf spanned by `major` and `minor` (orthonormalized), slightly cupped.
std::vector<Vec3> leaf_patch(const Vec3& center, const Vec3& major, const Vec3& minor,
                             double semi_major, double semi_minor, double spacing, double cup) {
  const Vec3 u = major.normalized();
  const Vec3 v = any_perpendicular(u, minor);
  const Vec3 n = u.cross(v);
  std::vector<Vec3> pts;
  for (double a = -semi_major; a <= semi_major + 1e-12; a += spacing) {
    for (double b = -semi_minor; b <= semi_minor + 1e-12; b += spacing) {
      const double r2 = (a * a) / (semi_major * semi_major) + (b * b) / (semi_minor * semi_minor);
      if (r2 > 1.0) continue;
      pts.push_back(center + a * u + b * v + cup * r2 * n);
    }
  }
  return pts;
}

Vec3 point_on_polyline(const std::vector<Vec3>& poly, double s) {
  double total = 0.0;
  for (std::size_t i = 1; i < poly.size(); ++i) total += (poly[i] - poly[i - 1]).norm();
  double target = std::clamp(s, 0.0, 1.0) * total;
  for (std::size_t i = 1; i < poly.size(); ++i) {
    const double seg = (poly[i] - poly[i - 1]).norm();
    if (target <= seg || i + 1 == poly.size()) {
      const double t = seg > 0.0 ? std::min(1.0, target / seg) : 0.0;
      return poly[i - 1] + t * (poly[i] - poly[i - 1]);
    }
    target -= seg;
  }
  return poly.back();
}

Vec3 polyline_tangent(const std::vector<Vec3>& poly, double s) {
  double total = 0.0;
  for (std::size_t i = 1; i < poly.size(); ++i) total += (poly[i] - poly[i - 1]).norm();
  double target = std::clamp(s, 0.0, 1.0) * total;
  for (std::size_t i = 1; i < poly.size(); ++i) {
    const double seg = (poly[i] - poly[i - 1]).norm();
    if (target <= seg || i + 1 == poly.size()) {
      const Vec3 d = poly[i] - poly[i - 1];
      return d.norm() > 0.0 ? Vec3(d.normalized()) : Vec3::UnitZ();
    }
    target -= seg;
  }
  return Vec3::UnitZ();
}

}  // namespace

std::vector<Vec3> VineScene::stem_polyline(const Vec3& gripper_pos) const {
  const Vec3 chord = gripper_pos - branch_anchor;
  const double d = chord.norm();
  if (d >= stem_length) return {branch_anchor, gripper_pos};
  const Vec3 axis = d > 0.0 ? Vec3(chord / d) : Vec3(-Vec3::UnitZ());
  const Vec3 sag = any_perpendicular(axis, stem_sag_dir);
  const double half = 0.5 * stem_length;
  const double h = std::sqrt(std::max(0.0, half * half - 0.25 * d * d));
  return {branch_anchor, branch_anchor + 0.5 * chord + h * sag, gripper_pos};
}

Vec3 VineScene::grape_center(const Pose& gripper) const {
  return gripper.position + gripper.orientation.matrix() * grape_center_local;
}

LabeledCloud VineScene::cloud_at(const Pose& gripper) const {
  LabeledCloud cloud = static_cloud;
  if (!attached) return cloud;
  const std::vector<Vec3> poly = stem_polyline(gripper.position);
  for (const StemSample& s : stem_samples) {
    const Vec3 t = polyline_tangent(poly, s.s);
    const Vec3 off = s.offset - s.offset.dot(t) * t;
    cloud.push_back(point_on_polyline(poly, s.s) + off, Label::kStem);
  }
  const Mat3& r = gripper.orientation.matrix();
  for (const Vec3& g : grape_local) cloud.push_back(gripper.position + r * g, Label::kOther);
  return cloud;
}

SceneTruth VineScene::truth() const {
  SceneTruth t;
  t.branch_anchor = branch_anchor;
  t.stem_length = stem_length;
  t.gripper_start = gripper_start.position;
  t.grape_center = attached ? grape_center(gripper_start) : gripper_start.position;
  return t;
}

VineScene generate_scene(std::uint64_t seed, const SceneConfig& cfg) {
  if (!(cfg.stem_length > 0.0) || cfg.stem_points < 0 || !(cfg.point_spacing > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "generate_scene: invalid stem or spacing settings");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  VineScene scene;
  scene.attached = true;
  scene.branch_anchor = cfg.branch_anchor;
  scene.stem_length = cfg.stem_length;
  const Vec3 hang = cfg.stem_hang_dir.normalized();
  scene.stem_sag_dir = any_perpendicular(hang, cfg.stem_sag_dir);

  const double chord = (1.0 - std::clamp(cfg.stem_slack, 0.0, 0.9)) * cfg.stem_length;
  scene.gripper_start.position = cfg.branch_anchor + chord * hang;
  scene.gripper_start.orientation = frame_with_y(hang, scene.stem_sag_dir);

  // Stem samples, scattered within stem_jitter of the centreline.
  for (int i = 0; i < cfg.stem_points; ++i) {
    StemSample s;
    s.s = (i + 0.5) / cfg.stem_points;
    Vec3 off(uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0));
    if (off.norm() > 1.0) off.normalize();
    s.offset = cfg.stem_jitter * off;
    scene.stem_samples.push_back(s);
  }

  // Grape hangs beyond the stem end along the gripper y axis.
  const double half_len = 0.5 * cfg.grape_length;
  scene.grape_center_local = Vec3(0.0, cfg.grape_gap + half_len, 0.0);
  for (const Vec3& p : ellipsoid_surface(cfg.grape_radius, half_len, cfg.grape_radius,
                                         cfg.point_spacing)) {
    scene.grape_local.push_back(scene.grape_center_local + p);
  }

  // Branch cylinder just above the anchor.
  std::vector<Vec3> branch;
  {
    const Vec3 axis = any_perpendicular(hang, cfg.branch_axis);
    const Vec3 c0 = cfg.branch_anchor - (cfg.branch_radius + cfg.branch_gap) * hang;
    const Vec3 b1 = -hang;
    const Vec3 b2 = axis.cross(b1);
    const int around =
        std::max(6, static_cast<int>(std::lround(2.0 * kPi * cfg.branch_radius / cfg.point_spacing)));
    for (double a = -0.5 * cfg.branch_length; a <= 0.5 * cfg.branch_length + 1e-12;
         a += cfg.point_spacing) {
      for (int k = 0; k < around; ++k) {
        const double ang = 2.0 * kPi * k / around;
        branch.push_back(c0 + a * axis +
                         cfg.branch_radius * (std::cos(ang) * b1 + std::sin(ang) * b2));
      }
    }
  }
  scene.obstacle_patches.push_back(branch);

  // Camera start, looking at the stem middle with a deliberate offset.
  const std::vector<Vec3> poly = scene.stem_polyline();
  const Vec3 stem_mid = point_on_polyline(poly, 0.5);
  const Vec3 dir(std::cos(cfg.camera_elevation) * std::cos(cfg.camera_azimuth),
                 std::cos(cfg.camera_elevation) * std::sin(cfg.camera_azimuth),
                 std::sin(cfg.camera_elevation));
  const Vec3 cam = stem_mid + cfg.camera_distance * dir;
  {
    const UnitVec3 view(stem_mid - cam);
    const Vec3 x_hint = Vec3::UnitZ().cross(view.vec());
    const Rotation look = Rotation::look_along(view, x_hint);
    const Rotation tilt = Rotation::from_angle_axis(cfg.camera_misalignment, look.x());
    scene.camera_start.position = cam;
    scene.camera_start.orientation = Rotation(tilt.matrix() * look.matrix());
  }

  // Occluding leaves between the camera and the stem. Each leaf sits on the
  // line of sight to one stretch of the stem, its minor axis along the stem's
  // image direction, shifted sideways so the stem crosses it off-centre.
  // All leaves of a scene lean to the same side, so one lateral camera motion
  // can clear them.
  const double side = unit(rng) < 0.5 ? -1.0 : 1.0;
  for (int i = 0; i < cfg.leaf_patches; ++i) {
    const double s = (i + uniform(0.25, 0.75)) / cfg.leaf_patches;
    const Vec3 target = point_on_polyline(poly, s);
    const Vec3 to_cam = (cam - target).normalized();
    const Vec3 along = any_perpendicular(to_cam, polyline_tangent(poly, s));
    const Vec3 across = to_cam.cross(along);
    const double depth = uniform(cfg.leaf_depth_min, cfg.leaf_depth_max);
    const double shift = side * (1.0 - std::clamp(cfg.leaf_cover, 0.0, 1.0)) * cfg.leaf_semi_major;
    const Vec3 center = target + depth * to_cam + shift * across;
    const double tilt = uniform(-0.3, 0.3);
    const Vec3 major = across + tilt * to_cam;
    scene.obstacle_patches.push_back(leaf_patch(center, major, along, cfg.leaf_semi_major,
                                                cfg.leaf_semi_minor, cfg.point_spacing, 0.004));
  }

  // Background leaves close behind the stem.
  for (int i = 0; i < cfg.background_leaves; ++i) {
    const double s = uniform(0.2, 0.8);
    const Vec3 target = point_on_polyline(poly, s);
    const Vec3 away = (target - cam).normalized();
    const Vec3 w1 = any_perpendicular(away, Vec3::UnitZ());
    const Vec3 w2 = away.cross(w1);
    const double ang = uniform(0.0, 2.0 * kPi);
    const Vec3 center = target + uniform(0.02, 0.04) * away +
                        uniform(0.0, 0.03) * (std::cos(ang) * w1 + std::sin(ang) * w2);
    const double rot = uniform(0.0, kPi);
    const Vec3 major = std::cos(rot) * w1 + std::sin(rot) * w2 + uniform(-0.3, 0.3) * away;
    const Vec3 minor = -std::sin(rot) * w1 + std::cos(rot) * w2;
    scene.obstacle_patches.push_back(leaf_patch(center, major, minor, cfg.leaf_semi_major,
                                                cfg.leaf_semi_minor, cfg.point_spacing, 0.004));
  }

  for (const auto& patch : scene.obstacle_patches) {
    for (const Vec3& p : patch) scene.static_cloud.push_back(p, Label::kOther);
  }
  return scene;
}

VineScene scene_from_cloud(const LabeledCloud& cloud, const std::optional<SceneTruth>& truth,
                           const SceneConfig& config) {
  cloud.validate();
  VineScene scene;
  scene.attached = false;
  scene.static_cloud = cloud;
  const std::vector<Vec3> stem = cloud.select(Label::kStem);
  if (truth) {
    scene.branch_anchor = truth->branch_anchor;
    scene.stem_length = truth->stem_length;
    scene.gripper_start.position = truth->gripper_start;
  } else if (!stem.empty()) {
    // Lowest stem point stands in for the grasp point; the anchor is the stem
    // point farthest from it.
    Vec3 low = stem.front();
    for (const Vec3& p : stem) {
      if (p.z() < low.z()) low = p;
    }
    Vec3 anchor = low;
    for (const Vec3& p : stem) {
      if ((p - low).norm() > (anchor - low).norm()) anchor = p;
    }
    scene.branch_anchor = anchor;
    scene.stem_length = std::max((anchor - low).norm(), 1e-3);
    scene.gripper_start.position = low;
  } else {
    scene.branch_anchor = config.branch_anchor;
    scene.stem_length = config.stem_length;
    scene.gripper_start.position = config.branch_anchor + config.stem_length * Vec3(0, 0, -1);
  }
  Vec3 hang = scene.gripper_start.position - scene.branch_anchor;
  if (hang.norm() < 1e-9) hang = -Vec3::UnitZ();
  scene.gripper_start.orientation = frame_with_y(hang, Vec3::UnitX());

  Vec3 target = scene.branch_anchor;
  if (!stem.empty()) {
    target = Vec3::Zero();
    for (const Vec3& p : stem) target += p;
    target /= static_cast<double>(stem.size());
  }
  const Vec3 dir(std::cos(config.camera_elevation) * std::cos(config.camera_azimuth),
                 std::cos(config.camera_elevation) * std::sin(config.camera_azimuth),
                 std::sin(config.camera_elevation));
  const Vec3 cam = target + config.camera_distance * dir;
  const UnitVec3 view(target - cam);
  const Rotation look = Rotation::look_along(view, Vec3::UnitZ().cross(view.vec()));
  scene.camera_start.position = cam;
  scene.camera_start.orientation =
      Rotation(Rotation::from_angle_axis(config.camera_misalignment, look.x()).matrix() *
               look.matrix());
  return scene;
}

bool in_field_of_view(const Vec3& p, const Pose& camera, const CameraModel& model) {
  const Vec3 local = camera.orientation.matrix().transpose() * (p - camera.position);
  if (!(local.z() > 0.0)) return false;
  return std::abs(local.x()) <= std::tan(0.5 * model.hfov) * local.z() &&
         std::abs(local.y()) <= std::tan(0.5 * model.vfov) * local.z();
}

bool segment_hits_sphere(const Vec3& a, const Vec3& b, const Vec3& center, double radius) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((center - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (a + t * ab - center).squaredNorm() < radius * radius;
}

LabeledCloud render_view(const LabeledCloud& scene_cloud, const Pose& camera,
                         const CameraModel& model) {
  if (model.downsample_factor < 1) {
    throw Error(ErrorCode::kInvalidArgument, "downsample_factor must be >= 1");
  }
  const Vec3& c = camera.position;
  const Mat3 rt = camera.orientation.matrix().transpose();

  // Occluders: every non-stem scene point that is not behind the camera.
  std::vector<Vec3> occluders;
  occluders.reserve(scene_cloud.size());
  for (std::size_t i = 0; i < scene_cloud.size(); ++i) {
    if (scene_cloud.labels[i] != Label::kOther) continue;
    if ((rt * (scene_cloud.points[i] - c)).z() > -model.d_vis) occluders.push_back(scene_cloud.points[i]);
  }

  LabeledCloud out;
  const std::size_t stride = static_cast<std::size_t>(model.downsample_factor);
  for (std::size_t i = 0; i < scene_cloud.size(); i += stride) {
    const Vec3& p = scene_cloud.points[i];
    if (!in_field_of_view(p, camera, model)) continue;
    if (scene_cloud.labels[i] == Label::kOther) {
      out.push_back(p, Label::kOther);
      continue;
    }
    if ((p - c).norm() > model.max_stem_range) {
      out.push_back(p, Label::kOther);
      continue;
    }
    const double reach2 = (p - c).squaredNorm();
    bool occluded = false;
    for (const Vec3& o : occluders) {
      if ((o - c).squaredNorm() > reach2 + 2.0 * model.d_vis * std::sqrt(reach2) + model.d_vis * model.d_vis) {
        continue;  // farther than the stem point: cannot block the segment
      }
      if (segment_hits_sphere(c, p, o, model.d_vis)) {
        occluded = true;
        break;
      }
    }
    if (!occluded) out.push_back(p, Label::kStem);
  }
  return out;
}

LabeledCloud render_view(const VineScene& scene, const Pose& gripper, const Pose& camera,
                         const CameraModel& model) {
  return render_view(scene.cloud_at(gripper), camera, model);
}

Vec3 stem_force(const Vec3& gripper_pos, const StemCompliance& compliance) {
  const Vec3 d = gripper_pos - compliance.anchor;
  const double n = d.norm();
  if (!(n > compliance.rest_length) || !(n > 0.0)) return Vec3::Zero();
  return compliance.stiffness * (n - compliance.rest_length) * d / n;
}

void update_force_sensor(WorldState& world, const StemCompliance& compliance, double force_tau) {
  const Vec3 f = stem_force(world.gripper_pose.position, compliance);
  if (force_tau <= 0.0) {
    world.measured_force = f;
  } else {
    world.measured_force += std::min(1.0, world.dt / force_tau) * (f - world.measured_force);
  }
}

WorldState step(const WorldState& world, const Twist& camera_twist, const Twist& gripper_twist,
                const StemCompliance& compliance, double force_tau) {
  if (!(world.dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "step: dt must be positive");
  if (!camera_twist.is_finite() || !gripper_twist.is_finite()) {
    throw Error(ErrorCode::kNonFinite, "step: non-finite twist command at t = " +
                                           std::to_string(world.time));
  }
  WorldState next = world;
  next.camera_pose.position += camera_twist.linear * world.dt;
  next.camera_pose.orientation = world.camera_pose.orientation.integrated(camera_twist.angular, world.dt);
  next.gripper_pose.position += gripper_twist.linear * world.dt;
  next.gripper_pose.orientation =
      world.gripper_pose.orientation.integrated(gripper_twist.angular, world.dt);
  next.time = world.time + world.dt;
  update_force_sensor(next, compliance, force_tau);
  return next;
}

}  // namespace precut
