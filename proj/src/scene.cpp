#include "precut/scene.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace precut {

namespace {

Vec3 mean_of(const std::vector<Vec3>& pts) {
  Vec3 m = Vec3::Zero();
  for (const auto& p : pts) m += p;
  return m / static_cast<double>(pts.size());
}

// Covariance eigen-decomposition; eigenvalues ascending.
Eigen::SelfAdjointEigenSolver<Mat3> principal_axes(const std::vector<Vec3>& pts, const Vec3& mean) {
  Mat3 cov = Mat3::Zero();
  for (const auto& p : pts) {
    const Vec3 d = p - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(pts.size());
  return Eigen::SelfAdjointEigenSolver<Mat3>(cov);
}

}  // namespace

std::size_t LabeledCloud::count(Label l) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), l));
}

std::vector<Vec3> LabeledCloud::select(Label l) const {
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (labels[i] == l) out.push_back(points[i]);
  }
  return out;
}

void LabeledCloud::validate() const {
  if (points.size() != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "cloud has " + std::to_string(points.size()) +
                                                 " points but " + std::to_string(labels.size()) +
                                                 " labels");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].allFinite()) {
      throw Error(ErrorCode::kNonFinite, "cloud point " + std::to_string(i) + " is not finite");
    }
  }
}

StemClusters cluster_stem(const std::vector<Vec3>& stem_points, const Vec3& gripper_pos) {
  const std::size_t n = stem_points.size();
  if (n < 4) {
    throw Error(ErrorCode::kInsufficientData,
                "cluster_stem needs at least 4 points, got " + std::to_string(n));
  }
  const Vec3 mean = mean_of(stem_points);
  Vec3 axis = principal_axes(stem_points, mean).eigenvectors().col(2);
  if (axis.dot(mean - gripper_pos) < 0.0) axis = -axis;

  // Median split along the axis: cluster 0 starts on the gripper side.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> proj(n);
  for (std::size_t i = 0; i < n; ++i) proj[i] = axis.dot(stem_points[i]);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return proj[a] < proj[b]; });
  std::vector<int> assign(n, 1);
  for (std::size_t r = 0; r < n / 2; ++r) assign[order[r]] = 0;

  constexpr int kMaxIterations = 100;
  for (int it = 0; it < kMaxIterations; ++it) {
    Vec3 c[2] = {Vec3::Zero(), Vec3::Zero()};
    std::size_t sz[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      c[assign[i]] += stem_points[i];
      ++sz[assign[i]];
    }
    c[0] /= static_cast<double>(sz[0]);
    c[1] /= static_cast<double>(sz[1]);

    std::vector<int> next = assign;
    for (std::size_t i = 0; i < n; ++i) {
      const double d0 = (stem_points[i] - c[0]).squaredNorm();
      const double d1 = (stem_points[i] - c[1]).squaredNorm();
      if (d0 < d1) next[i] = 0;
      else if (d1 < d0) next[i] = 1;
    }
    const auto n0 = std::count(next.begin(), next.end(), 0);
    if (n0 == 0 || n0 == static_cast<long>(n)) break;  // keep both clusters populated
    if (next == assign) break;
    assign = std::move(next);
  }

  std::vector<Vec3> groups[2];
  for (std::size_t i = 0; i < n; ++i) groups[assign[i]].push_back(stem_points[i]);
  const double d0 = (mean_of(groups[0]) - gripper_pos).norm();
  const double d1 = (mean_of(groups[1]) - gripper_pos).norm();

  StemClusters out;
  // Equal distances: the cluster farther along the axis is the top.
  if (d0 > d1) {
    out.top = std::move(groups[0]);
    out.bottom = std::move(groups[1]);
  } else {
    out.top = std::move(groups[1]);
    out.bottom = std::move(groups[0]);
  }
  return out;
}

SegmentFit fit_segment(const std::vector<Vec3>& cluster, const Vec3& orient_toward) {
  if (cluster.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "fit_segment needs at least 2 points");
  }
  const bool coincide = std::all_of(cluster.begin(), cluster.end(),
                                    [&](const Vec3& p) { return p == cluster.front(); });
  if (coincide) {
    throw Error(ErrorCode::kDegenerateInput, "fit_segment: all cluster points coincide");
  }
  const Vec3 mean = mean_of(cluster);
  Vec3 dir = principal_axes(cluster, mean).eigenvectors().col(2);
  if (dir.dot(orient_toward - mean) < 0.0) dir = -dir;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : cluster) {
    const double t = dir.dot(p - mean);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  return {UnitVec3(dir), hi - lo, mean};
}

Vec3 compute_stem_base(const Vec3& top_mean, double l_t, const UnitVec3& n_st) {
  if (!(l_t > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "compute_stem_base: l_t must be positive");
  }
  return top_mean - 0.5 * l_t * n_st.vec();
}

StemModel build_stem_model(const std::vector<Vec3>& stem_points, const Vec3& gripper_pos) {
  StemClusters clusters = cluster_stem(stem_points, gripper_pos);
  const Vec3 top_mean = mean_of(clusters.top);
  const Vec3 bottom_mean = mean_of(clusters.bottom);

  const SegmentFit top = fit_segment(clusters.top, bottom_mean);
  const SegmentFit bottom = fit_segment(clusters.bottom, 2.0 * bottom_mean - top_mean);
  if (!(top.length > 0.0) || !(bottom.length > 0.0)) {
    throw Error(ErrorCode::kDegenerateInput, "stem segment has zero length");
  }

  StemModel m;
  m.top_points = std::move(clusters.top);
  m.bottom_points = std::move(clusters.bottom);
  m.n_st = top.direction;
  m.n_sb = bottom.direction;
  m.l_t = top.length;
  m.l_b = bottom.length;
  m.l = m.l_t + m.l_b;
  m.base = compute_stem_base(top.mean, m.l_t, m.n_st);
  return m;
}

ObstacleSet select_obstacles(const LabeledCloud& world, const Vec3& p_sb, double search_radius,
                             double sphere_radius, double point_radius) {
  if (!(search_radius > 0.0) || !(sphere_radius > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "select_obstacles: radii must be positive");
  }
  ObstacleSet out;
  out.search_radius = search_radius;
  out.point_radius = point_radius;
  for (std::size_t i = 0; i < world.size(); ++i) {
    if (world.labels[i] != Label::kOther) continue;
    const double d = (world.points[i] - p_sb).norm();
    if (d <= search_radius && d > 0.0) {
      out.points.push_back(world.points[i]);
      out.projected.push_back(project_onto_sphere(world.points[i], p_sb, sphere_radius));
    }
  }
  return out;
}

std::size_t select_free_space_target_index(const std::vector<Vec3>& free,
                                           const std::vector<Vec3>& projected_obstacles) {
  if (free.empty()) {
    throw Error(ErrorCode::kNoFreeSpace, "free-space set is empty");
  }
  std::size_t best = 0;
  double best_clearance = -1.0;
  for (std::size_t m = 0; m < free.size(); ++m) {
    double clearance = std::numeric_limits<double>::infinity();
    for (const auto& o : projected_obstacles) {
      clearance = std::min(clearance, (free[m] - o).norm());
    }
    if (clearance > best_clearance) {
      best_clearance = clearance;
      best = m;
    }
  }
  return best;
}

Vec3 select_free_space_target(const std::vector<Vec3>& free,
                              const std::vector<Vec3>& projected_obstacles) {
  return free[select_free_space_target_index(free, projected_obstacles)];
}

FreeSpaceResult compute_free_space(const ObstacleSet& obstacles, const Vec3& p_sb, double l,
                                   const Vec3& camera_pos, int n) {
  if (!(l > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "compute_free_space: l must be positive");
  }
  FreeSpaceResult out;
  out.lattice = fibonacci_lattice(n, p_sb, l);

  std::vector<bool> hit(out.lattice.size(), false);
  for (const auto& q : obstacles.projected) {
    hit[static_cast<std::size_t>(nearest_lattice_index(q, n, p_sb, l))] = true;
  }
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (hit[i]) out.removed.push_back(i);
  }

  if (!obstacles.points.empty()) {
    // Plane through mean(O) spanned by its two major axes; keep the camera side.
    const Vec3 mean = mean_of(obstacles.points);
    const auto eig = principal_axes(obstacles.points, mean);
    const Vec3 to_camera = camera_pos - mean;
    const double scale = std::max(eig.eigenvalues()(2), 1e-300);
    Vec3 normal;
    if (eig.eigenvalues()(2) <= 0.0) {
      // Single distinct point: face the camera.
      normal = to_camera;
    } else if (eig.eigenvalues()(1) <= 1e-12 * scale) {
      // Collinear obstacles: the plane contains the line and faces the camera.
      const Vec3 axis = eig.eigenvectors().col(2);
      normal = to_camera - to_camera.dot(axis) * axis;
    } else {
      normal = eig.eigenvectors().col(0);
    }
    if (normal.norm() < 1e-15) normal = eig.eigenvectors().col(0);
    if (normal.dot(to_camera) < 0.0) normal = -normal;
    out.plane_applied = true;
    out.plane_point = mean;
    out.plane_normal = UnitVec3(normal);
  } else {
    out.plane_normal = UnitVec3(camera_pos - p_sb);
  }

  for (std::size_t i = 0; i < out.lattice.size(); ++i) {
    if (hit[i]) continue;
    if (out.plane_applied && (out.lattice[i] - out.plane_point).dot(out.plane_normal.vec()) < 0.0) {
      continue;
    }
    out.free.push_back(out.lattice[i]);
    out.free_indices.push_back(i);
  }
  if (out.free.empty()) {
    throw Error(ErrorCode::kNoFreeSpace, "no free lattice point survives obstacle removal");
  }

  std::size_t pick = 0;
  if (obstacles.projected.empty()) {
    // Nothing to keep away from: take the sample facing the camera.
    const Vec3 view = camera_pos - p_sb;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < out.free.size(); ++m) {
      const double s = (out.free[m] - p_sb).dot(view);
      if (s > best) {
        best = s;
        pick = m;
      }
    }
  } else {
    pick = select_free_space_target_index(out.free, obstacles.projected);
  }
  out.target = out.free[pick];
  out.target_index = out.free_indices[pick];
  return out;
}

}  // namespace precut
