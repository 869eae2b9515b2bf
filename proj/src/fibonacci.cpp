#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "precut/scene.hpp"

namespace precut {

namespace {

constexpr double kPhi = std::numbers::phi;
constexpr double kPi = std::numbers::pi;

double frac(double x) { return x - std::floor(x); }

// Unit-sphere sample i of n.
Vec3 unit_point(long i, int n) {
  if (n == 1) return Vec3::UnitZ();
  const double di = static_cast<double>(i);
  const double phi = 2.0 * kPi * frac(di * (kPhi - 1.0));
  const double z = 1.0 - (2.0 * di + 1.0) / n;
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {std::cos(phi) * s, std::sin(phi) * s, z};
}

void check_args(int n, double radius) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "fibonacci lattice needs n >= 1");
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "fibonacci lattice needs radius > 0");
}

}  // namespace

Vec3 fibonacci_point(int i, int n, const Vec3& center, double radius) {
  check_args(n, radius);
  if (i < 0 || i >= n) throw Error(ErrorCode::kInvalidArgument, "fibonacci index out of range");
  return center + radius * unit_point(i, n);
}

std::vector<Vec3> fibonacci_lattice(int n, const Vec3& center, double radius) {
  check_args(n, radius);
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pts.push_back(center + radius * unit_point(i, n));
  return pts;
}

// Inverse spherical Fibonacci mapping. In (phi, z) coordinates the samples
// form a lattice locally spanned by the index steps F_k and F_{k+1}
// (consecutive Fibonacci numbers), with k chosen from the local point
// density at z. Solving for the lattice cell containing the query gives four
// corner candidates. The cell estimate is only approximate near zone
// boundaries and the poles, so neighbouring cells and zones are scored too;
// the candidate count stays fixed regardless of n.
int nearest_lattice_index(const Vec3& p, int n, const Vec3& center, double radius) {
  check_args(n, radius);
  if (n == 1) return 0;
  const Vec3 d = p - center;
  const double dn = d.norm();
  if (!(dn > 0.0)) {
    throw Error(ErrorCode::kDegenerateInput, "nearest_lattice_index: query at sphere center");
  }
  const Vec3 q = d / dn;
  const double phi = std::atan2(q.y(), q.x());
  const double z = std::clamp(q.z(), -1.0, 1.0);

  const double density = static_cast<double>(n) * kPi * std::sqrt(5.0) * (1.0 - z * z);
  const double k0 = std::max(2.0, std::floor(std::log(density) / std::log(kPhi * kPhi)));

  long best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  auto consider = [&](long i) {
    i = std::clamp<long>(i, 0, n - 1);
    const double d2 = (unit_point(i, n) - q).squaredNorm();
    if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
      best_d2 = d2;
      best = i;
    }
  };

  for (double k = std::max(2.0, k0 - 1.0); k <= k0 + 1.0; k += 1.0) {
    const double fk = std::pow(kPhi, k) / std::sqrt(5.0);
    const std::array<double, 2> f = {std::round(fk), std::round(fk * kPhi)};
    // Columns are the (phi, z) displacements of index steps f[0] and f[1].
    Eigen::Matrix2d basis;
    for (int c = 0; c < 2; ++c) {
      basis(0, c) = 2.0 * kPi * (frac((f[c] + 1.0) * kPhi) - (kPhi - 1.0));
      basis(1, c) = -2.0 * f[c] / n;
    }
    const double det = basis.determinant();
    if (std::abs(det) < 1e-300) continue;
    const Eigen::Vector2d cell =
        (basis.inverse() * Eigen::Vector2d(phi, z - (1.0 - 1.0 / n))).array().floor();
    for (int du = -1; du <= 2; ++du) {
      for (int dv = -1; dv <= 2; ++dv) {
        const double i = f[0] * (cell(0) + du) + f[1] * (cell(1) + dv);
        consider(static_cast<long>(i));
      }
    }
  }

  // Polar caps: the lattice cell degenerates there, so score the cap samples.
  const long cap = std::min<long>(n, 8);
  if (z > 1.0 - 2.0 * cap / n) {
    for (long i = 0; i < cap; ++i) consider(i);
  }
  if (z < -1.0 + 2.0 * cap / n) {
    for (long i = n - cap; i < n; ++i) consider(i);
  }
  return static_cast<int>(best);
}

}  // namespace precut
