#pragma once

#include <array>
#include <functional>

#include <Eigen/Core>

#include "precut/core.hpp"

namespace precut {

using JointVector = Eigen::VectorXd;
using Jacobian = Eigen::Matrix<double, 6, Eigen::Dynamic>;

// Velocity-level arm description: joint state plus a map q -> 6xN Jacobian
// (rows: linear then angular velocity of the tip in the world frame).
struct ArmModel {
  int dof = 6;
  std::function<Jacobian(const JointVector&)> jacobian_provider;
  JointVector q;

  Jacobian jacobian() const { return jacobian_provider(q); }
};

// Identity Jacobian: joint velocities are the task-space twist.
ArmModel make_free_flyer_model();

struct DhLink {
  double d = 0.0;
  double a = 0.0;
  double alpha = 0.0;
};

// Six-joint serial chain with standard DH links, mounted so that a chosen
// joint configuration places the tip at a chosen world pose.
class SerialChain {
 public:
  SerialChain(std::array<DhLink, 6> links, const JointVector& q_home, const Pose& tip_at_home);

  // UR5e-sized link table.
  static std::array<DhLink, 6> ur5e_links();

  Pose forward(const JointVector& q) const;
  // Central differences of the forward map, step `h` rad.
  Jacobian numeric_jacobian(const JointVector& q, double h = 1e-6) const;
  // Closed-form geometric Jacobian, for cross-checking.
  Jacobian geometric_jacobian(const JointVector& q) const;

  const JointVector& home() const { return q_home_; }

 private:
  Eigen::Isometry3d chain(const JointVector& q, std::array<Eigen::Isometry3d, 7>* frames) const;

  std::array<DhLink, 6> links_;
  JointVector q_home_;
  Eigen::Isometry3d base_;
};

ArmModel make_serial_model(const SerialChain& chain);

}  // namespace precut
