#include "precut/arm_model.hpp"

#include <cmath>
#include <numbers>

namespace precut {

namespace {

Eigen::Isometry3d dh_transform(const DhLink& l, double theta) {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.rotate(Eigen::AngleAxisd(theta, Vec3::UnitZ()));
  t.translate(Vec3(0.0, 0.0, l.d));
  t.translate(Vec3(l.a, 0.0, 0.0));
  t.rotate(Eigen::AngleAxisd(l.alpha, Vec3::UnitX()));
  return t;
}

Eigen::Isometry3d to_isometry(const Pose& p) {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.linear() = p.orientation.matrix();
  t.translation() = p.position;
  return t;
}

Vec3 rotation_log(const Mat3& r) {
  const Eigen::AngleAxisd aa(r);
  return aa.angle() * aa.axis();
}

}  // namespace

ArmModel make_free_flyer_model() {
  ArmModel m;
  m.dof = 6;
  m.q = JointVector::Zero(6);
  m.jacobian_provider = [](const JointVector&) -> Jacobian { return Jacobian::Identity(6, 6); };
  return m;
}

SerialChain::SerialChain(std::array<DhLink, 6> links, const JointVector& q_home,
                         const Pose& tip_at_home)
    : links_(links), q_home_(q_home), base_(Eigen::Isometry3d::Identity()) {
  if (q_home.size() != 6) {
    throw Error(ErrorCode::kInvalidArgument, "SerialChain: home configuration needs 6 joints");
  }
  base_ = to_isometry(tip_at_home) * chain(q_home, nullptr).inverse();
}

std::array<DhLink, 6> SerialChain::ur5e_links() {
  constexpr double h = std::numbers::pi / 2.0;
  return {{{0.1625, 0.0, h},
           {0.0, -0.425, 0.0},
           {0.0, -0.3922, 0.0},
           {0.1333, 0.0, h},
           {0.0997, 0.0, -h},
           {0.0996, 0.0, 0.0}}};
}

Eigen::Isometry3d SerialChain::chain(const JointVector& q,
                                     std::array<Eigen::Isometry3d, 7>* frames) const {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  if (frames) (*frames)[0] = t;
  for (int i = 0; i < 6; ++i) {
    t = t * dh_transform(links_[i], q(i));
    if (frames) (*frames)[i + 1] = t;
  }
  return t;
}

Pose SerialChain::forward(const JointVector& q) const {
  const Eigen::Isometry3d t = base_ * chain(q, nullptr);
  Eigen::Quaterniond r(t.linear());
  r.normalize();
  return {t.translation(), Rotation(r.toRotationMatrix())};
}

Jacobian SerialChain::numeric_jacobian(const JointVector& q, double h) const {
  Jacobian j(6, 6);
  for (int i = 0; i < 6; ++i) {
    JointVector qp = q, qm = q;
    qp(i) += h;
    qm(i) -= h;
    const Pose a = forward(qp);
    const Pose b = forward(qm);
    j.block<3, 1>(0, i) = (a.position - b.position) / (2.0 * h);
    j.block<3, 1>(3, i) =
        rotation_log(a.orientation.matrix() * b.orientation.matrix().transpose()) / (2.0 * h);
  }
  return j;
}

Jacobian SerialChain::geometric_jacobian(const JointVector& q) const {
  std::array<Eigen::Isometry3d, 7> frames;
  chain(q, &frames);
  const Vec3 tip = (base_ * frames[6]).translation();
  Jacobian j(6, 6);
  for (int i = 0; i < 6; ++i) {
    const Eigen::Isometry3d f = base_ * frames[i];
    const Vec3 z = f.linear().col(2);
    j.block<3, 1>(0, i) = z.cross(tip - f.translation());
    j.block<3, 1>(3, i) = z;
  }
  return j;
}

ArmModel make_serial_model(const SerialChain& chain) {
  ArmModel m;
  m.dof = 6;
  m.q = chain.home();
  m.jacobian_provider = [chain](const JointVector& q) { return chain.numeric_jacobian(q); };
  return m;
}

}  // namespace precut
