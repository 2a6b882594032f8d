#include "partgrasp/gripper.hpp"

#include <cmath>
#include <limits>

#include "partgrasp/errors.hpp"

namespace partgrasp {

const char* to_string(Arm arm) {
  switch (arm) {
    case Arm::Single: return "single";
    case Arm::Arm1: return "arm1";
    case Arm::Arm2: return "arm2";
  }
  return "single";
}

bool OrientedBox::contains_strict(const Vec3& p) const {
  const Vec3 local = axes.transpose() * (p - center);
  return (local.cwiseAbs().array() < half.array()).all();
}

std::array<Vec3, 8> OrientedBox::corners() const {
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) {
    const Vec3 s((i & 1) ? 1.0 : -1.0, (i & 2) ? 1.0 : -1.0, (i & 4) ? 1.0 : -1.0);
    out[i] = center + axes * s.cwiseProduct(half);
  }
  return out;
}

std::array<OrientedBox, 3> gripper_boxes(const Pose& pose, const GripperModel& gripper) {
  const Mat3 R = pose.rotation_matrix();
  const LocalBox local[3] = {gripper.finger_box(+1), gripper.finger_box(-1), gripper.palm_box()};
  std::array<OrientedBox, 3> out;
  for (int i = 0; i < 3; ++i) out[i] = {pose.apply(local[i].center), R, local[i].half};
  return out;
}

bool boxes_intersect(const OrientedBox& a, const OrientedBox& b) {
  const Mat3 R = a.axes.transpose() * b.axes;
  const Vec3 T = a.axes.transpose() * (b.center - a.center);
  Mat3 absR = R.cwiseAbs();

  auto separated = [](double dist, double ra, double rb) { return dist > ra + rb; };

  for (int i = 0; i < 3; ++i) {
    const double rb = b.half.dot(absR.row(i));
    if (separated(std::abs(T[i]), a.half[i], rb)) return false;
  }
  for (int j = 0; j < 3; ++j) {
    const double ra = a.half.dot(absR.col(j));
    if (separated(std::abs(T.dot(R.col(j))), ra, b.half[j])) return false;
  }
  // edge-edge axes a_i x b_j, skipped when the edges are parallel
  for (int i = 0; i < 3; ++i) {
    const int i1 = (i + 1) % 3;
    const int i2 = (i + 2) % 3;
    for (int j = 0; j < 3; ++j) {
      const int j1 = (j + 1) % 3;
      const int j2 = (j + 2) % 3;
      if (1.0 - absR(i, j) < 1e-12) continue;
      const double ra = a.half[i1] * absR(i2, j) + a.half[i2] * absR(i1, j);
      const double rb = b.half[j1] * absR(i, j2) + b.half[j2] * absR(i, j1);
      const double dist = std::abs(T[i2] * R(i1, j) - T[i1] * R(i2, j));
      if (separated(dist, ra, rb)) return false;
    }
  }
  return true;
}

ObjectCollision gripper_object_collision(const Pose& pose, const PointCloud& cloud,
                                         const GripperModel& gripper) {
  const LocalBox boxes[3] = {gripper.finger_box(+1), gripper.finger_box(-1), gripper.palm_box()};
  ObjectCollision out;
  for (const auto& p : cloud.points()) {
    const Vec3 local = pose.apply_inverse(p);
    for (const auto& box : boxes) {
      if (((local - box.center).cwiseAbs().array() < box.half.array()).all()) {
        ++out.count;
        break;
      }
    }
  }
  out.colliding = out.count > 0;
  return out;
}

bool gripper_gripper_collision(const Pose& a, const Pose& b, const GripperModel& gripper) {
  const auto ba = gripper_boxes(a, gripper);
  const auto bb = gripper_boxes(b, gripper);
  for (const auto& x : ba) {
    for (const auto& y : bb) {
      if (boxes_intersect(x, y)) return true;
    }
  }
  return false;
}

std::vector<Contact> extract_contacts(const Pose& pose, const PointCloud& cloud,
                                      const GripperModel& gripper, Arm arm) {
  if (!cloud.has_normals()) throw PreconditionError("extract_contacts needs a cloud with normals");
  const LocalBox jaw = gripper.jaw_box();
  std::size_t best_pos = cloud.size();
  std::size_t best_neg = cloud.size();
  double max_x = -std::numeric_limits<double>::infinity();
  double min_x = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3 local = pose.apply_inverse(cloud.point(i));
    if (!((local.cwiseAbs().array() <= jaw.half.array()).all())) continue;
    if (local.x() > max_x) {
      max_x = local.x();
      best_pos = i;
    }
    if (local.x() < min_x) {
      min_x = local.x();
      best_neg = i;
    }
  }
  std::vector<Contact> out;
  if (best_pos == cloud.size()) return out;
  out.push_back({cloud.point(best_pos), cloud.normal(best_pos), arm});
  if (best_neg != best_pos) out.push_back({cloud.point(best_neg), cloud.normal(best_neg), arm});
  return out;
}

}  // namespace partgrasp
