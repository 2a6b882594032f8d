#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "partgrasp/energy.hpp"
#include "partgrasp/geometry.hpp"

namespace partgrasp {

enum class Arm { Single, Arm1, Arm2 };

const char* to_string(Arm arm);

struct Contact {
  Vec3 point;
  Vec3 normal;  // unit, outward from the object
  Arm arm = Arm::Single;
};

// Box in world coordinates: columns of `axes` are the box axes.
struct OrientedBox {
  Vec3 center;
  Mat3 axes;
  Vec3 half;

  bool contains_strict(const Vec3& p) const;
  std::array<Vec3, 8> corners() const;
};

// Two fingers then the palm.
std::array<OrientedBox, 3> gripper_boxes(const Pose& pose, const GripperModel& gripper);

// Separating-axis test; boxes that only touch count as intersecting.
bool boxes_intersect(const OrientedBox& a, const OrientedBox& b);

struct ObjectCollision {
  bool colliding = false;
  std::size_t count = 0;  // cloud points strictly inside a finger or the palm
};

ObjectCollision gripper_object_collision(const Pose& pose, const PointCloud& cloud,
                                         const GripperModel& gripper);

bool gripper_gripper_collision(const Pose& a, const Pose& b, const GripperModel& gripper);

// For each pad, the cloud point inside the closing volume nearest to the pad
// plane. Returns 0, 1 or 2 contacts (1 when both pads pick the same point).
std::vector<Contact> extract_contacts(const Pose& pose, const PointCloud& cloud,
                                      const GripperModel& gripper, Arm arm = Arm::Single);

}  // namespace partgrasp
