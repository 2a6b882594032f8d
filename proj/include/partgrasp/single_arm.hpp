#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "partgrasp/diffusion.hpp"
#include "partgrasp/gripper.hpp"

namespace partgrasp {

// Position of the minimum-e_global candidate; ties go to lower e_part, then
// lower candidate index. Throws PreconditionError on an empty list.
std::size_t select_min_energy(std::span<const GraspCandidate> candidates);

struct SinglePlan {
  GraspCandidate grasp;
  ObjectCollision collision;  // reported, not used for selection
  std::vector<GraspCandidate> candidates;
};

SinglePlan plan_single(const PointCloud& global, const PointCloud& part, const EnergyField& field,
                       const SamplerConfig& cfg, const GripperModel& gripper);

}  // namespace partgrasp
