#include "partgrasp/single_arm.hpp"

#include "partgrasp/errors.hpp"

namespace partgrasp {

std::size_t select_min_energy(std::span<const GraspCandidate> candidates) {
  if (candidates.empty()) throw PreconditionError("no candidates to select from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const auto& a = candidates[i];
    const auto& b = candidates[best];
    if (a.e_global != b.e_global) {
      if (a.e_global < b.e_global) best = i;
    } else if (a.e_part != b.e_part) {
      if (a.e_part < b.e_part) best = i;
    } else if (a.index < b.index) {
      best = i;
    }
  }
  return best;
}

SinglePlan plan_single(const PointCloud& global, const PointCloud& part, const EnergyField& field,
                       const SamplerConfig& cfg, const GripperModel& gripper) {
  SinglePlan plan;
  SamplerConfig c = cfg;
  c.init_margin = gripper.max_jaw_width;
  plan.candidates = sample_grasps(global, part, field, c, Arm::Single);
  plan.grasp = plan.candidates[select_min_energy(plan.candidates)];
  plan.collision = gripper_object_collision(plan.grasp.pose, global, gripper);
  return plan;
}

}  // namespace partgrasp
