#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "partgrasp/energy.hpp"
#include "partgrasp/geometry.hpp"
#include "partgrasp/gripper.hpp"

namespace partgrasp {

class Config;

struct GraspCandidate {
  Pose pose;
  double e_global = 0.0;  // energy against the whole object at level 0
  double e_part = 0.0;    // energy against the target region at level 0
  Arm arm = Arm::Single;
  std::size_t index = 0;  // position in the sampler's initial population
};

struct SamplerConfig {
  std::size_t num_candidates = 100;
  NoiseSchedule schedule = make_schedule(10, 0.02, 0.002, 0.006);
  std::size_t steps_per_level = 20;
  std::uint64_t seed = 0;
  // Radius of the initial translation ball around the target centroid;
  // <= 0 selects target bounding radius + init_margin.
  double init_radius = 0.0;
  // Planners set this to the gripper's max jaw width.
  double init_margin = 0.085;
  // Length that converts rotation angles into metres for step preconditioning
  // and noise: an angular step of theta counts as rotation_scale * theta.
  double rotation_scale = 0.015;
  // Drift per step is clipped to max_drift * sigma in the scaled tangent norm.
  double max_drift = 3.0;
  // Noise-free steps at the finest level after the schedule, with the drift
  // clipped to the finest sigma.
  std::size_t polish_steps = 10;
  std::size_t threads = 1;

  void validate() const;
};

// [sampler] section; missing keys keep their defaults.
SamplerConfig sampler_from_config(const Config& cfg);

enum class GuideBranch { Global, Part };

struct GuidedEnergy {
  double value = 0.0;  // max(e_global, e_part)
  double e_global = 0.0;
  double e_part = 0.0;
  GuideBranch branch = GuideBranch::Global;
};

// Ties resolve to the global branch.
GuidedEnergy guided_energy(const Pose& pose, std::size_t level, const PointCloud& global,
                           const PointCloud& part, const EnergyField& field);

// Score of whichever branch guided_energy selects.
Twist guided_score(const Pose& pose, std::size_t level, const PointCloud& global,
                   const PointCloud& part, const EnergyField& field);

// Annealed Langevin sampling under the max-guided score. Output is sorted by
// (e_global, e_part, index) and is identical for any thread count.
std::vector<GraspCandidate> sample_grasps(const PointCloud& global, const PointCloud& part,
                                          const EnergyField& field, const SamplerConfig& cfg,
                                          Arm arm = Arm::Single);

}  // namespace partgrasp
