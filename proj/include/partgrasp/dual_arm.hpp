#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "partgrasp/diffusion.hpp"
#include "partgrasp/gripper.hpp"
#include "partgrasp/scene.hpp"

namespace partgrasp {

class Config;

struct DualSettings {
  // Absolute energy threshold; when unset, the delta_percentile-th percentile
  // of the pooled e_global values of both arms is used.
  std::optional<double> delta;
  double delta_percentile = 60.0;
  double fc_threshold = 1e-3;
  double mu = 0.5;
  std::size_t cone_edges = 8;
  // Measure the pair distance between the cloud points nearest to each
  // grasp origin instead of between the origins themselves.
  bool project_centers = false;
  // Region size for the FPS+KNN baseline; 0 means |cloud| / 10.
  std::size_t baseline_knn = 0;
};

// [dual] section; missing keys keep their defaults.
DualSettings dual_settings_from_config(const Config& cfg);

struct GraspPair {
  GraspCandidate h1;
  GraspCandidate h2;
  double center_distance = 0.0;
  double fc_epsilon = 0.0;
  // filtered arm1, filtered arm2, non-colliding pairs, stable pairs
  std::array<std::size_t, 4> survivors{};
};

// Keeps candidates with e_global < delta and e_part < delta, in order.
std::vector<GraspCandidate> filter_candidates(std::span<const GraspCandidate> candidates, double delta);

// Linear-interpolated percentile (0..100) of `values`.
double percentile(std::vector<double> values, double pct);

double resolve_delta(std::span<const GraspCandidate> arm1, std::span<const GraspCandidate> arm2,
                     const DualSettings& settings);

// Distance used for pair ranking.
double pair_distance(const GraspCandidate& a, const GraspCandidate& b, const PointCloud& cloud,
                     bool project);

// Enumerates filt1 x filt2, drops gripper-gripper collisions, then pairs whose
// pooled contacts have fc_epsilon < fc_threshold, and returns the survivor with
// the largest center distance (ties: larger epsilon, then smaller
// (h1.index, h2.index)). Throws NoFeasiblePairError when nothing survives.
GraspPair select_pair(std::span<const GraspCandidate> filt1, std::span<const GraspCandidate> filt2,
                      const PointCloud& cloud, const GripperModel& gripper,
                      const DualSettings& settings);

struct DualPlan {
  GraspPair pair;
  RegionSplit regions;
  double delta = 0.0;
  std::vector<GraspCandidate> arm1_candidates;
  std::vector<GraspCandidate> arm2_candidates;
};

// Per-arm sampling seeds derived from the base seed.
std::uint64_t arm_seed(std::uint64_t seed, Arm arm);

DualPlan plan_dual(const SceneDescription& scene, const std::string& part_label,
                   const EnergyField& field, const SamplerConfig& cfg, const GripperModel& gripper,
                   const DualSettings& settings, const GroundingOptions& grounding = {});

// plan_dual with the target regions replaced by baseline_fps_knn_regions,
// seeded by cfg.seed.
DualPlan plan_baseline_dual(const SceneDescription& scene, const EnergyField& field,
                            const SamplerConfig& cfg, const GripperModel& gripper,
                            const DualSettings& settings);

}  // namespace partgrasp
