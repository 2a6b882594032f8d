#include "partgrasp/dual_arm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "partgrasp/config.hpp"
#include "partgrasp/errors.hpp"
#include "partgrasp/force_closure.hpp"

namespace partgrasp {

DualSettings dual_settings_from_config(const Config& cfg) {
  DualSettings s;
  if (cfg.has("dual", "delta")) s.delta = cfg.get_double("dual", "delta", 0.0);
  s.delta_percentile = cfg.get_double("dual", "delta_percentile", s.delta_percentile);
  s.fc_threshold = cfg.get_double("dual", "fc_threshold", s.fc_threshold);
  s.mu = cfg.get_double("dual", "mu", s.mu);
  s.cone_edges = static_cast<std::size_t>(cfg.get_int("dual", "cone_edges", 8));
  s.project_centers = cfg.get_bool("dual", "project_centers", s.project_centers);
  s.baseline_knn = static_cast<std::size_t>(cfg.get_int("dual", "knn", 0));
  return s;
}

std::vector<GraspCandidate> filter_candidates(std::span<const GraspCandidate> candidates, double delta) {
  std::vector<GraspCandidate> out;
  for (const auto& c : candidates) {
    if (c.e_global < delta && c.e_part < delta) out.push_back(c);
  }
  return out;
}

double percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw PreconditionError("percentile of an empty list");
  if (!(pct >= 0.0 && pct <= 100.0)) throw ParameterError("percentile must be within [0, 100]");
  std::sort(values.begin(), values.end());
  const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double resolve_delta(std::span<const GraspCandidate> arm1, std::span<const GraspCandidate> arm2,
                     const DualSettings& settings) {
  if (settings.delta) return *settings.delta;
  std::vector<double> pooled;
  for (const auto& c : arm1) pooled.push_back(c.e_global);
  for (const auto& c : arm2) pooled.push_back(c.e_global);
  return percentile(std::move(pooled), settings.delta_percentile);
}

namespace {

Vec3 nearest_point(const PointCloud& cloud, const Vec3& q) {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double d2 = (cloud.point(i) - q).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return cloud.point(best);
}

}  // namespace

double pair_distance(const GraspCandidate& a, const GraspCandidate& b, const PointCloud& cloud,
                     bool project) {
  Vec3 ca = a.pose.translation();
  Vec3 cb = b.pose.translation();
  if (project) {
    ca = nearest_point(cloud, ca);
    cb = nearest_point(cloud, cb);
  }
  return (ca - cb).norm();
}

GraspPair select_pair(std::span<const GraspCandidate> filt1, std::span<const GraspCandidate> filt2,
                      const PointCloud& cloud, const GripperModel& gripper,
                      const DualSettings& settings) {
  std::array<std::size_t, 4> counts{filt1.size(), filt2.size(), 0, 0};
  if (filt1.empty() || filt2.empty()) {
    throw NoFeasiblePairError("an arm has no candidate below the energy threshold", counts);
  }
  std::vector<std::vector<Contact>> contacts1, contacts2;
  for (const auto& c : filt1) contacts1.push_back(extract_contacts(c.pose, cloud, gripper, Arm::Arm1));
  for (const auto& c : filt2) contacts2.push_back(extract_contacts(c.pose, cloud, gripper, Arm::Arm2));

  std::optional<GraspPair> best;
  for (std::size_t i = 0; i < filt1.size(); ++i) {
    for (std::size_t j = 0; j < filt2.size(); ++j) {
      if (gripper_gripper_collision(filt1[i].pose, filt2[j].pose, gripper)) continue;
      ++counts[2];
      std::vector<Contact> pooled = contacts1[i];
      pooled.insert(pooled.end(), contacts2[j].begin(), contacts2[j].end());
      const double eps =
          pooled.size() < 2 ? 0.0 : force_closure_epsilon(pooled, settings.mu, settings.cone_edges);
      if (eps < settings.fc_threshold) continue;
      ++counts[3];

      GraspPair cand;
      cand.h1 = filt1[i];
      cand.h2 = filt2[j];
      cand.center_distance = pair_distance(filt1[i], filt2[j], cloud, settings.project_centers);
      cand.fc_epsilon = eps;
      bool better = !best;
      if (best) {
        if (cand.center_distance != best->center_distance) {
          better = cand.center_distance > best->center_distance;
        } else if (cand.fc_epsilon != best->fc_epsilon) {
          better = cand.fc_epsilon > best->fc_epsilon;
        } else {
          better = std::pair(cand.h1.index, cand.h2.index) < std::pair(best->h1.index, best->h2.index);
        }
      }
      if (better) best = cand;
    }
  }
  if (!best) {
    throw NoFeasiblePairError("no grasp pair is both collision-free and force-closure stable", counts);
  }
  best->survivors = counts;
  return *best;
}

std::uint64_t arm_seed(std::uint64_t seed, Arm arm) {
  return mix_seed(seed, arm == Arm::Arm1 ? 1 : arm == Arm::Arm2 ? 2 : 0);
}

namespace {

void sample_both(DualPlan& plan, const PointCloud& global, const EnergyField& field,
                 const SamplerConfig& cfg, const GripperModel& gripper) {
  SamplerConfig c1 = cfg;
  SamplerConfig c2 = cfg;
  c1.seed = arm_seed(cfg.seed, Arm::Arm1);
  c2.seed = arm_seed(cfg.seed, Arm::Arm2);
  c1.init_margin = c2.init_margin = gripper.max_jaw_width;
  plan.arm1_candidates = sample_grasps(global, plan.regions.first, field, c1, Arm::Arm1);
  plan.arm2_candidates = sample_grasps(global, plan.regions.second, field, c2, Arm::Arm2);
}

DualPlan plan_with_regions(RegionSplit regions, const PointCloud& cloud,
                           const EnergyField& field, const SamplerConfig& cfg,
                           const GripperModel& gripper, const DualSettings& settings) {
  if (!cloud.has_normals()) throw PreconditionError("dual planning needs a cloud with normals");
  DualPlan plan;
  plan.regions = std::move(regions);
  sample_both(plan, cloud, field, cfg, gripper);
  plan.delta = resolve_delta(plan.arm1_candidates, plan.arm2_candidates, settings);
  const auto f1 = filter_candidates(plan.arm1_candidates, plan.delta);
  const auto f2 = filter_candidates(plan.arm2_candidates, plan.delta);
  plan.pair = select_pair(f1, f2, cloud, gripper, settings);
  return plan;
}

}  // namespace

DualPlan plan_dual(const SceneDescription& scene, const std::string& part_label,
                   const EnergyField& field, const SamplerConfig& cfg, const GripperModel& gripper,
                   const DualSettings& settings, const GroundingOptions& grounding) {
  return plan_with_regions(determine_target_regions(scene, part_label, grounding), scene.cloud, field,
                           cfg, gripper, settings);
}

DualPlan plan_baseline_dual(const SceneDescription& scene, const EnergyField& field,
                            const SamplerConfig& cfg, const GripperModel& gripper,
                            const DualSettings& settings) {
  const std::size_t k = settings.baseline_knn > 0 ? settings.baseline_knn
                                                  : std::max<std::size_t>(1, scene.cloud.size() / 10);
  return plan_with_regions(baseline_fps_knn_regions(scene.cloud, k, cfg.seed), scene.cloud, field, cfg,
                           gripper, settings);
}

}  // namespace partgrasp
