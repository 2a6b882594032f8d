#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "partgrasp/diffusion.hpp"
#include "partgrasp/dual_arm.hpp"
#include "partgrasp/energy.hpp"
#include "partgrasp/objects.hpp"

namespace partgrasp {

class Config;

enum class Method { OursSingle, OursDual, BaselineDual, Unconstrained };

std::string to_string(Method method);
std::optional<Method> parse_method(const std::string& name);
bool is_dual(Method method);

// One selected grasp with the region its contacts should lie on.
struct GraspOutcome {
  GraspCandidate grasp;
  const PointCloud* region = nullptr;
};

struct MetricThresholds {
  double containment_radius = 0.01;
  double antipodal_cos = 0.8660254037844386;  // cos 30 deg
  double fc_threshold = 1e-3;
};

struct TrialMetrics {
  bool collision_free = false;
  bool contained = false;
  bool stable = false;
};

// Collision-free when no gripper touches the object; contained when every
// extracted contact lies within the containment radius of its region; stable
// when each gripper has two contacts whose normals are within 30 deg of the
// closing axis and of each other, and (for pairs) fc_epsilon meets the
// threshold. Collisions are tested against `reference` when given, else
// against `cloud`.
TrialMetrics compute_metrics(const std::vector<GraspOutcome>& grasps, const PointCloud& cloud,
                             const GripperModel& gripper, std::optional<double> fc_epsilon,
                             const MetricThresholds& thresholds = {},
                             const PointCloud* reference = nullptr);

struct TrialRecord {
  std::string object;
  Method method = Method::OursSingle;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool ok = false;  // planner returned a grasp
  TrialMetrics metrics;
  double center_distance = 0.0;  // dual only
  double fc_epsilon = 0.0;       // dual only
  std::array<std::size_t, 4> survivors{};  // dual only, as in GraspPair
  double runtime_s = 0.0;
  std::string error;
};

struct BenchRow {
  std::string object;  // "ALL" for the per-method aggregate
  std::string method;
  std::size_t trials = 0;
  double cfr = 0.0;
  double part_containment = 0.0;
  double stability_proxy = 0.0;
  double mean_D = 0.0;  // NaN for single-arm methods
  double runtime_s = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<TrialRecord> trials;
};

struct BenchSettings {
  std::vector<ObjectKind> objects;
  std::vector<Method> methods;
  std::size_t trials = 30;
  std::uint64_t seed = 0;
  std::uint64_t object_seed = 7;
  double scale = 1.0;
  // Points per m^2, raised per object so that each cloud has at least 600 points.
  double density = 6000.0;
  // Density of the resampled surface used for the collision test; 0 reuses
  // the planning cloud.
  double reference_density = 40000.0;
  bool omit_timing = false;

  GripperModel gripper;
  EnergyWeights weights;
  SamplerConfig sampler;
  DualSettings dual;
};

// [bench] plus the [gripper], [energy], [sampler] and [dual] sections.
BenchSettings bench_settings_from_config(const Config& cfg);

// Runs every (object, method) pair for the configured trials with seeds
// seed + trial. Per-trial failures are recorded, not rethrown.
BenchReport run_benchmark(const BenchSettings& settings);

// Rows grouped by method: per-object rows then one "ALL" row holding the
// mean of the per-object rows.
std::vector<BenchRow> summarize(const std::vector<TrialRecord>& trials,
                                const std::vector<std::string>& objects,
                                const std::vector<Method>& methods);

void write_report_csv(std::ostream& out, const std::vector<BenchRow>& rows);
std::vector<BenchRow> read_report_csv(std::istream& in);
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& trials);
void print_report_table(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace partgrasp
