// partgrasp command-line front end.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "partgrasp/bench.hpp"
#include "partgrasp/config.hpp"
#include "partgrasp/dual_arm.hpp"
#include "partgrasp/errors.hpp"
#include "partgrasp/objects.hpp"
#include "partgrasp/records.hpp"
#include "partgrasp/scene.hpp"
#include "partgrasp/single_arm.hpp"

using namespace partgrasp;

namespace {

struct CommonOptions {
  std::string scene;
  std::string part;
  std::string out;
  std::string config;
  std::optional<std::size_t> candidates;
  std::optional<std::size_t> steps;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_part) {
  cmd->add_option("--scene", o.scene, "scene JSON file")->required()->check(CLI::ExistingFile);
  auto* part = cmd->add_option("--part", o.part, "target part label or prefix, '*' for the whole object");
  if (needs_part) part->required();
  cmd->add_option("--out", o.out, "output JSON-lines file")->required();
  cmd->add_option("--config", o.config, "TOML config with [gripper] [energy] [sampler] [dual] sections")
      ->check(CLI::ExistingFile);
  cmd->add_option("--candidates", o.candidates, "candidates per arm");
  cmd->add_option("--steps", o.steps, "Langevin steps per noise level");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--threads", o.threads, "sampler worker threads");
}

Config load_config(const std::string& path) { return path.empty() ? Config{} : Config::load(path); }

SamplerConfig sampler_for(const CommonOptions& o, const Config& cfg) {
  SamplerConfig s = sampler_from_config(cfg);
  if (o.candidates) s.num_candidates = *o.candidates;
  if (o.steps) s.steps_per_level = *o.steps;
  if (o.seed) s.seed = *o.seed;
  if (o.threads) s.threads = *o.threads;
  s.validate();
  return s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}

void write_candidates(const std::string& path, const std::vector<GraspCandidate>& cands) {
  if (path.empty()) return;
  auto out = open_out(path);
  for (const auto& c : cands) write_jsonl(out, grasp_record(c));
}

int run_single(const CommonOptions& o, const std::string& dump) {
  const Config cfg = load_config(o.config);
  const SceneDescription scene = load_scene(o.scene);
  const GroundingResult ground = ground_target(scene, o.part);
  const SamplerConfig sampler = sampler_for(o, cfg);
  const GripperModel gripper = gripper_from_config(cfg);
  const SurrogateEnergy field(gripper, energy_weights_from_config(cfg), sampler.schedule);
  const SinglePlan plan = plan_single(ground.global, ground.target, field, sampler, gripper);

  auto out = open_out(o.out);
  write_jsonl(out, grasp_record(plan.grasp));
  write_jsonl(out, metrics_record(!plan.collision.colliding, plan.grasp.e_global, plan.grasp.e_part));
  write_candidates(dump, plan.candidates);
  return 0;
}

struct DualOptions {
  std::optional<double> delta;
  std::optional<double> fc_threshold;
  std::optional<double> mu;
  std::optional<std::size_t> knn;
  bool project = false;
  std::string dump;
};

int run_dual(const CommonOptions& o, const DualOptions& d, bool baseline) {
  const Config cfg = load_config(o.config);
  const SceneDescription scene = load_scene(o.scene);
  const SamplerConfig sampler = sampler_for(o, cfg);
  const GripperModel gripper = gripper_from_config(cfg);
  const SurrogateEnergy field(gripper, energy_weights_from_config(cfg), sampler.schedule);
  DualSettings settings = dual_settings_from_config(cfg);
  if (d.delta) settings.delta = *d.delta;
  if (d.fc_threshold) settings.fc_threshold = *d.fc_threshold;
  if (d.mu) settings.mu = *d.mu;
  if (d.knn) settings.baseline_knn = *d.knn;
  if (d.project) settings.project_centers = true;

  auto out = open_out(o.out);
  try {
    const DualPlan plan = baseline ? plan_baseline_dual(scene, field, sampler, gripper, settings)
                                   : plan_dual(scene, o.part, field, sampler, gripper, settings);
    write_jsonl(out, grasp_record(plan.pair.h1));
    write_jsonl(out, grasp_record(plan.pair.h2));
    write_jsonl(out, pair_record(plan.pair, plan.delta));
    if (!d.dump.empty()) {
      std::vector<GraspCandidate> all = plan.arm1_candidates;
      all.insert(all.end(), plan.arm2_candidates.begin(), plan.arm2_candidates.end());
      write_candidates(d.dump, all);
    }
  } catch (const NoFeasiblePairError& e) {
    write_jsonl(out, {{"error", "no_feasible_pair"}, {"survivors", e.survivor_counts()}});
    std::cerr << "partgrasp: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Part-guided 6-DoF grasp synthesis for single and dual parallel-jaw grippers"};
  app.require_subcommand(1);

  CommonOptions single_opts;
  std::string single_dump;
  auto* single = app.add_subcommand("plan-single", "plan one grasp on a target part");
  add_common(single, single_opts, true);
  single->add_option("--dump-candidates", single_dump, "also write every sampled candidate");

  CommonOptions dual_opts;
  DualOptions dual_extra;
  auto* dual = app.add_subcommand("plan-dual", "plan a two-arm grasp pair");
  add_common(dual, dual_opts, true);
  dual->add_option("--delta", dual_extra.delta, "absolute energy threshold (default: percentile)");
  dual->add_option("--fc-threshold", dual_extra.fc_threshold, "minimum force-closure epsilon");
  dual->add_option("--mu", dual_extra.mu, "friction coefficient");
  dual->add_flag("--project-centers", dual_extra.project, "measure distance between nearest cloud points");
  dual->add_option("--dump-candidates", dual_extra.dump, "also write every sampled candidate");

  CommonOptions base_opts;
  DualOptions base_extra;
  auto* base = app.add_subcommand("baseline-dual", "FPS+KNN region baseline for two arms");
  add_common(base, base_opts, false);
  base->add_option("--knn", base_extra.knn, "points per region (default |cloud|/10)");
  base->add_option("--fc-threshold", base_extra.fc_threshold, "force-closure threshold for the report");
  base->add_option("--mu", base_extra.mu, "friction coefficient");
  base->add_option("--dump-candidates", base_extra.dump, "also write every sampled candidate");

  std::string kind_name, gen_out;
  double scale = 1.0, density = 20000.0;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen-scene", "write a synthetic object scene (JSON + PLY)");
  gen->add_option("--kind", kind_name, "mug|pot|pan|knife|bottle|keyboard|basin|laptop")->required();
  gen->add_option("--scale", scale, "uniform size factor")->capture_default_str();
  gen->add_option("--density", density, "points per square metre")->capture_default_str();
  gen->add_option("--seed", gen_seed, "sampling seed")->capture_default_str();
  gen->add_option("--out", gen_out, "output directory")->required();

  std::string bench_config, bench_out, trials_out;
  bool omit_timing = false;
  auto* bench = app.add_subcommand("bench", "run the synthetic benchmark");
  bench->add_option("--config", bench_config, "benchmark TOML")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", bench_out, "report CSV")->required();
  bench->add_option("--trials-out", trials_out, "per-trial CSV");
  bench->add_flag("--omit-timing", omit_timing, "write 0 for runtimes so reports are byte-reproducible");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*single) return run_single(single_opts, single_dump);
    if (*dual) return run_dual(dual_opts, dual_extra, false);
    if (*base) return run_dual(base_opts, base_extra, true);
    if (*gen) {
      const auto kind = parse_object_kind(kind_name);
      if (!kind) throw ParameterError("unknown object kind '" + kind_name + "'");
      const SceneDescription scene = gen_object(*kind, scale, density, gen_seed);
      std::cout << save_scene(scene, gen_out, kind_name).string() << "\n";
      return 0;
    }
    if (*bench) {
      BenchSettings settings = bench_settings_from_config(Config::load(bench_config));
      settings.omit_timing = omit_timing;
      const BenchReport report = run_benchmark(settings);
      auto out = open_out(bench_out);
      write_report_csv(out, report.rows);
      if (!trials_out.empty()) {
        auto t = open_out(trials_out);
        write_trials_csv(t, report.trials);
      }
      print_report_table(std::cout, report.rows);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "partgrasp: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
