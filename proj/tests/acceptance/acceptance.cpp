// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "partgrasp/bench.hpp"
#include "partgrasp/dual_arm.hpp"
#include "partgrasp/errors.hpp"
#include "partgrasp/force_closure.hpp"
#include "partgrasp/linear_program.hpp"
#include "partgrasp/objects.hpp"
#include "partgrasp/records.hpp"

using namespace partgrasp;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------
// Dual-arm oracle shared by criteria 1 and 8

struct PairChoice {
  std::size_t index1 = 0;
  std::size_t index2 = 0;
  double distance = 0.0;
  double epsilon = 0.0;
  std::array<std::size_t, 4> survivors{};
  bool feasible = false;
};

// Filters both lists with delta, then enumerates every pair: gripper-gripper
// collision, pooled-contact force closure, largest centre distance (ties:
// larger epsilon, then smaller index pair).
PairChoice brute_force_pair(const std::vector<GraspCandidate>& arm1, const std::vector<GraspCandidate>& arm2,
                            double delta, const PointCloud& cloud, const GripperModel& g,
                            const DualSettings& s) {
  std::vector<const GraspCandidate*> f1, f2;
  for (const auto& c : arm1) {
    if (c.e_global < delta && c.e_part < delta) f1.push_back(&c);
  }
  for (const auto& c : arm2) {
    if (c.e_global < delta && c.e_part < delta) f2.push_back(&c);
  }
  PairChoice best;
  best.survivors = {f1.size(), f2.size(), 0, 0};
  for (const auto* a : f1) {
    for (const auto* b : f2) {
      if (gripper_gripper_collision(a->pose, b->pose, g)) continue;
      ++best.survivors[2];
      auto cs = extract_contacts(a->pose, cloud, g, Arm::Arm1);
      const auto cb = extract_contacts(b->pose, cloud, g, Arm::Arm2);
      cs.insert(cs.end(), cb.begin(), cb.end());
      const double eps = cs.size() < 2 ? 0.0 : force_closure_epsilon(cs, s.mu, s.cone_edges);
      if (eps < s.fc_threshold) continue;
      ++best.survivors[3];
      const double d = (a->pose.translation() - b->pose.translation()).norm();
      const bool better = !best.feasible || d > best.distance ||
                          (d == best.distance && (eps > best.epsilon ||
                                                  (eps == best.epsilon && std::pair(a->index, b->index) <
                                                                              std::pair(best.index1, best.index2))));
      if (better) {
        best.feasible = true;
        best.index1 = a->index;
        best.index2 = b->index;
        best.distance = d;
        best.epsilon = eps;
      }
    }
  }
  return best;
}

bool monotone(const std::array<std::size_t, 4>& n) { return n[0] * n[1] >= n[2] && n[2] >= n[3]; }

// Checks a reported dual run against the oracle. Empty string on success.
std::string verify_dual(const std::vector<GraspCandidate>& arm1, const std::vector<GraspCandidate>& arm2,
                        double delta, const PointCloud& cloud, const GripperModel& g, const DualSettings& s,
                        std::size_t index1, std::size_t index2, double distance,
                        const std::array<std::size_t, 4>& survivors) {
  if (!monotone(survivors) || survivors[3] < 1) return "survivor counts are not monotone";
  const PairChoice oracle = brute_force_pair(arm1, arm2, delta, cloud, g, s);
  if (!oracle.feasible) return "oracle finds no stable pair";
  if (oracle.survivors != survivors) return "survivor counts differ from the oracle";
  if (oracle.index1 != index1 || oracle.index2 != index2) return "pair is not the oracle's argmax";
  if (oracle.distance != distance) return "reported distance differs from the oracle";
  return {};
}

// ---------------------------------------------------------------------------
// 1. select_pair against exhaustive enumeration

Outcome criterion1() {
  const SceneDescription pot = gen_object(ObjectKind::Pot, 1.0, 8000, 7);
  const RegionSplit regions = determine_target_regions(pot, default_part(ObjectKind::Pot));
  SamplerConfig cfg;
  cfg.num_candidates = 15;
  const SurrogateEnergy field(GripperModel{}, EnergyWeights{}, cfg.schedule);
  const GripperModel g;
  std::vector<std::vector<GraspCandidate>> pools1, pools2;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    cfg.seed = seed;
    pools1.push_back(sample_grasps(pot.cloud, regions.first, field, cfg, Arm::Arm1));
    pools2.push_back(sample_grasps(pot.cloud, regions.second, field, cfg, Arm::Arm2));
  }

  const auto start = Clock::now();
  int matched = 0;
  int feasible = 0;
  for (int instance = 0; instance < 50; ++instance) {
    std::mt19937_64 rng(1000 + instance);
    const auto& p1 = pools1[instance % 3];
    const auto& p2 = pools2[(instance / 3) % 3];
    std::vector<GraspCandidate> arm1, arm2;
    for (const auto& c : p1) if (rng() % 4) arm1.push_back(c);
    for (const auto& c : p2) if (rng() % 4) arm2.push_back(c);
    DualSettings s;
    const double thresholds[] = {0.0, 1e-3, 0.03};
    s.fc_threshold = thresholds[rng() % 3];
    std::vector<double> energies;
    for (const auto& c : arm1) energies.push_back(c.e_global);
    for (const auto& c : arm2) energies.push_back(c.e_global);
    std::sort(energies.begin(), energies.end());
    const double delta = energies.empty() ? 1.0 : energies[(energies.size() * (40 + rng() % 61)) / 101];

    const PairChoice oracle = brute_force_pair(arm1, arm2, delta, pot.cloud, g, s);
    try {
      const GraspPair pair = select_pair(filter_candidates(arm1, delta), filter_candidates(arm2, delta),
                                         pot.cloud, g, s);
      matched += oracle.feasible && pair.h1.index == oracle.index1 && pair.h2.index == oracle.index2 &&
                 pair.survivors == oracle.survivors;
    } catch (const NoFeasiblePairError& e) {
      matched += !oracle.feasible && e.survivor_counts() == oracle.survivors;
    }
    feasible += oracle.feasible;
  }
  const double elapsed = seconds_since(start);
  return {matched == 50 && elapsed < 10.0 && feasible > 0,
          std::to_string(matched) + "/50 match (" + std::to_string(feasible) + " feasible), " +
              fmt("%.1f s", elapsed)};
}

// ---------------------------------------------------------------------------
// 2. force closure against rejection sampling

std::vector<Contact> random_contacts(std::mt19937_64& rng, std::size_t count) {
  std::normal_distribution<double> n(0.0, 1.0);
  auto unit = [&] { return Vec3(n(rng), n(rng), n(rng)).normalized(); };
  std::vector<Contact> out;
  for (std::size_t i = 0; i < count; ++i) {
    const Vec3 d = unit();
    out.push_back({0.05 * d, (d + 0.3 * unit()).normalized(), Arm::Single});
  }
  return out;
}

bool rejection_oracle(const std::vector<Contact>& cs, double mu, std::size_t edges, std::mt19937_64& rng) {
  const auto w = primitive_wrenches(cs, mu, edges);
  Eigen::MatrixXd W(6, static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) W.col(static_cast<Eigen::Index>(i)) = w[i];
  std::normal_distribution<double> n(0.0, 1.0);
  for (int s = 0; s < 10000; ++s) {
    Eigen::VectorXd target(6);
    for (int k = 0; k < 6; ++k) target[k] = n(rng);
    if (!in_conic_hull(W, target.normalized())) return false;
  }
  return true;
}

Outcome criterion2() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  int agree = 0;
  int positive = 0;
  for (int i = 0; i < 100; ++i) {
    const auto cs = random_contacts(rng, 2 + static_cast<std::size_t>(i % 5));
    const bool fc = force_closure_epsilon(cs, 0.5, 8) > 0.0;
    positive += fc;
    agree += fc == rejection_oracle(cs, 0.5, 8, rng);
  }
  const Contact top{Vec3(0, 0, 0.05), Vec3(0, 0, 1), Arm::Single};
  const Contact bottom{Vec3(0, 0, -0.05), Vec3(0, 0, -1), Arm::Single};
  const double antipodal = force_closure_epsilon({top, bottom}, 0.5, 8);
  std::vector<Contact> tetra;
  for (const Vec3& v : {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)}) {
    tetra.push_back({0.05 * v.normalized(), v.normalized(), Arm::Single});
  }
  const double tetrahedral = force_closure_epsilon(tetra, 0.5, 8);
  const double elapsed = seconds_since(start);
  return {agree >= 99 && antipodal == 0.0 && tetrahedral > 0.0 && elapsed < 60.0,
          std::to_string(agree) + "/100 agree (" + std::to_string(positive) + " in closure), antipodal " +
              fmt("%.3g", antipodal) + ", tetrahedral " + fmt("%.3g", tetrahedral) + ", " +
              fmt("%.1f s", elapsed)};
}

// ---------------------------------------------------------------------------
// 3. part concentration on the mug handle

double nearest_distance(const PointCloud& cloud, const Vec3& q) {
  double best = 1e300;
  for (const auto& p : cloud.points()) best = std::min(best, (p - q).squaredNorm());
  return std::sqrt(best);
}

double contained_fraction(const std::vector<GraspCandidate>& cs, const PointCloud& global, const PointCloud& part) {
  int count = 0;
  for (const auto& c : cs) {
    const auto contacts = extract_contacts(c.pose, global, GripperModel{});
    count += contacts.size() == 2 && std::all_of(contacts.begin(), contacts.end(), [&](const Contact& k) {
               return nearest_distance(part, k.point) <= 0.01;
             });
  }
  return static_cast<double>(count) / static_cast<double>(cs.size());
}

Outcome criterion3() {
  const auto start = Clock::now();
  const SceneDescription mug = gen_object(ObjectKind::Mug, 1.0, 20000, 7);
  const PointCloud handle = ground_target(mug, "handle").target;
  SamplerConfig cfg;
  const SurrogateEnergy field(GripperModel{}, EnergyWeights{}, cfg.schedule);
  int good = 0;
  double lo_guided = 1.0;
  double hi_free = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cfg.seed = seed;
    const double guided = contained_fraction(sample_grasps(mug.cloud, handle, field, cfg), mug.cloud, handle);
    const double free = contained_fraction(sample_grasps(mug.cloud, mug.cloud, field, cfg), mug.cloud, handle);
    good += guided >= 0.8 && free <= 0.4;
    lo_guided = std::min(lo_guided, guided);
    hi_free = std::max(hi_free, free);
  }
  const double elapsed = seconds_since(start);
  return {good >= 9 && elapsed < 120.0,
          std::to_string(good) + "/10 seeds; guided >= " + fmt("%.2f", lo_guided) + ", unconstrained <= " +
              fmt("%.2f", hi_free) + ", " + fmt("%.1f s", elapsed)};
}

// ---------------------------------------------------------------------------
// 4. CFR of ours-dual against the FPS+KNN baseline

Outcome criterion4(BenchReport& report) {
  const auto start = Clock::now();
  BenchSettings s;
  s.objects = {ObjectKind::Pot, ObjectKind::Basin, ObjectKind::Keyboard, ObjectKind::Laptop};
  s.methods = {Method::OursDual, Method::BaselineDual};
  s.trials = 30;
  s.density = 8000;
  s.sampler.num_candidates = 20;
  s.omit_timing = true;
  report = run_benchmark(s);

  std::map<std::string, std::map<std::string, double>> cfr;
  for (const auto& r : report.rows) cfr[r.object][r.method] = r.cfr;
  bool every = true;
  std::string detail;
  for (ObjectKind kind : s.objects) {
    const auto& row = cfr[to_string(kind)];
    const double ours = row.at(to_string(Method::OursDual));
    const double base = row.at(to_string(Method::BaselineDual));
    every = every && ours > base;
    detail += to_string(kind) + " " + fmt("%.3f", ours) + " vs " + fmt("%.3f", base) + "; ";
  }
  const double aggregate = cfr["ALL"].at(to_string(Method::OursDual));
  detail += "aggregate " + fmt("%.3f", aggregate) + ", " + fmt("%.0f s", seconds_since(start));
  return {every && aggregate >= 0.75, detail};
}

// ---------------------------------------------------------------------------
// 5. score against Richardson differences, rigid equivariance

Outcome criterion5() {
  const SurrogateEnergy field(GripperModel{}, EnergyWeights{}, SamplerConfig{}.schedule);
  const SceneDescription mug = gen_object(ObjectKind::Mug, 1.0, 12000, 3);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  auto random_pose = [&](const Vec3& center, double spread) {
    return Pose(Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng)),
                center + spread * Vec3(n(rng), n(rng), n(rng)));
  };
  double worst_score = 0.0;
  double worst_rigid = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Pose h = random_pose(Vec3(0.03, 0.0, 0.05), 0.03);
    const std::size_t k = static_cast<std::size_t>(i) % field.schedule().size();
    const double step = field.fd_step(k);
    const Vec6 coarse = finite_difference_score(field, h, k, mug.cloud, step).to_vector();
    const Vec6 fine = finite_difference_score(field, h, k, mug.cloud, 0.5 * step).to_vector();
    const Vec6 oracle = (4.0 * fine - coarse) / 3.0;
    const Vec6 analytic =
        surrogate_score(h, k, mug.cloud, field.gripper(), field.schedule(), field.weights()).to_vector();
    worst_score = std::max(worst_score, (analytic - oracle).norm() / std::max(oracle.norm(), 1e-6));

    const Pose t = random_pose(Vec3::Zero(), 1.0);
    const double e = field.evaluate(h, k, mug.cloud);
    const double moved = field.evaluate(t * h, k, mug.cloud.transformed(t));
    worst_rigid = std::max(worst_rigid, std::abs(moved - e) / std::max(1.0, std::abs(e)));
  }
  return {worst_score <= 1e-3 && worst_rigid <= 1e-6,
          "worst relative score error " + fmt("%.2e", worst_score) + ", worst rigid change " +
              fmt("%.2e", worst_rigid)};
}

// ---------------------------------------------------------------------------
// 6. geometry laws

Outcome criterion6() {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Vec6 v;
    for (int k = 0; k < 6; ++k) v[k] = n(rng);
    v.head<3>() *= 0.9 * M_PI / std::max(1.0, v.head<3>().norm());
    const LogResult log = se3_log(se3_exp(Twist::from_vector(v)));
    worst = std::max(worst, (log.twist.to_vector() - v).norm());
  }

  int exact = 0;
  for (ObjectKind kind : all_object_kinds()) {
    const SceneDescription scene =
        gen_object(kind, 1.0, std::max(6000.0, 600.0 / object_surface_area(kind, 1.0)), 6);
    const RegionSplit split = geometric_split(scene.cloud);
    std::vector<std::size_t> all = split.first_indices;
    all.insert(all.end(), split.second_indices.begin(), split.second_indices.end());
    std::sort(all.begin(), all.end());
    bool ok = all.size() == scene.cloud.size() && split.first.size() == split.first_indices.size() &&
              split.second.size() == split.second_indices.size();
    for (std::size_t i = 0; ok && i < all.size(); ++i) ok = all[i] == i;
    for (std::size_t i = 0; ok && i < split.first_indices.size(); ++i) {
      ok = split.first.point(i) == scene.cloud.point(split.first_indices[i]);
    }
    for (std::size_t i = 0; ok && i < split.second_indices.size(); ++i) {
      ok = split.second.point(i) == scene.cloud.point(split.second_indices[i]);
    }
    exact += ok;
  }

  int fps = 0;
  std::uniform_int_distribution<int> size(2, 200);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vec3> pts(static_cast<std::size_t>(size(rng)));
    for (auto& p : pts) p = Vec3(n(rng), n(rng), n(rng));
    const PointCloud cloud(pts);
    const auto idx = farthest_point_sample(cloud, 2, static_cast<std::uint64_t>(trial));
    double best = -1.0;
    std::size_t partner = 0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double d = (pts[j] - pts[idx[0]]).norm();
      if (d > best) {
        best = d;
        partner = j;
      }
    }
    fps += idx.size() == 2 && idx[1] == partner;
  }
  const int kinds = static_cast<int>(all_object_kinds().size());
  return {worst <= 1e-9 && exact == kinds && fps == 100,
          "round trip " + fmt("%.1e", worst) + ", exact partitions " + std::to_string(exact) + "/" +
              std::to_string(kinds) + ", FPS " + std::to_string(fps) + "/100"};
}

// ---------------------------------------------------------------------------
// 7. CLI determinism; also gathers CLI dual runs for criterion 8

struct CliDualRun {
  fs::path scene;
  fs::path out;
  fs::path dump;
  std::string label;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& command) { return std::system((command + " > /dev/null 2>&1").c_str()); }

Outcome criterion7(const std::string& cli, const fs::path& work, std::vector<CliDualRun>& dual_runs) {
  const auto start = Clock::now();
  fs::remove_all(work);
  fs::create_directories(work);
  const std::string q = "'";
  auto quoted = [&](const fs::path& p) { return q + p.string() + q; };

  {
    std::ofstream cfg(work / "bench.toml");
    cfg << "[bench]\nobjects = [\"mug\", \"pot\"]\nmethods = [\"ours-single\", \"ours-dual\", \"unconstrained\"]\n"
           "trials = 2\ndensity = 8000\n[sampler]\ncandidates = 6\n";
  }

  std::vector<std::string> commands;
  const std::vector<std::pair<std::string, std::string>> scenes = {
      {"mug", "20000"}, {"pot", "8000"}, {"keyboard", "8000"}, {"basin", "8000"}};
  for (const auto& [kind, density] : scenes) {
    commands.push_back(cli + " gen-scene --kind " + kind + " --density " + density + " --seed 7 --out " +
                       quoted(work / "RUN" / "scenes"));
  }
  auto scene = [&](const std::string& kind) { return work / "RUN" / "scenes" / (kind + ".json"); };
  commands.push_back(cli + " plan-single --scene " + quoted(scene("mug")) + " --part handle --candidates 20 --seed 3 --out " +
                     quoted(work / "RUN" / "single.jsonl") + " --dump-candidates " +
                     quoted(work / "RUN" / "single_dump.jsonl"));
  const std::vector<std::tuple<std::string, std::string, std::string>> duals = {
      {"plan-dual", "pot", "--part handle"},
      {"plan-dual", "keyboard", "--part '*'"},
      {"plan-dual", "basin", "--part handle"},
      {"baseline-dual", "pot", ""},
      {"baseline-dual", "keyboard", ""}};
  for (const auto& [sub, kind, part] : duals) {
    const std::string stem = sub + "_" + kind;
    commands.push_back(cli + " " + sub + " --scene " + quoted(scene(kind)) + " " + part +
                       " --candidates 20 --seed 5 --out " + quoted(work / "RUN" / (stem + ".jsonl")) +
                       " --dump-candidates " + quoted(work / "RUN" / (stem + "_dump.jsonl")));
  }
  commands.push_back(cli + " bench --config " + quoted(work / "bench.toml") + " --omit-timing --out " +
                     quoted(work / "RUN" / "report.csv") + " --trials-out " + quoted(work / "RUN" / "trials.csv"));

  int failures = 0;
  for (const std::string run_name : {"a", "b"}) {
    fs::create_directories(work / run_name);
    for (std::string c : commands) {
      for (std::size_t pos; (pos = c.find("/RUN/")) != std::string::npos;) c.replace(pos, 5, "/" + run_name + "/");
      failures += run(c) != 0;
    }
  }

  std::size_t files = 0;
  std::size_t identical = 0;
  for (const auto& entry : fs::recursive_directory_iterator(work / "a")) {
    if (!entry.is_regular_file()) continue;
    ++files;
    const fs::path other = work / "b" / fs::relative(entry.path(), work / "a");
    identical += fs::exists(other) && slurp(entry.path()) == slurp(other);
  }
  for (const auto& [sub, kind, part] : duals) {
    const std::string stem = sub + "_" + kind;
    dual_runs.push_back({work / "a" / "scenes" / (kind + ".json"), work / "a" / (stem + ".jsonl"),
                         work / "a" / (stem + "_dump.jsonl"), stem});
  }
  const double elapsed = seconds_since(start);
  return {failures == 0 && files > 0 && identical == files,
          std::to_string(identical) + "/" + std::to_string(files) + " files identical over " +
              std::to_string(commands.size()) + " commands run twice, " + std::to_string(failures) +
              " failed invocations, " + fmt("%.0f s", elapsed)};
}

// ---------------------------------------------------------------------------
// 8. survivor records of every dual run

Outcome criterion8(const std::vector<CliDualRun>& cli_runs, const BenchReport* bench) {
  const auto start = Clock::now();
  int runs = 0;
  int verified = 0;
  std::string first_error;
  auto note = [&](const std::string& label, const std::string& error) {
    ++runs;
    if (error.empty()) {
      ++verified;
    } else if (first_error.empty()) {
      first_error = label + ": " + error;
    }
  };

  const GripperModel g;
  const DualSettings s;
  SamplerConfig cfg;
  cfg.num_candidates = 20;
  const SurrogateEnergy field(g, EnergyWeights{}, cfg.schedule);
  for (ObjectKind kind : {ObjectKind::Pot, ObjectKind::Basin, ObjectKind::Keyboard, ObjectKind::Laptop}) {
    const SceneDescription scene = gen_object(kind, 1.0, 8000, 7);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      cfg.seed = seed;
      for (bool baseline : {false, true}) {
        const std::string label = to_string(kind) + (baseline ? " baseline" : " ours") + " seed " + std::to_string(seed);
        try {
          const DualPlan plan = baseline ? plan_baseline_dual(scene, field, cfg, g, s)
                                         : plan_dual(scene, default_part(kind), field, cfg, g, s);
          note(label, verify_dual(plan.arm1_candidates, plan.arm2_candidates, plan.delta, scene.cloud, g, s,
                                  plan.pair.h1.index, plan.pair.h2.index, plan.pair.center_distance,
                                  plan.pair.survivors));
        } catch (const NoFeasiblePairError& e) {
          note(label, monotone(e.survivor_counts()) ? "" : "error survivor counts are not monotone");
        }
      }
    }
  }

  for (const auto& r : cli_runs) {
    try {
      const SceneDescription scene = load_scene(r.scene);
      std::ifstream out(r.out);
      const auto records = read_jsonl(out);
      if (records.size() == 1 && records[0].contains("error")) {
        note(r.label, monotone(records[0].at("survivors").get<std::array<std::size_t, 4>>())
                          ? ""
                          : "error survivor counts are not monotone");
        continue;
      }
      if (records.size() != 3) {
        note(r.label, "expected two grasp records and a pair record");
        continue;
      }
      std::ifstream dump(r.dump);
      std::vector<GraspCandidate> arm1, arm2;
      for (const auto& j : read_jsonl(dump)) {
        const GraspCandidate c = grasp_from_record(j);
        (c.arm == Arm::Arm1 ? arm1 : arm2).push_back(c);
      }
      const auto& pair = records[2];
      const auto indices = pair.at("indices").get<std::array<std::size_t, 2>>();
      note(r.label, verify_dual(arm1, arm2, pair.at("delta").get<double>(), scene.cloud, g, s, indices[0],
                                indices[1], pair.at("D_ij").get<double>(),
                                pair.at("survivors").get<std::array<std::size_t, 4>>()));
    } catch (const std::exception& e) {
      note(r.label, e.what());
    }
  }

  if (bench) {
    for (const auto& t : bench->trials) {
      if (!is_dual(t.method)) continue;
      const std::string label = t.object + " " + to_string(t.method) + " trial " + std::to_string(t.trial);
      note(label, monotone(t.survivors) && (!t.ok || t.survivors[3] >= 1) ? "" : "survivor counts are not monotone");
    }
  }
  std::string detail = std::to_string(verified) + "/" + std::to_string(runs) + " dual runs verified, " +
                       fmt("%.0f s", seconds_since(start));
  if (!first_error.empty()) detail += "; first failure: " + first_error;
  return {runs > 0 && verified == runs, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::string cli;
  std::string work = (fs::temp_directory_path() / "partgrasp_acceptance").string();
  std::vector<int> only;
  app.add_option("--cli", cli, "path to the partgrasp executable")->required();
  app.add_option("--work", work, "scratch directory for CLI outputs");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  auto wanted = [&](int c) { return only.empty() || std::find(only.begin(), only.end(), c) != only.end(); };
  std::map<int, Outcome> results;
  auto attempt = [&](int c, const std::function<Outcome()>& fn) {
    if (!wanted(c)) return;
    try {
      results[c] = fn();
    } catch (const std::exception& e) {
      results[c] = {false, std::string("threw: ") + e.what()};
    }
    std::cerr << "criterion " << c << " done\n";
  };

  std::vector<CliDualRun> cli_runs;
  BenchReport bench;
  bool have_bench = false;
  attempt(1, criterion1);
  attempt(2, criterion2);
  attempt(3, criterion3);
  attempt(5, criterion5);
  attempt(6, criterion6);
  attempt(7, [&] { return criterion7(cli, work, cli_runs); });
  attempt(4, [&] {
    Outcome o = criterion4(bench);
    have_bench = true;
    return o;
  });
  attempt(8, [&] { return criterion8(cli_runs, have_bench ? &bench : nullptr); });

  const char* names[] = {"",
                         "pair selection oracle",
                         "force-closure oracle",
                         "part concentration",
                         "CFR direction",
                         "energy/score consistency",
                         "geometry laws",
                         "CLI determinism",
                         "pipeline monotonicity"};
  bool all = true;
  for (const auto& [c, r] : results) {
    std::cout << "CRITERION " << c << " " << (r.pass ? "PASS" : "FAIL") << "  " << names[c] << ": " << r.detail
              << "\n";
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
