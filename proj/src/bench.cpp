#include "partgrasp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "partgrasp/config.hpp"
#include "partgrasp/errors.hpp"
#include "partgrasp/single_arm.hpp"

namespace partgrasp {

namespace {

const char* const kMethodNames[] = {"ours-single", "ours-dual", "baseline-dual", "unconstrained"};

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw ParameterError("bad number in report: '" + s + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double min_distance(const PointCloud& cloud, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : cloud.points()) best = std::min(best, (q - p).squaredNorm());
  return std::sqrt(best);
}

}  // namespace

std::string to_string(Method method) { return kMethodNames[static_cast<int>(method)]; }

std::optional<Method> parse_method(const std::string& name) {
  for (int i = 0; i < 4; ++i) {
    if (name == kMethodNames[i]) return static_cast<Method>(i);
  }
  return std::nullopt;
}

bool is_dual(Method method) { return method == Method::OursDual || method == Method::BaselineDual; }

TrialMetrics compute_metrics(const std::vector<GraspOutcome>& grasps, const PointCloud& cloud,
                             const GripperModel& gripper, std::optional<double> fc_epsilon,
                             const MetricThresholds& thresholds, const PointCloud* reference) {
  TrialMetrics m;
  if (grasps.empty()) return m;
  m.collision_free = true;
  m.contained = true;
  m.stable = !fc_epsilon || *fc_epsilon >= thresholds.fc_threshold;
  for (const auto& g : grasps) {
    if (gripper_object_collision(g.grasp.pose, reference ? *reference : cloud, gripper).colliding) {
      m.collision_free = false;
    }
    const auto contacts = extract_contacts(g.grasp.pose, cloud, gripper, g.grasp.arm);
    if (contacts.empty()) m.contained = false;
    for (const auto& c : contacts) {
      if (!g.region || min_distance(*g.region, c.point) > thresholds.containment_radius) m.contained = false;
    }
    if (contacts.size() < 2) {
      m.stable = false;
      continue;
    }
    const Vec3 axis = g.grasp.pose.rotation_matrix().col(0);
    const double c = thresholds.antipodal_cos;
    if (std::abs(contacts[0].normal.dot(contacts[1].normal)) < c ||
        std::abs(contacts[0].normal.dot(axis)) < c || std::abs(contacts[1].normal.dot(axis)) < c) {
      m.stable = false;
    }
  }
  return m;
}

BenchSettings bench_settings_from_config(const Config& cfg) {
  BenchSettings s;
  for (const auto& name : cfg.get_strings("bench", "objects", {"pot", "basin", "keyboard", "laptop"})) {
    const auto kind = parse_object_kind(name);
    if (!kind) throw ParameterError("unknown bench object '" + name + "'");
    s.objects.push_back(*kind);
  }
  for (const auto& name : cfg.get_strings("bench", "methods", {"ours-dual", "baseline-dual"})) {
    const auto m = parse_method(name);
    if (!m) throw ParameterError("unknown bench method '" + name + "'");
    s.methods.push_back(*m);
  }
  const long long trials = cfg.get_int("bench", "trials", 30);
  if (trials < 1) throw ParameterError("bench trials must be >= 1");
  s.trials = static_cast<std::size_t>(trials);
  s.seed = static_cast<std::uint64_t>(cfg.get_int("bench", "seed", 0));
  s.object_seed = static_cast<std::uint64_t>(cfg.get_int("bench", "object_seed", 7));
  s.scale = cfg.get_double("bench", "scale", s.scale);
  s.density = cfg.get_double("bench", "density", s.density);
  s.reference_density = cfg.get_double("bench", "reference_density", s.reference_density);
  s.gripper = gripper_from_config(cfg);
  s.weights = energy_weights_from_config(cfg);
  s.sampler = sampler_from_config(cfg);
  s.dual = dual_settings_from_config(cfg);
  return s;
}

namespace {

TrialRecord run_trial(const SceneDescription& scene, const PointCloud& reference, ObjectKind kind,
                      Method method, const SurrogateEnergy& field, const BenchSettings& settings,
                      std::size_t trial) {
  TrialRecord rec;
  rec.object = scene.object_label;
  rec.method = method;
  rec.trial = trial;
  rec.seed = settings.seed + trial;

  SamplerConfig cfg = settings.sampler;
  cfg.seed = rec.seed;
  MetricThresholds thresholds;
  thresholds.fc_threshold = settings.dual.fc_threshold;
  const std::string part = default_part(kind);

  const auto start = std::chrono::steady_clock::now();
  try {
    if (is_dual(method)) {
      const DualPlan plan = method == Method::OursDual
                                ? plan_dual(scene, part, field, cfg, settings.gripper, settings.dual)
                                : plan_baseline_dual(scene, field, cfg, settings.gripper, settings.dual);
      rec.ok = true;
      rec.center_distance = plan.pair.center_distance;
      rec.fc_epsilon = plan.pair.fc_epsilon;
      rec.survivors = plan.pair.survivors;
      rec.metrics = compute_metrics({{plan.pair.h1, &plan.regions.first}, {plan.pair.h2, &plan.regions.second}},
                                    scene.cloud, settings.gripper, plan.pair.fc_epsilon, thresholds, &reference);
    } else {
      const GroundingResult ground = ground_target(scene, part);
      const PointCloud& target = method == Method::Unconstrained ? scene.cloud : ground.target;
      const SinglePlan plan = plan_single(scene.cloud, target, field, cfg, settings.gripper);
      rec.ok = true;
      rec.metrics = compute_metrics({{plan.grasp, &ground.target}}, scene.cloud, settings.gripper,
                                    std::nullopt, thresholds, &reference);
    }
  } catch (const NoFeasiblePairError& e) {
    rec.ok = false;
    rec.survivors = e.survivor_counts();
    rec.error = e.what();
  } catch (const Error& e) {
    rec.ok = false;
    rec.metrics = {};
    rec.error = e.what();
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  rec.runtime_s = settings.omit_timing ? 0.0 : elapsed.count();
  return rec;
}

}  // namespace

BenchReport run_benchmark(const BenchSettings& settings) {
  if (settings.objects.empty() || settings.methods.empty()) {
    throw ParameterError("bench needs at least one object and one method");
  }
  const SurrogateEnergy field(settings.gripper, settings.weights, settings.sampler.schedule);
  BenchReport report;
  std::vector<std::string> names;
  for (ObjectKind kind : settings.objects) {
    const double density = std::max(settings.density, 600.0 / object_surface_area(kind, settings.scale));
    const SceneDescription scene = gen_object(kind, settings.scale, density, settings.object_seed);
    names.push_back(scene.object_label);
    const PointCloud reference =
        settings.reference_density > 0.0
            ? gen_object(kind, settings.scale, std::max(settings.reference_density, density), settings.object_seed + 1).cloud
            : scene.cloud;
    for (Method method : settings.methods) {
      for (std::size_t t = 0; t < settings.trials; ++t) {
        report.trials.push_back(run_trial(scene, reference, kind, method, field, settings, t));
      }
    }
  }
  report.rows = summarize(report.trials, names, settings.methods);
  return report;
}

std::vector<BenchRow> summarize(const std::vector<TrialRecord>& trials,
                                const std::vector<std::string>& objects,
                                const std::vector<Method>& methods) {
  std::vector<BenchRow> rows;
  for (Method method : methods) {
    std::vector<BenchRow> per_object;
    for (const auto& object : objects) {
      BenchRow row;
      row.object = object;
      row.method = to_string(method);
      double d_sum = 0.0;
      std::size_t d_count = 0;
      for (const auto& t : trials) {
        if (t.object != object || t.method != method) continue;
        ++row.trials;
        row.cfr += t.metrics.collision_free ? 1.0 : 0.0;
        row.part_containment += t.metrics.contained ? 1.0 : 0.0;
        row.stability_proxy += t.metrics.stable ? 1.0 : 0.0;
        row.runtime_s += t.runtime_s;
        if (is_dual(method) && t.ok) {
          d_sum += t.center_distance;
          ++d_count;
        }
      }
      if (row.trials == 0) continue;
      const double n = static_cast<double>(row.trials);
      row.cfr /= n;
      row.part_containment /= n;
      row.stability_proxy /= n;
      row.runtime_s /= n;
      row.mean_D = d_count > 0 ? d_sum / static_cast<double>(d_count) : std::numeric_limits<double>::quiet_NaN();
      per_object.push_back(row);
    }
    if (per_object.empty()) continue;
    BenchRow all;
    all.object = "ALL";
    all.method = to_string(method);
    double d_sum = 0.0;
    std::size_t d_count = 0;
    for (const auto& r : per_object) {
      all.trials += r.trials;
      all.cfr += r.cfr;
      all.part_containment += r.part_containment;
      all.stability_proxy += r.stability_proxy;
      all.runtime_s += r.runtime_s;
      if (!std::isnan(r.mean_D)) {
        d_sum += r.mean_D;
        ++d_count;
      }
    }
    const double k = static_cast<double>(per_object.size());
    all.cfr /= k;
    all.part_containment /= k;
    all.stability_proxy /= k;
    all.runtime_s /= k;
    all.mean_D = d_count > 0 ? d_sum / static_cast<double>(d_count) : std::numeric_limits<double>::quiet_NaN();
    rows.insert(rows.end(), per_object.begin(), per_object.end());
    rows.push_back(all);
  }
  return rows;
}

void write_report_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "object,method,trials,cfr,part_containment,stability_proxy,mean_D,runtime_s\n";
  for (const auto& r : rows) {
    out << r.object << ',' << r.method << ',' << r.trials << ',' << format_number(r.cfr) << ','
        << format_number(r.part_containment) << ',' << format_number(r.stability_proxy) << ','
        << format_number(r.mean_D) << ',' << format_number(r.runtime_s) << '\n';
  }
}

std::vector<BenchRow> read_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "object,method,trials,cfr,part_containment,stability_proxy,mean_D,runtime_s") {
    throw ParameterError("report CSV has an unexpected header");
  }
  std::vector<BenchRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) throw ParameterError("report CSV row needs 8 fields: " + line);
    BenchRow r;
    r.object = f[0];
    r.method = f[1];
    r.trials = static_cast<std::size_t>(std::stoull(f[2]));
    r.cfr = parse_number(f[3]);
    r.part_containment = parse_number(f[4]);
    r.stability_proxy = parse_number(f[5]);
    r.mean_D = parse_number(f[6]);
    r.runtime_s = parse_number(f[7]);
    rows.push_back(r);
  }
  return rows;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& trials) {
  out << "object,method,trial,seed,ok,collision_free,contained,stable,D,fc_epsilon,n_filter1,n_filter2,n_nocollide,n_stable,runtime_s,error\n";
  for (const auto& t : trials) {
    std::string err = t.error;
    for (char& c : err) {
      if (c == ',' || c == '\n') c = ';';
    }
    out << t.object << ',' << to_string(t.method) << ',' << t.trial << ',' << t.seed << ',' << t.ok << ','
        << t.metrics.collision_free << ',' << t.metrics.contained << ',' << t.metrics.stable << ','
        << format_number(t.center_distance) << ',' << format_number(t.fc_epsilon) << ',';
    for (std::size_t n : t.survivors) out << n << ',';
    out << format_number(t.runtime_s) << ',' << err << '\n';
  }
}

void print_report_table(std::ostream& out, const std::vector<BenchRow>& rows) {
  const auto flags = out.flags();
  out << std::left << std::setw(10) << "object" << std::setw(15) << "method" << std::right << std::setw(7)
      << "trials" << std::setw(8) << "CFR" << std::setw(8) << "part" << std::setw(11) << "stability"
      << std::setw(9) << "mean_D" << std::setw(11) << "runtime_s" << '\n';
  out << std::fixed;
  for (const auto& r : rows) {
    out << std::left << std::setw(10) << r.object << std::setw(15) << r.method << std::right << std::setw(7)
        << r.trials << std::setprecision(3) << std::setw(8) << r.cfr << std::setw(8) << r.part_containment
        << std::setw(11) << r.stability_proxy << std::setw(9);
    if (std::isnan(r.mean_D)) {
      out << "-";
    } else {
      out << r.mean_D;
    }
    out << std::setw(11) << r.runtime_s << '\n';
  }
  out << "stability = simulated proxy (contacts, antipodality, force closure); not a physical success rate\n";
  out.flags(flags);
}

}  // namespace partgrasp
