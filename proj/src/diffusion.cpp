#include "partgrasp/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "partgrasp/config.hpp"
#include "partgrasp/errors.hpp"

namespace partgrasp {

void SamplerConfig::validate() const {
  if (num_candidates < 1) throw ParameterError("sampler needs at least one candidate");
  if (steps_per_level < 1) throw ParameterError("sampler needs at least one step per level");
  if (!(rotation_scale > 0.0)) throw ParameterError("sampler rotation_scale must be positive");
  if (!(max_drift > 0.0)) throw ParameterError("sampler max_drift must be positive");
}

SamplerConfig sampler_from_config(const Config& cfg) {
  SamplerConfig s;
  auto count = [&](const char* key, std::size_t fallback) {
    return static_cast<std::size_t>(cfg.get_int("sampler", key, static_cast<long long>(fallback)));
  };
  s.num_candidates = count("candidates", s.num_candidates);
  const std::size_t levels = count("levels", s.schedule.size());
  const double sigma_max = cfg.get_double("sampler", "sigma_max", s.schedule.sigmas().front());
  const double sigma_min = cfg.get_double("sampler", "sigma_min", s.schedule.sigmas().back());
  const double step_scale = cfg.get_double("sampler", "step_scale", s.schedule.step_sizes().back());
  s.schedule = make_schedule(levels, sigma_max, sigma_min, step_scale);
  s.steps_per_level = count("steps_per_level", s.steps_per_level);
  s.seed = static_cast<std::uint64_t>(cfg.get_int("sampler", "seed", 0));
  s.init_radius = cfg.get_double("sampler", "init_radius", s.init_radius);
  s.init_margin = cfg.get_double("sampler", "init_margin", s.init_margin);
  s.rotation_scale = cfg.get_double("sampler", "rotation_scale", s.rotation_scale);
  s.max_drift = cfg.get_double("sampler", "max_drift", s.max_drift);
  s.polish_steps = count("polish_steps", s.polish_steps);
  s.threads = count("threads", s.threads);
  s.validate();
  return s;
}

GuidedEnergy guided_energy(const Pose& pose, std::size_t level, const PointCloud& global,
                           const PointCloud& part, const EnergyField& field) {
  if (global.empty() || part.empty()) throw PreconditionError("guided energy needs non-empty clouds");
  GuidedEnergy g;
  g.e_global = field.evaluate(pose, level, global);
  g.e_part = field.evaluate(pose, level, part);
  g.branch = g.e_part > g.e_global ? GuideBranch::Part : GuideBranch::Global;
  g.value = std::max(g.e_global, g.e_part);
  return g;
}

Twist guided_score(const Pose& pose, std::size_t level, const PointCloud& global,
                   const PointCloud& part, const EnergyField& field) {
  const GuidedEnergy g = guided_energy(pose, level, global, part, field);
  return field.score(pose, level, g.branch == GuideBranch::Global ? global : part);
}

namespace {

Pose random_initial_pose(std::mt19937_64& rng, const Vec3& center, double radius) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Vec3 dir(normal(rng), normal(rng), normal(rng));
  while (dir.norm() < 1e-12) dir = Vec3(normal(rng), normal(rng), normal(rng));
  const double r = radius * std::cbrt(uniform(rng));
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  while (q.norm() < 1e-12) q = Eigen::Quaterniond(normal(rng), normal(rng), normal(rng), normal(rng));
  return Pose(q, center + r * dir.normalized());
}

GraspCandidate run_chain(std::size_t index, const PointCloud& global, const PointCloud& part,
                         const EnergyField& field, const SamplerConfig& cfg, const Vec3& center,
                         double radius, Arm arm) {
  std::mt19937_64 rng(mix_seed(cfg.seed, index));
  std::normal_distribution<double> normal(0.0, 1.0);
  Pose pose = random_initial_pose(rng, center, radius);

  const auto& sigmas = cfg.schedule.sigmas();
  const auto& steps = cfg.schedule.step_sizes();
  const std::size_t levels = sigmas.size();
  const double ell = cfg.rotation_scale;
  for (std::size_t l = 0; l < levels; ++l) {
    const std::size_t level = levels - 1 - l;
    const double sigma = sigmas[l];
    const double alpha = steps[l];
    const double noise_scale = std::sqrt(2.0 * alpha) * sigma;
    for (std::size_t s = 0; s < cfg.steps_per_level; ++s) {
      const Twist score = guided_score(pose, level, global, part, field);
      Vec3 drift_ang = alpha * score.angular / (ell * ell);
      Vec3 drift_lin = alpha * score.linear;
      const double scaled = std::sqrt((ell * drift_ang).squaredNorm() + drift_lin.squaredNorm());
      const double limit = cfg.max_drift * sigma;
      if (scaled > limit) {
        drift_ang *= limit / scaled;
        drift_lin *= limit / scaled;
      }
      Vec3 eta_ang(normal(rng), normal(rng), normal(rng));
      Vec3 eta_lin(normal(rng), normal(rng), normal(rng));
      const Twist step(drift_ang + noise_scale * eta_ang / ell, drift_lin + noise_scale * eta_lin);
      pose = pose * se3_exp(step);
    }
  }

  const double sigma_min = sigmas.back();
  for (std::size_t s = 0; s < cfg.polish_steps; ++s) {
    const Twist score = guided_score(pose, 0, global, part, field);
    Vec3 drift_ang = steps.back() * score.angular / (ell * ell);
    Vec3 drift_lin = steps.back() * score.linear;
    const double scaled = std::sqrt((ell * drift_ang).squaredNorm() + drift_lin.squaredNorm());
    if (scaled > sigma_min) {
      drift_ang *= sigma_min / scaled;
      drift_lin *= sigma_min / scaled;
    }
    pose = pose * se3_exp(Twist(drift_ang, drift_lin));
  }

  GraspCandidate c;
  c.pose = pose;
  c.e_global = field.evaluate(pose, 0, global);
  c.e_part = field.evaluate(pose, 0, part);
  c.arm = arm;
  c.index = index;
  return c;
}

}  // namespace

std::vector<GraspCandidate> sample_grasps(const PointCloud& global, const PointCloud& part,
                                          const EnergyField& field, const SamplerConfig& cfg,
                                          Arm arm) {
  if (part.empty()) throw PreconditionError("sample_grasps needs a non-empty target region");
  if (global.empty()) throw PreconditionError("sample_grasps needs a non-empty object cloud");
  cfg.validate();
  if (cfg.schedule.size() != field.schedule().size()) {
    throw ParameterError("sampler schedule and energy schedule differ in level count");
  }

  const Vec3 center = part.centroid();
  double radius = cfg.init_radius;
  if (radius <= 0.0) {
    radius = part.bounding_radius() + cfg.init_margin;
  }

  const std::size_t n = cfg.num_candidates;
  std::vector<GraspCandidate> out(n);
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.threads, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = run_chain(i, global, part, field, cfg, center, radius, arm);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) {
            out[i] = run_chain(i, global, part, field, cfg, center, radius, arm);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::sort(out.begin(), out.end(), [](const GraspCandidate& a, const GraspCandidate& b) {
    if (a.e_global != b.e_global) return a.e_global < b.e_global;
    if (a.e_part != b.e_part) return a.e_part < b.e_part;
    return a.index < b.index;
  });
  return out;
}

}  // namespace partgrasp
