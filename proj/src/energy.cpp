#include "partgrasp/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "partgrasp/config.hpp"
#include "partgrasp/errors.hpp"

namespace partgrasp {

NoiseSchedule::NoiseSchedule(std::vector<double> sigmas, std::vector<double> step_sizes)
    : sigmas_(std::move(sigmas)), step_sizes_(std::move(step_sizes)) {
  if (sigmas_.empty() || sigmas_.size() != step_sizes_.size()) {
    throw ParameterError("noise schedule needs equal-length, non-empty sigma and step lists");
  }
  for (std::size_t i = 0; i < sigmas_.size(); ++i) {
    if (!(sigmas_[i] > 0.0) || !(step_sizes_[i] > 0.0)) {
      throw ParameterError("noise schedule values must be positive");
    }
    if (i > 0 && !(sigmas_[i] < sigmas_[i - 1])) {
      throw ParameterError("noise schedule sigmas must be strictly decreasing");
    }
  }
}

double NoiseSchedule::sigma_at_level(std::size_t k) const {
  if (k >= sigmas_.size()) throw ParameterError("noise level out of range");
  return sigmas_[sigmas_.size() - 1 - k];
}

double NoiseSchedule::step_at_level(std::size_t k) const {
  if (k >= step_sizes_.size()) throw ParameterError("noise level out of range");
  return step_sizes_[step_sizes_.size() - 1 - k];
}

NoiseSchedule make_schedule(std::size_t levels, double sigma_max, double sigma_min,
                            double step_scale) {
  if (levels < 2) throw ParameterError("schedule needs at least 2 levels");
  if (!(sigma_min > 0.0) || !(sigma_max > sigma_min)) {
    throw ParameterError("schedule needs sigma_max > sigma_min > 0");
  }
  if (!(step_scale > 0.0)) throw ParameterError("schedule step_scale must be positive");
  std::vector<double> sigmas(levels);
  std::vector<double> steps(levels);
  const double ratio = sigma_min / sigma_max;
  for (std::size_t k = 0; k < levels; ++k) {
    sigmas[k] = sigma_max * std::pow(ratio, static_cast<double>(k) / static_cast<double>(levels - 1));
    steps[k] = step_scale * sigmas[k] * sigmas[k] / (sigma_min * sigma_min);
  }
  return NoiseSchedule(std::move(sigmas), std::move(steps));
}

void GripperModel::validate() const {
  if (!(max_jaw_width > 0.0) || !(finger_length > 0.0) || !(finger_thickness > 0.0) ||
      !(palm_depth > 0.0)) {
    throw ParameterError("gripper dimensions must be positive");
  }
  if (!(max_jaw_width > 2.0 * finger_thickness)) {
    throw ParameterError("gripper max_jaw_width must exceed twice the finger thickness");
  }
}

LocalBox GripperModel::finger_box(int side) const {
  const double w = jaw_half_width();
  const double s = side >= 0 ? 1.0 : -1.0;
  return {Vec3(s * (w + 0.5 * finger_thickness), 0.0, 0.0),
          Vec3(0.5 * finger_thickness, finger_half_depth(), 0.5 * finger_length)};
}

LocalBox GripperModel::palm_box() const {
  return {Vec3(0.0, 0.0, -0.5 * finger_length - 0.5 * palm_depth),
          Vec3(jaw_half_width() + finger_thickness, finger_half_depth(), 0.5 * palm_depth)};
}

LocalBox GripperModel::jaw_box() const {
  return {Vec3::Zero(), Vec3(jaw_half_width(), finger_half_depth(), 0.5 * finger_length)};
}

double GripperModel::reach() const {
  const Vec3 corner(jaw_half_width() + finger_thickness, finger_half_depth(),
                    0.5 * finger_length + palm_depth);
  return corner.norm();
}

double EnergyField::fd_step(std::size_t level) const {
  return std::max(1e-5, schedule().sigma_at_level(level) * 1e-3);
}

Twist EnergyField::score(const Pose& pose, std::size_t level, const PointCloud& cloud) const {
  return finite_difference_score(*this, pose, level, cloud, fd_step(level));
}

Twist finite_difference_score(const EnergyField& field, const Pose& pose, std::size_t level,
                              const PointCloud& cloud, double h) {
  Vec6 grad;
  for (int j = 0; j < 6; ++j) {
    Vec6 e = Vec6::Zero();
    e[j] = h;
    const double plus = field.evaluate(pose * se3_exp(Twist::from_vector(e)), level, cloud);
    const double minus = field.evaluate(pose * se3_exp(Twist::from_vector(-e)), level, cloud);
    grad[j] = (plus - minus) / (2.0 * h);
  }
  return Twist::from_vector(-grad);
}

namespace {

// C1 ramp: 0 for r <= 0, 1 for r >= 1.
inline double smooth_step(double r) {
  if (r <= 0.0) return 0.0;
  if (r >= 1.0) return 1.0;
  return r * r * (3.0 - 2.0 * r);
}

// Soft indicator of a box; ramps over [half - margin, half + margin] per axis.
inline double box_weight(const Vec3& local, const LocalBox& box, double margin) {
  double w = 1.0;
  for (int a = 0; a < 3; ++a) {
    const double u = std::abs(local[a] - box.center[a]);
    const double r = (box.half[a] + margin - u) / (2.0 * margin);
    if (r <= 0.0) return 0.0;
    w *= smooth_step(r);
  }
  return w;
}

// Soft membership plus a C1 bump that peaks at the box center, so deeply
// buried points still have a gradient. The bump height is the smallest
// half-extent in ramp widths.
inline double box_penetration(const Vec3& local, const LocalBox& box, double margin) {
  const double w = box_weight(local, box, margin);
  if (w == 0.0) return 0.0;
  double bump = box.half.minCoeff() / (2.0 * margin);
  for (int a = 0; a < 3; ++a) {
    const double x = (local[a] - box.center[a]) / box.half[a];
    if (std::abs(x) >= 1.0) return w;
    bump *= (1.0 - x * x) * (1.0 - x * x);
  }
  return w + bump;
}

inline double smooth_step_slope(double r) {
  if (r <= 0.0 || r >= 1.0) return 0.0;
  return 6.0 * r * (1.0 - r);
}

inline double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

// box_weight and, through `grad`, its gradient in the local frame.
inline double box_weight_grad(const Vec3& local, const LocalBox& box, double margin, Vec3& grad) {
  double s[3];
  double slope[3];
  for (int a = 0; a < 3; ++a) {
    const double r = (box.half[a] + margin - std::abs(local[a] - box.center[a])) / (2.0 * margin);
    if (r <= 0.0) {
      grad.setZero();
      return 0.0;
    }
    s[a] = smooth_step(r);
    slope[a] = smooth_step_slope(r);
  }
  for (int a = 0; a < 3; ++a) {
    const double others = s[(a + 1) % 3] * s[(a + 2) % 3];
    grad[a] = -others * slope[a] * sign_of(local[a] - box.center[a]) / (2.0 * margin);
  }
  return s[0] * s[1] * s[2];
}

inline double box_penetration_grad(const Vec3& local, const LocalBox& box, double margin, Vec3& grad) {
  const double w = box_weight_grad(local, box, margin, grad);
  if (w == 0.0) return 0.0;
  double b[3];
  double slope[3];
  for (int a = 0; a < 3; ++a) {
    const double x = (local[a] - box.center[a]) / box.half[a];
    if (std::abs(x) >= 1.0) return w;
    b[a] = (1.0 - x * x) * (1.0 - x * x);
    slope[a] = -4.0 * x * (1.0 - x * x) / box.half[a];
  }
  const double height = box.half.minCoeff() / (2.0 * margin);
  for (int a = 0; a < 3; ++a) grad[a] += height * b[(a + 1) % 3] * b[(a + 2) % 3] * slope[a];
  return w + height * b[0] * b[1] * b[2];
}

// Gradient with respect to the body twist (angular, linear) of a quantity
// whose gradient with respect to a local point p is g.
inline Vec6 point_to_twist(const Vec3& g, const Vec3& p) {
  Vec6 out;
  out << g.cross(p), -g;
  return out;
}

constexpr double kDistanceSmoothing = 1e-4;
constexpr double kMisfitSmoothing = 1e-3;

}  // namespace

SurrogateEnergy::SurrogateEnergy(GripperModel gripper, EnergyWeights weights, NoiseSchedule schedule)
    : gripper_(gripper), weights_(weights), schedule_(std::move(schedule)) {
  gripper_.validate();
  if (weights_.distance < 0.0 || weights_.penetration < 0.0 || weights_.antipodal < 0.0) {
    throw ParameterError("energy weights must be non-negative");
  }
  if (!(weights_.segment_fraction >= 0.0 && weights_.segment_fraction <= 1.0)) {
    throw ParameterError("energy segment_fraction must be within [0, 1]");
  }
  if (!(weights_.penetration_margin > 0.0) || !(weights_.contact_temperature > 0.0)) {
    throw ParameterError("energy margin and contact temperature must be positive");
  }
}

template <bool WithGrad>
EnergyTerms SurrogateEnergy::accumulate(const Pose& pose, std::size_t level, const PointCloud& cloud,
                                        Vec6* grad) const {
  if (cloud.empty()) throw PreconditionError("surrogate energy needs a non-empty cloud");
  if (!cloud.has_normals()) throw PreconditionError("surrogate energy needs a cloud with normals");

  const double tau = schedule_.sigma_at_level(level);
  const double margin = weights_.penetration_margin;
  const double tau_c = weights_.contact_temperature;
  const double w = gripper_.jaw_half_width();
  const double seg = weights_.segment_fraction * w;
  const LocalBox boxes[3] = {gripper_.finger_box(+1), gripper_.finger_box(-1), gripper_.palm_box()};
  const LocalBox jaw = gripper_.jaw_box();
  const Vec3 reach_lo(-(w + gripper_.finger_thickness) - margin, -gripper_.finger_half_depth() - margin,
                      -0.5 * gripper_.finger_length - gripper_.palm_depth - margin);
  const Vec3 reach_hi(-reach_lo.x(), -reach_lo.y(), 0.5 * gripper_.finger_length + margin);

  const Mat3 Rt = pose.rotation_matrix().transpose();
  const Vec3 closing_axis = Rt.row(0).transpose();
  const Vec3& t = pose.translation();

  double penetration = 0.0;
  double contact_w[2] = {0.0, 0.0};
  double contact_misfit[2] = {0.0, 0.0};
  Vec6 grad_penetration = Vec6::Zero();
  Vec6 grad_w[2] = {Vec6::Zero(), Vec6::Zero()};
  Vec6 grad_misfit[2] = {Vec6::Zero(), Vec6::Zero()};

  const auto& pts = cloud.points();
  const auto& nrm = cloud.normals();
  thread_local std::vector<double> dist;
  thread_local std::vector<Vec6> dist_grad;
  dist.resize(pts.size());
  if constexpr (WithGrad) dist_grad.resize(pts.size());
  double d_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec3 p = Rt * (pts[i] - t);

    const double dx = std::max(std::abs(p.x()) - seg, 0.0);
    const double r = std::sqrt(dx * dx + p.y() * p.y() + p.z() * p.z() +
                               kDistanceSmoothing * kDistanceSmoothing);
    const double d = r - kDistanceSmoothing;
    dist[i] = d;
    d_min = std::min(d_min, d);
    if constexpr (WithGrad) {
      dist_grad[i] = point_to_twist(Vec3(dx * sign_of(p.x()), p.y(), p.z()) / r, p);
    }

    if ((p.array() < reach_lo.array()).any() || (p.array() > reach_hi.array()).any()) continue;

    if constexpr (WithGrad) {
      Vec3 g_pen = Vec3::Zero();
      for (const auto& box : boxes) {
        Vec3 g;
        penetration += box_penetration_grad(p, box, margin, g);
        g_pen += g;
      }
      grad_penetration += point_to_twist(g_pen, p);
    } else {
      for (const auto& box : boxes) penetration += box_penetration(p, box, margin);
    }

    Vec3 g_window = Vec3::Zero();
    const double window = WithGrad ? box_weight_grad(p, jaw, margin, g_window) : box_weight(p, jaw, margin);
    if (window > 0.0) {
      const double nx = nrm[i].dot(closing_axis);
      const double root = std::sqrt(nx * nx + kMisfitSmoothing * kMisfitSmoothing);
      const double misfit = 1.0 + kMisfitSmoothing - root;
      Vec6 g_misfit = Vec6::Zero();
      Vec6 g_window_twist = Vec6::Zero();
      if constexpr (WithGrad) {
        const Vec3 n_local = Rt * nrm[i];
        g_misfit.head<3>() = (-nx / root) * Vec3(0.0, -n_local.z(), n_local.y());
        g_window_twist = point_to_twist(g_window, p);
      }
      for (int f = 0; f < 2; ++f) {
        const double side = f == 0 ? 1.0 : -1.0;
        const double gap = w - side * p.x();
        const double fall = std::exp(-gap / tau_c);
        const double weight = window * fall;
        contact_w[f] += weight;
        contact_misfit[f] += weight * misfit;
        if constexpr (WithGrad) {
          const Vec6 g_weight = fall * g_window_twist +
                                point_to_twist(Vec3(weight * side / tau_c, 0.0, 0.0), p);
          grad_w[f] += g_weight;
          grad_misfit[f] += misfit * g_weight + weight * g_misfit;
        }
      }
    }
  }

  // log-sum-exp of -d / tau, shifted by the minimum
  const double inv_tau = 1.0 / tau;
  double lse_sum = 0.0;
  for (const double d : dist) lse_sum += std::exp((d_min - d) * inv_tau);

  EnergyTerms out;
  const double n = static_cast<double>(pts.size());
  const double distance = d_min - tau * std::log(lse_sum / n);
  out.distance = std::max(0.0, distance);
  out.penetration = penetration;
  double misfit_sum = 0.0;
  for (int f = 0; f < 2; ++f) {
    misfit_sum += contact_w[f] > 0.0 ? contact_misfit[f] / contact_w[f] : 1.0;
  }
  out.antipodal = 0.5 * misfit_sum;

  if constexpr (WithGrad) {
    Vec6 g_distance = Vec6::Zero();
    if (distance > 0.0) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        g_distance += std::exp((d_min - dist[i]) * inv_tau) * dist_grad[i];
      }
      g_distance /= lse_sum;
    }
    Vec6 g_antipodal = Vec6::Zero();
    for (int f = 0; f < 2; ++f) {
      if (contact_w[f] > 0.0) {
        const double mean = contact_misfit[f] / contact_w[f];
        g_antipodal += 0.5 * (grad_misfit[f] - mean * grad_w[f]) / contact_w[f];
      }
    }
    *grad = weights_.distance * g_distance + weights_.penetration * grad_penetration +
            weights_.antipodal * g_antipodal;
  }
  return out;
}

EnergyTerms SurrogateEnergy::terms(const Pose& pose, std::size_t level, const PointCloud& cloud) const {
  return accumulate<false>(pose, level, cloud, nullptr);
}

Twist SurrogateEnergy::score(const Pose& pose, std::size_t level, const PointCloud& cloud) const {
  Vec6 grad;
  accumulate<true>(pose, level, cloud, &grad);
  return Twist::from_vector(-grad);
}

double SurrogateEnergy::evaluate(const Pose& pose, std::size_t level, const PointCloud& cloud) const {
  const EnergyTerms t = terms(pose, level, cloud);
  return weights_.distance * t.distance + weights_.penetration * t.penetration +
         weights_.antipodal * t.antipodal;
}

double surrogate_energy(const Pose& pose, std::size_t level, const PointCloud& cloud,
                        const GripperModel& gripper, const NoiseSchedule& schedule,
                        const EnergyWeights& weights) {
  return SurrogateEnergy(gripper, weights, schedule).evaluate(pose, level, cloud);
}

Twist surrogate_score(const Pose& pose, std::size_t level, const PointCloud& cloud,
                      const GripperModel& gripper, const NoiseSchedule& schedule,
                      const EnergyWeights& weights) {
  return SurrogateEnergy(gripper, weights, schedule).score(pose, level, cloud);
}

GripperModel gripper_from_config(const Config& cfg) {
  GripperModel g;
  g.max_jaw_width = cfg.get_double("gripper", "max_jaw_width", g.max_jaw_width);
  g.finger_length = cfg.get_double("gripper", "finger_length", g.finger_length);
  g.finger_thickness = cfg.get_double("gripper", "finger_thickness", g.finger_thickness);
  g.palm_depth = cfg.get_double("gripper", "palm_depth", g.palm_depth);
  g.validate();
  return g;
}

EnergyWeights energy_weights_from_config(const Config& cfg) {
  EnergyWeights w;
  w.distance = cfg.get_double("energy", "w_d", w.distance);
  w.penetration = cfg.get_double("energy", "w_p", w.penetration);
  w.antipodal = cfg.get_double("energy", "w_a", w.antipodal);
  w.penetration_margin = cfg.get_double("energy", "penetration_margin", w.penetration_margin);
  w.contact_temperature = cfg.get_double("energy", "contact_temperature", w.contact_temperature);
  w.segment_fraction = cfg.get_double("energy", "segment_fraction", w.segment_fraction);
  return w;
}

}  // namespace partgrasp
