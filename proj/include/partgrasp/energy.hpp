#pragma once

#include <cstddef>
#include <vector>

#include "partgrasp/geometry.hpp"

namespace partgrasp {

class Config;

// Annealing ladder stored coarse to fine: sigmas()[0] is the largest noise
// scale. Energy and score calls take a diffusion level k where k = 0 is the
// finest (least noisy) level, so level k maps to sigmas()[size() - 1 - k].
class NoiseSchedule {
 public:
  NoiseSchedule(std::vector<double> sigmas, std::vector<double> step_sizes);

  std::size_t size() const { return sigmas_.size(); }
  const std::vector<double>& sigmas() const { return sigmas_; }
  const std::vector<double>& step_sizes() const { return step_sizes_; }

  double sigma_at_level(std::size_t k) const;
  double step_at_level(std::size_t k) const;

 private:
  std::vector<double> sigmas_;
  std::vector<double> step_sizes_;
};

// Geometric interpolation sigma_max -> sigma_min with step sizes
// step_scale * sigma^2 / sigma_min^2.
NoiseSchedule make_schedule(std::size_t levels, double sigma_max, double sigma_min,
                            double step_scale);

// Axis-aligned box in the grasp frame.
struct LocalBox {
  Vec3 center;
  Vec3 half;
};

// Parallel-jaw gripper. Grasp frame: +z approach, x closing axis, origin at
// the midpoint between the fingertip pads. Fingers span z in
// [-finger_length/2, finger_length/2] and are 2 * finger_thickness wide
// along y; the palm sits behind them.
struct GripperModel {
  double max_jaw_width = 0.085;
  double finger_length = 0.06;
  double finger_thickness = 0.01;
  double palm_depth = 0.02;

  void validate() const;

  double jaw_half_width() const { return 0.5 * max_jaw_width; }
  double finger_half_depth() const { return finger_thickness; }
  // side = +1 or -1 along the closing axis
  LocalBox finger_box(int side) const;
  LocalBox palm_box() const;
  // Open volume between the finger pads.
  LocalBox jaw_box() const;
  // Bounding radius of all three boxes around the grasp origin.
  double reach() const;
};

struct EnergyWeights {
  double distance = 1.0;      // w_d
  double penetration = 5.0;   // w_p
  double antipodal = 0.5;     // w_a
  // Width of the smooth shell around each box over which a point's
  // penetration weight ramps from 0 to 1.
  double penetration_margin = 0.0025;
  // Length scale of the contact-candidate soft selection along the closing axis.
  double contact_temperature = 0.0005;
  // Half-length of the closing segment used by D, as a fraction of the jaw
  // half-width.
  double segment_fraction = 0.0;
};

struct EnergyTerms {
  double distance = 0.0;     // soft-min closing-segment distance
  double penetration = 0.0;  // count-weighted box penetration
  double antipodal = 0.0;    // mean contact misfit, in [0, 1]
};

// Scalar energy over grasp poses; lower is better. Implementations must be
// immutable and safe for concurrent calls.
class EnergyField {
 public:
  virtual ~EnergyField() = default;

  virtual double evaluate(const Pose& pose, std::size_t level, const PointCloud& cloud) const = 0;
  // Negative gradient of evaluate() in the body-frame tangent space
  // (perturbation pose * exp(xi)).
  virtual Twist score(const Pose& pose, std::size_t level, const PointCloud& cloud) const;
  virtual const NoiseSchedule& schedule() const = 0;
  // Central-difference step used by score().
  virtual double fd_step(std::size_t level) const;
};

// Central-difference gradient of `field.evaluate`, negated.
Twist finite_difference_score(const EnergyField& field, const Pose& pose, std::size_t level,
                              const PointCloud& cloud, double h);

// Analytic antipodal-contact energy: w_d * D + w_p * V + w_a * A.
class SurrogateEnergy final : public EnergyField {
 public:
  SurrogateEnergy(GripperModel gripper, EnergyWeights weights, NoiseSchedule schedule);

  double evaluate(const Pose& pose, std::size_t level, const PointCloud& cloud) const override;
  EnergyTerms terms(const Pose& pose, std::size_t level, const PointCloud& cloud) const;
  // Analytic gradient, one pass over the cloud.
  Twist score(const Pose& pose, std::size_t level, const PointCloud& cloud) const override;
  const NoiseSchedule& schedule() const override { return schedule_; }

  const GripperModel& gripper() const { return gripper_; }
  const EnergyWeights& weights() const { return weights_; }

 private:
  template <bool WithGrad>
  EnergyTerms accumulate(const Pose& pose, std::size_t level, const PointCloud& cloud, Vec6* grad) const;

  GripperModel gripper_;
  EnergyWeights weights_;
  NoiseSchedule schedule_;
};

double surrogate_energy(const Pose& pose, std::size_t level, const PointCloud& cloud,
                        const GripperModel& gripper, const NoiseSchedule& schedule,
                        const EnergyWeights& weights = {});
Twist surrogate_score(const Pose& pose, std::size_t level, const PointCloud& cloud,
                      const GripperModel& gripper, const NoiseSchedule& schedule,
                      const EnergyWeights& weights = {});

// [gripper] and [energy] sections; missing keys keep their defaults.
GripperModel gripper_from_config(const Config& cfg);
EnergyWeights energy_weights_from_config(const Config& cfg);

}  // namespace partgrasp
