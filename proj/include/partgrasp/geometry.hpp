#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace partgrasp {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

Mat3 skew(const Vec3& v);

// Rigid transform stored as a unit quaternion plus translation. The
// quaternion is renormalized on construction and after composition.
class Pose {
 public:
  Pose() = default;
  Pose(const Eigen::Quaterniond& rotation, const Vec3& translation);

  static Pose identity() { return {}; }

  const Eigen::Quaterniond& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }
  Mat3 rotation_matrix() const { return rotation_.toRotationMatrix(); }

  Vec3 apply(const Vec3& p) const { return rotation_ * p + translation_; }
  Vec3 apply_inverse(const Vec3& p) const { return rotation_.conjugate() * (p - translation_); }
  Pose inverse() const;

  // (*this) * other: apply `other` first.
  Pose operator*(const Pose& other) const;

 private:
  Eigen::Quaterniond rotation_ = Eigen::Quaterniond::Identity();
  Vec3 translation_ = Vec3::Zero();
};

// Tangent vector of SE(3), ordered (angular, linear) when flattened.
struct Twist {
  Vec3 angular = Vec3::Zero();
  Vec3 linear = Vec3::Zero();

  Twist() = default;
  Twist(const Vec3& w, const Vec3& v) : angular(w), linear(v) {}

  static Twist from_vector(const Vec6& x) { return {x.head<3>(), x.tail<3>()}; }
  Vec6 to_vector() const;
  bool is_finite() const;
};

Pose se3_exp(const Twist& xi);

struct LogResult {
  Twist twist;
  // Rotation angle within 1e-6 of pi: the axis sign is not unique.
  bool degenerate = false;
};

LogResult se3_log(const Pose& pose);

// Ordered 3D points with optional unit normals. Validated on construction.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Vec3> points);
  PointCloud(std::vector<Vec3> points, std::vector<Vec3> normals);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  bool has_normals() const { return !normals_.empty(); }

  const std::vector<Vec3>& points() const { return points_; }
  const std::vector<Vec3>& normals() const { return normals_; }
  const Vec3& point(std::size_t i) const { return points_[i]; }
  const Vec3& normal(std::size_t i) const { return normals_[i]; }

  PointCloud subset(std::span<const std::size_t> indices) const;
  PointCloud transformed(const Pose& pose) const;

  Vec3 centroid() const;
  // Axis-aligned bounds as (min, max).
  std::pair<Vec3, Vec3> bounds() const;
  // Largest distance from the centroid to any point.
  double bounding_radius() const;

 private:
  std::vector<Vec3> points_;
  std::vector<Vec3> normals_;
};

std::vector<std::size_t> farthest_point_sample(const PointCloud& cloud, std::size_t m,
                                               std::uint64_t seed);

// k nearest indices sorted by distance, ties to the lower index.
std::vector<std::size_t> knn(const PointCloud& cloud, const Vec3& query, std::size_t k);

Vec3 pca_major_axis(const PointCloud& cloud);

PointCloud estimate_normals(const PointCloud& cloud, std::size_t k);

// Deterministic 64-bit mixing used to derive independent RNG substreams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace partgrasp
