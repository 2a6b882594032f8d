#include "partgrasp/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <tuple>
#include <unordered_map>

#include "partgrasp/errors.hpp"

namespace partgrasp {

namespace {

constexpr double kSmallAngle = 1e-8;
constexpr double kNormalTolerance = 1e-6;
constexpr std::size_t kBruteForceLimit = 5000;

bool finite(const Vec3& v) { return v.allFinite(); }

}  // namespace

Mat3 skew(const Vec3& v) {
  Mat3 s;
  // clang-format off
  s <<     0, -v.z(),  v.y(),
       v.z(),      0, -v.x(),
      -v.y(),  v.x(),      0;
  // clang-format on
  return s;
}

Pose::Pose(const Eigen::Quaterniond& rotation, const Vec3& translation)
    : rotation_(rotation.normalized()), translation_(translation) {}

Pose Pose::inverse() const {
  Eigen::Quaterniond inv = rotation_.conjugate();
  return Pose(inv, -(inv * translation_));
}

Pose Pose::operator*(const Pose& other) const {
  return Pose(rotation_ * other.rotation_, rotation_ * other.translation_ + translation_);
}

Vec6 Twist::to_vector() const {
  Vec6 x;
  x << angular, linear;
  return x;
}

bool Twist::is_finite() const { return finite(angular) && finite(linear); }

Pose se3_exp(const Twist& xi) {
  const Vec3& w = xi.angular;
  const double theta = w.norm();
  const Mat3 W = skew(w);
  Eigen::Quaterniond q;
  Mat3 V;
  if (theta < kSmallAngle) {
    q = Eigen::Quaterniond(1.0, 0.5 * w.x(), 0.5 * w.y(), 0.5 * w.z());
    V = Mat3::Identity() + 0.5 * W + (1.0 / 6.0) * W * W;
  } else {
    const double half = 0.5 * theta;
    const Vec3 axis = w / theta;
    const double s = std::sin(half);
    q = Eigen::Quaterniond(std::cos(half), s * axis.x(), s * axis.y(), s * axis.z());
    const double t2 = theta * theta;
    V = Mat3::Identity() + ((1.0 - std::cos(theta)) / t2) * W +
        ((theta - std::sin(theta)) / (t2 * theta)) * W * W;
  }
  return Pose(q, V * xi.linear);
}

LogResult se3_log(const Pose& pose) {
  Eigen::Quaterniond q = pose.rotation();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const Vec3 qv = q.vec();
  const double s = qv.norm();
  const double theta = 2.0 * std::atan2(s, q.w());

  LogResult out;
  Vec3 w;
  if (s == 0.0) {
    w = Vec3::Zero();
  } else {
    w = (theta / s) * qv;
  }
  const Mat3 W = skew(w);
  Mat3 Vinv;
  if (theta < kSmallAngle) {
    Vinv = Mat3::Identity() - 0.5 * W + (1.0 / 12.0) * W * W;
  } else {
    const double t2 = theta * theta;
    const double coeff = 1.0 / t2 - (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
    Vinv = Mat3::Identity() - 0.5 * W + coeff * W * W;
  }
  out.twist = Twist(w, Vinv * pose.translation());
  out.degenerate = std::abs(theta - M_PI) < 1e-6;
  return out;
}

PointCloud::PointCloud(std::vector<Vec3> points) : points_(std::move(points)) {
  for (const auto& p : points_) {
    if (!finite(p)) throw ParameterError("point cloud contains a non-finite coordinate");
  }
}

PointCloud::PointCloud(std::vector<Vec3> points, std::vector<Vec3> normals)
    : PointCloud(std::move(points)) {
  if (normals.empty()) return;
  if (normals.size() != points_.size()) {
    throw ParameterError("normal count " + std::to_string(normals.size()) +
                         " does not match point count " + std::to_string(points_.size()));
  }
  for (const auto& n : normals) {
    if (!finite(n) || std::abs(n.norm() - 1.0) > kNormalTolerance) {
      throw ParameterError("point cloud normal is not unit length");
    }
  }
  normals_ = std::move(normals);
}

PointCloud PointCloud::subset(std::span<const std::size_t> indices) const {
  std::vector<Vec3> pts;
  std::vector<Vec3> nrm;
  pts.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= points_.size()) throw SizeError("subset index out of range");
    pts.push_back(points_[i]);
    if (has_normals()) nrm.push_back(normals_[i]);
  }
  return PointCloud(std::move(pts), std::move(nrm));
}

PointCloud PointCloud::transformed(const Pose& pose) const {
  std::vector<Vec3> pts(points_.size());
  std::vector<Vec3> nrm(normals_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) pts[i] = pose.apply(points_[i]);
  for (std::size_t i = 0; i < normals_.size(); ++i) {
    nrm[i] = (pose.rotation() * normals_[i]).normalized();
  }
  return PointCloud(std::move(pts), std::move(nrm));
}

Vec3 PointCloud::centroid() const {
  if (points_.empty()) throw PreconditionError("centroid of an empty cloud");
  Vec3 c = Vec3::Zero();
  for (const auto& p : points_) c += p;
  return c / static_cast<double>(points_.size());
}

std::pair<Vec3, Vec3> PointCloud::bounds() const {
  if (points_.empty()) throw PreconditionError("bounds of an empty cloud");
  Vec3 lo = points_.front();
  Vec3 hi = points_.front();
  for (const auto& p : points_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return {lo, hi};
}

double PointCloud::bounding_radius() const {
  const Vec3 c = centroid();
  double r = 0.0;
  for (const auto& p : points_) r = std::max(r, (p - c).norm());
  return r;
}

std::vector<std::size_t> farthest_point_sample(const PointCloud& cloud, std::size_t m,
                                               std::uint64_t seed) {
  const std::size_t n = cloud.size();
  if (m == 0) throw ParameterError("farthest_point_sample needs m >= 1");
  if (m > n) {
    throw SizeError("cannot sample " + std::to_string(m) + " points from a cloud of " +
                    std::to_string(n));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  std::vector<std::size_t> chosen;
  chosen.reserve(m);
  chosen.push_back(pick(rng));
  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  while (chosen.size() < m) {
    const Vec3& last = cloud.point(chosen.back());
    std::size_t best = n;
    double best_d2 = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      min_d2[i] = std::min(min_d2[i], (cloud.point(i) - last).squaredNorm());
      // strict comparison keeps the lowest index among ties
      if (min_d2[i] > best_d2) {
        best_d2 = min_d2[i];
        best = i;
      }
    }
    chosen.push_back(best);
  }
  return chosen;
}

namespace {

using Ranked = std::pair<double, std::size_t>;

std::vector<std::size_t> take_sorted(std::vector<Ranked>& ranked, std::size_t k) {
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = ranked[i].second;
  return out;
}

std::vector<std::size_t> knn_brute(const PointCloud& cloud, const Vec3& q, std::size_t k) {
  std::vector<Ranked> ranked(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    ranked[i] = {(cloud.point(i) - q).squaredNorm(), i};
  }
  return take_sorted(ranked, k);
}

// Uniform bucket grid for clouds above the brute-force limit.
class BucketGrid {
 public:
  explicit BucketGrid(const PointCloud& cloud) : cloud_(cloud) {
    std::tie(lo_, hi_) = cloud.bounds();
    const Vec3 extent = (hi_ - lo_).cwiseMax(Vec3::Constant(1e-12));
    cell_ = std::cbrt(extent.prod() / static_cast<double>(cloud.size())) * 2.0;
    cell_ = std::max(cell_, extent.maxCoeff() / 256.0);
    dims_ = ((extent / cell_).array().floor().cast<int>() + 1).matrix();
    for (std::size_t i = 0; i < cloud.size(); ++i) buckets_[key(cell_of(cloud.point(i)))].push_back(i);
  }

  std::vector<std::size_t> query(const Vec3& q, std::size_t k) const {
    if ((q.array() < lo_.array()).any() || (q.array() > hi_.array()).any()) {
      return knn_brute(cloud_, q, k);
    }
    const Eigen::Vector3i qc = cell_of(q);
    std::vector<Ranked> ranked;
    const int max_ring = dims_.maxCoeff();
    for (int r = 0; r <= max_ring; ++r) {
      for (int dx = -r; dx <= r; ++dx) {
        for (int dy = -r; dy <= r; ++dy) {
          for (int dz = -r; dz <= r; ++dz) {
            if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != r) continue;
            const Eigen::Vector3i c = qc + Eigen::Vector3i(dx, dy, dz);
            if ((c.array() < 0).any() || (c.array() >= dims_.array()).any()) continue;
            auto it = buckets_.find(key(c));
            if (it == buckets_.end()) continue;
            for (std::size_t i : it->second) ranked.push_back({(cloud_.point(i) - q).squaredNorm(), i});
          }
        }
      }
      if (ranked.size() >= k) {
        std::nth_element(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k - 1),
                         ranked.end());
        // every unvisited point is at least r * cell away
        if (std::sqrt(ranked[k - 1].first) < static_cast<double>(r) * cell_) break;
      }
    }
    return take_sorted(ranked, k);
  }

 private:
  Eigen::Vector3i cell_of(const Vec3& p) const {
    Eigen::Vector3i c = ((p - lo_) / cell_).array().floor().cast<int>().matrix();
    return c.cwiseMax(Eigen::Vector3i::Zero()).cwiseMin(dims_ - Eigen::Vector3i::Ones());
  }
  std::int64_t key(const Eigen::Vector3i& c) const {
    return (static_cast<std::int64_t>(c.x()) * dims_.y() + c.y()) * dims_.z() + c.z();
  }

  const PointCloud& cloud_;
  Vec3 lo_, hi_;
  double cell_ = 1.0;
  Eigen::Vector3i dims_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets_;
};

class NeighborSearch {
 public:
  explicit NeighborSearch(const PointCloud& cloud) : cloud_(cloud) {
    if (cloud.size() >= kBruteForceLimit) grid_.emplace(cloud);
  }
  std::vector<std::size_t> query(const Vec3& q, std::size_t k) const {
    return grid_ ? grid_->query(q, k) : knn_brute(cloud_, q, k);
  }

 private:
  const PointCloud& cloud_;
  std::optional<BucketGrid> grid_;
};

}  // namespace

std::vector<std::size_t> knn(const PointCloud& cloud, const Vec3& query, std::size_t k) {
  if (k == 0) throw ParameterError("knn needs k >= 1");
  if (k > cloud.size()) {
    throw SizeError("knn k=" + std::to_string(k) + " exceeds cloud size " +
                    std::to_string(cloud.size()));
  }
  return NeighborSearch(cloud).query(query, k);
}

namespace {

Mat3 covariance(const std::vector<Vec3>& pts, const Vec3& mean) {
  Mat3 cov = Mat3::Zero();
  for (const auto& p : pts) {
    const Vec3 d = p - mean;
    cov += d * d.transpose();
  }
  return cov / static_cast<double>(pts.size());
}

}  // namespace

Vec3 pca_major_axis(const PointCloud& cloud) {
  if (cloud.size() < 2) throw DegeneracyError("pca_major_axis needs at least two points");
  const Mat3 cov = covariance(cloud.points(), cloud.centroid());
  if (cov.trace() <= 1e-24) throw DegeneracyError("pca_major_axis: zero covariance");
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  Vec3 axis = eig.eigenvectors().col(2).normalized();
  Eigen::Index largest = 0;
  axis.cwiseAbs().maxCoeff(&largest);
  if (axis[largest] < 0.0) axis = -axis;
  return axis;
}

PointCloud estimate_normals(const PointCloud& cloud, std::size_t k) {
  if (k < 3) throw ParameterError("estimate_normals needs k >= 3");
  const std::size_t kk = std::min(k, cloud.size());
  const Vec3 c = cloud.centroid();
  std::vector<Vec3> normals(cloud.size());
  const NeighborSearch search(cloud);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.point(i);
    Vec3 radial = p - c;
    radial = radial.norm() > 1e-12 ? radial.normalized() : Vec3::UnitZ();

    std::vector<Vec3> nb;
    nb.reserve(kk);
    for (std::size_t j : search.query(p, kk)) nb.push_back(cloud.point(j));
    Vec3 mean = Vec3::Zero();
    for (const auto& q : nb) mean += q;
    mean /= static_cast<double>(nb.size());
    const Mat3 cov = covariance(nb, mean);

    Vec3 n = radial;
    if (kk >= 3 && cov.trace() > 1e-24) {
      Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
      const Vec3 ev = eig.eigenvalues();
      // a neighborhood without a distinct smallest direction has no normal
      if (ev[1] > 1e-12 * ev[2] && ev[0] < 0.999 * ev[1]) {
        n = eig.eigenvectors().col(0).normalized();
        if (n.dot(p - c) < 0.0) n = -n;
      }
    }
    normals[i] = n;
  }
  return PointCloud(cloud.points(), std::move(normals));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace partgrasp
