#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "partgrasp/errors.hpp"
#include "partgrasp/geometry.hpp"

using namespace partgrasp;

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v(n(rng), n(rng), n(rng));
  return v.normalized();
}

PointCloud random_cloud(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> pts(n);
  for (auto& p : pts) p = Vec3(u(rng), u(rng), u(rng));
  return PointCloud(std::move(pts));
}

}  // namespace

TEST_CASE("se3_exp of zero twist is the identity") {
  const Pose p = se3_exp(Twist());
  CHECK(p.rotation().angularDistance(Eigen::Quaterniond::Identity()) < 1e-15);
  CHECK(p.translation().norm() == 0.0);
}

TEST_CASE("se3_exp quarter turn about z") {
  const Pose p = se3_exp(Twist(Vec3(0, 0, kPi / 2), Vec3::Zero()));
  const Vec3 x = p.apply(Vec3::UnitX());
  CHECK(x.x() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(x.y() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.translation().norm() < 1e-15);
}

TEST_CASE("se3_log of a pure translation") {
  const LogResult r = se3_log(Pose(Eigen::Quaterniond::Identity(), Vec3(1, 2, 3)));
  CHECK(r.twist.angular.norm() < 1e-15);
  CHECK((r.twist.linear - Vec3(1, 2, 3)).norm() < 1e-12);
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("se3 log/exp round trip over random twists") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.0, kPi - 1e-3);
  std::normal_distribution<double> n(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Twist xi(random_unit(rng) * angle(rng), Vec3(n(rng), n(rng), n(rng)));
    const Twist back = se3_log(se3_exp(xi)).twist;
    worst = std::max(worst, (back.to_vector() - xi.to_vector()).norm());
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("se3_log flags rotations by pi") {
  const Pose p = se3_exp(Twist(Vec3(kPi, 0, 0), Vec3::Zero()));
  CHECK(se3_log(p).degenerate);
}

TEST_CASE("pose composition and inverse") {
  std::mt19937_64 rng(2);
  const Pose a = se3_exp(Twist(random_unit(rng) * 0.7, Vec3(0.1, -0.2, 0.3)));
  const Pose b = se3_exp(Twist(random_unit(rng) * 1.3, Vec3(-0.4, 0.0, 0.2)));
  const Vec3 p(0.3, 0.4, -0.5);
  CHECK(((a * b).apply(p) - a.apply(b.apply(p))).norm() < 1e-12);
  CHECK((a.inverse().apply(a.apply(p)) - p).norm() < 1e-12);
  CHECK((a.apply_inverse(a.apply(p)) - p).norm() < 1e-12);
}

TEST_CASE("point cloud validation") {
  CHECK_FALSE(PointCloud({Vec3(0, 0, 0)}, {}).has_normals());
  CHECK_THROWS_AS(PointCloud({Vec3(0, 0, 0)}, {Vec3(0, 0, 2)}), ParameterError);
  CHECK_THROWS_AS(PointCloud({Vec3(0, 0, 0), Vec3(1, 0, 0)}, {Vec3(0, 0, 1)}), ParameterError);
  CHECK_THROWS_AS(PointCloud({Vec3(std::nan(""), 0, 0)}), ParameterError);
}

TEST_CASE("farthest point sampling with m = n is a permutation") {
  std::mt19937_64 rng(5);
  const PointCloud cloud = random_cloud(rng, 30);
  auto idx = farthest_point_sample(cloud, 30, 9);
  std::sort(idx.begin(), idx.end());
  std::vector<std::size_t> all(30);
  std::iota(all.begin(), all.end(), 0);
  CHECK(idx == all);
}

TEST_CASE("farthest point sampling on square corners picks a diagonal") {
  const PointCloud square({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)});
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto idx = farthest_point_sample(square, 2, seed);
    CHECK((square.point(idx[0]) - square.point(idx[1])).norm() == doctest::Approx(std::sqrt(2.0)));
  }
}

TEST_CASE("farthest point sampling m = 2 matches a brute-force farthest partner") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const PointCloud cloud = random_cloud(rng, 20 + trial * 3);
    const auto idx = farthest_point_sample(cloud, 2, trial);
    std::size_t oracle = 0;
    double best = -1.0;
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      const double d = (cloud.point(j) - cloud.point(idx[0])).norm();
      if (d > best) {
        best = d;
        oracle = j;
      }
    }
    CHECK(idx[1] == oracle);
    CHECK(farthest_point_sample(cloud, 2, trial) == idx);
  }
}

TEST_CASE("farthest point sampling rejects bad counts") {
  const PointCloud cloud({Vec3(0, 0, 0), Vec3(1, 0, 0)});
  CHECK_THROWS_AS(farthest_point_sample(cloud, 3, 0), SizeError);
  CHECK_THROWS_AS(farthest_point_sample(cloud, 0, 0), ParameterError);
}

TEST_CASE("knn equals an exhaustive sort") {
  std::mt19937_64 rng(23);
  for (std::size_t n : {1u, 10u, 200u, 1000u}) {
    const PointCloud cloud = random_cloud(rng, n);
    const Vec3 q = random_unit(rng) * 0.5;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return (cloud.point(a) - q).squaredNorm() < (cloud.point(b) - q).squaredNorm();
    });
    const std::size_t k = std::min<std::size_t>(n, 17);
    order.resize(k);
    CHECK(knn(cloud, q, k) == order);
  }
}

TEST_CASE("knn above the brute-force size agrees with an exhaustive sort") {
  std::mt19937_64 rng(29);
  const PointCloud cloud = random_cloud(rng, 6000);
  for (int t = 0; t < 5; ++t) {
    const Vec3 q = random_unit(rng) * 0.9;
    std::vector<std::size_t> order(cloud.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return (cloud.point(a) - q).squaredNorm() < (cloud.point(b) - q).squaredNorm();
    });
    order.resize(25);
    CHECK(knn(cloud, q, 25) == order);
  }
}

TEST_CASE("knn collinear points and ties") {
  std::vector<Vec3> line;
  for (int i = 0; i < 10; ++i) line.emplace_back(i, 0, 0);
  const PointCloud cloud(line);
  CHECK(knn(cloud, Vec3(0, 0, 0), 3) == std::vector<std::size_t>{0, 1, 2});
  CHECK(knn(cloud, Vec3(4, 0, 0), 1) == std::vector<std::size_t>{4});
  // 3 and 5 are equidistant from 4
  CHECK(knn(cloud, Vec3(4, 0, 0), 2) == std::vector<std::size_t>{4, 3});
  CHECK_THROWS_AS(knn(cloud, Vec3::Zero(), 11), SizeError);
}

TEST_CASE("pca major axis") {
  std::vector<Vec3> seg;
  for (int i = 0; i < 20; ++i) seg.emplace_back(0.05 * i, 0, 0);
  CHECK(std::abs(pca_major_axis(PointCloud(seg)).dot(Vec3::UnitX())) == doctest::Approx(1.0));

  const Vec3 dir = Vec3(1, 1, 0).normalized();
  std::vector<Vec3> diag;
  for (int i = 0; i < 20; ++i) diag.push_back(dir * (0.1 * i));
  CHECK(std::abs(pca_major_axis(PointCloud(diag)).dot(dir)) == doctest::Approx(1.0));

  std::mt19937_64 rng(31);
  std::normal_distribution<double> n(0.0, 1.0);
  const Vec3 axis = Vec3(0.3, -0.5, 0.8).normalized();
  const Mat3 basis = Eigen::Quaterniond::FromTwoVectors(Vec3::UnitX(), axis).toRotationMatrix();
  std::vector<Vec3> blob;
  for (int i = 0; i < 2000; ++i) blob.push_back(basis * Vec3(5.0 * n(rng), n(rng), 0.5 * n(rng)));
  const double cosang = std::abs(pca_major_axis(PointCloud(blob)).dot(axis));
  CHECK(cosang > std::cos(5.0 * kPi / 180.0));
}

TEST_CASE("normals on a plane and a sphere") {
  std::vector<Vec3> plane;
  for (int i = 0; i < 15; ++i) {
    for (int j = 0; j < 15; ++j) plane.emplace_back(0.01 * i, 0.01 * j, 0.0);
  }
  const PointCloud pn = estimate_normals(PointCloud(plane), 8);
  for (const auto& n : pn.normals()) {
    CHECK(std::abs(std::abs(n.z()) - 1.0) < 1e-9);
    CHECK(n.norm() == doctest::Approx(1.0));
  }

  std::mt19937_64 rng(37);
  std::vector<Vec3> sphere;
  for (int i = 0; i < 3000; ++i) sphere.push_back(random_unit(rng) * 0.1);
  const PointCloud sn = estimate_normals(PointCloud(sphere), 12);
  std::size_t good = 0;
  for (std::size_t i = 0; i < sn.size(); ++i) {
    if (sn.normal(i).dot(sn.point(i).normalized()) > std::cos(10.0 * kPi / 180.0)) ++good;
  }
  CHECK(good == sn.size());
}

TEST_CASE("mix_seed separates streams deterministically") {
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
  CHECK(mix_seed(1, 2) != mix_seed(1, 3));
  CHECK(mix_seed(1, 2) != mix_seed(2, 2));
}
