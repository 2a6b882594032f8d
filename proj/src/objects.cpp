#include "partgrasp/objects.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "partgrasp/errors.hpp"

namespace partgrasp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInsideEps = 1e-9;
constexpr std::size_t kMinPoints = 500;

enum class Shape { Cylinder, Torus, Box };

// Closed primitive in a local frame. Cylinder: axis +z from 0 to h, radius r.
// Torus: centre line of radius R in the local xy plane for angles [u0, u1],
// tube radius r. Box: centred, half extents `half`.
struct Solid {
  std::string part;
  Shape shape = Shape::Box;
  Pose frame;
  double r = 0.0;
  double h = 0.0;
  double R = 0.0;
  double u0 = 0.0;
  double u1 = 0.0;
  Vec3 half = Vec3::Zero();
};

Solid cylinder(std::string part, const Pose& frame, double r, double h) {
  Solid s;
  s.part = std::move(part);
  s.shape = Shape::Cylinder;
  s.frame = frame;
  s.r = r;
  s.h = h;
  return s;
}

Solid torus(std::string part, const Pose& frame, double R, double r, double u0, double u1) {
  Solid s;
  s.part = std::move(part);
  s.shape = Shape::Torus;
  s.frame = frame;
  s.R = R;
  s.r = r;
  s.u0 = u0;
  s.u1 = u1;
  return s;
}

Solid box(std::string part, const Pose& frame, const Vec3& half) {
  Solid s;
  s.part = std::move(part);
  s.shape = Shape::Box;
  s.frame = frame;
  s.half = half;
  return s;
}

double area(const Solid& s) {
  switch (s.shape) {
    case Shape::Cylinder: return 2.0 * kPi * s.r * s.h + 2.0 * kPi * s.r * s.r;
    case Shape::Torus: return (s.u1 - s.u0) * s.R * 2.0 * kPi * s.r;
    case Shape::Box: {
      const Vec3& e = s.half;
      return 8.0 * (e.x() * e.y() + e.y() * e.z() + e.x() * e.z());
    }
  }
  return 0.0;
}

bool inside(const Solid& s, const Vec3& world) {
  const Vec3 p = s.frame.apply_inverse(world);
  switch (s.shape) {
    case Shape::Cylinder:
      return p.head<2>().squaredNorm() < (s.r - kInsideEps) * (s.r - kInsideEps) &&
             p.z() > kInsideEps && p.z() < s.h - kInsideEps;
    case Shape::Torus: {
      const double u = std::atan2(p.y(), p.x());
      const double du = std::fmod(u - s.u0 + 4.0 * kPi, 2.0 * kPi);
      if (du > s.u1 - s.u0) return false;
      const double rho = p.head<2>().norm();
      const double d2 = (rho - s.R) * (rho - s.R) + p.z() * p.z();
      return d2 < (s.r - kInsideEps) * (s.r - kInsideEps);
    }
    case Shape::Box:
      return (p.cwiseAbs().array() < s.half.array() - kInsideEps).all();
  }
  return false;
}

// One uniform surface sample in local coordinates.
void sample_local(const Solid& s, std::mt19937_64& rng, Vec3& p, Vec3& n) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  switch (s.shape) {
    case Shape::Cylinder: {
      const double side = 2.0 * kPi * s.r * s.h;
      const double cap = kPi * s.r * s.r;
      const double pick = U(rng) * (side + 2.0 * cap);
      const double phi = 2.0 * kPi * U(rng);
      if (pick < side) {
        p = Vec3(s.r * std::cos(phi), s.r * std::sin(phi), s.h * U(rng));
        n = Vec3(std::cos(phi), std::sin(phi), 0.0);
      } else {
        const double rad = s.r * std::sqrt(U(rng));
        const bool top = pick < side + cap;
        p = Vec3(rad * std::cos(phi), rad * std::sin(phi), top ? s.h : 0.0);
        n = Vec3(0.0, 0.0, top ? 1.0 : -1.0);
      }
      return;
    }
    case Shape::Torus: {
      // Rejection on the tube angle: the area element scales with R + r cos v.
      double v = 0.0;
      do {
        v = 2.0 * kPi * U(rng);
      } while (U(rng) * (s.R + s.r) > s.R + s.r * std::cos(v));
      const double u = s.u0 + (s.u1 - s.u0) * U(rng);
      const Vec3 radial(std::cos(u), std::sin(u), 0.0);
      n = std::cos(v) * radial + std::sin(v) * Vec3::UnitZ();
      p = s.R * radial + s.r * n;
      return;
    }
    case Shape::Box: {
      const Vec3& e = s.half;
      const double axy = e.x() * e.y(), ayz = e.y() * e.z(), axz = e.x() * e.z();
      const double pick = U(rng) * (axy + ayz + axz);
      const int axis = pick < ayz ? 0 : pick < ayz + axz ? 1 : 2;
      const double sign = U(rng) < 0.5 ? -1.0 : 1.0;
      for (int a = 0; a < 3; ++a) p[a] = (2.0 * U(rng) - 1.0) * e[a];
      p[axis] = sign * e[axis];
      n = Vec3::Zero();
      n[axis] = sign;
      return;
    }
  }
}

Pose at(double x, double y, double z) { return Pose(Eigen::Quaterniond::Identity(), Vec3(x, y, z)); }

Pose at(const Vec3& origin, const Mat3& axes) { return Pose(Eigen::Quaterniond(axes), origin); }

std::vector<Solid> build(ObjectKind kind, double s) {
  Mat3 xz_plane;  // local x -> world x, local y -> world z
  xz_plane << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  Mat3 along_x;  // local z -> world x
  along_x << 0, 0, 1, 1, 0, 0, 0, 1, 0;

  switch (kind) {
    case ObjectKind::Mug:
      return {cylinder("body", at(0, 0, 0), 0.045 * s, 0.10 * s),
              torus("handle", at(Vec3(0.045, 0, 0.05) * s, xz_plane), 0.03 * s, 0.007 * s, -kPi / 2, kPi / 2)};
    case ObjectKind::Pot:
      return {cylinder("body", at(0, 0, 0), 0.12 * s, 0.14 * s),
              torus("handle_left", at(-0.12 * s, 0, 0.12 * s), 0.035 * s, 0.008 * s, kPi / 2, 3 * kPi / 2),
              torus("handle_right", at(0.12 * s, 0, 0.12 * s), 0.035 * s, 0.008 * s, -kPi / 2, kPi / 2)};
    case ObjectKind::Pan:
      return {cylinder("body", at(0, 0, 0), 0.12 * s, 0.05 * s),
              cylinder("handle", at(Vec3(0.10, 0, 0.035) * s, along_x), 0.012 * s, 0.20 * s)};
    case ObjectKind::Knife:
      return {box("handle", at(-0.05 * s, 0, 0), Vec3(0.05, 0.011, 0.0075) * s),
              box("blade", at(0.08 * s, 0, 0), Vec3(0.08, 0.015, 0.001) * s)};
    case ObjectKind::Bottle:
      return {cylinder("body", at(0, 0, 0), 0.035 * s, 0.16 * s),
              cylinder("neck", at(0, 0, 0.15 * s), 0.014 * s, 0.07 * s)};
    case ObjectKind::Keyboard:
      return {box("body", at(0, 0, 0.015 * s), Vec3(0.23, 0.07, 0.015) * s)};
    case ObjectKind::Basin:
      return {cylinder("body", at(0, 0, 0), 0.2 * s, 0.12 * s),
              torus("handle_left", at(0, 0, 0.12 * s), 0.21 * s, 0.012 * s, kPi / 2, 3 * kPi / 2),
              torus("handle_right", at(0, 0, 0.12 * s), 0.21 * s, 0.012 * s, -kPi / 2, kPi / 2)};
    case ObjectKind::Laptop: {
      const Mat3 lid_rot = Eigen::AngleAxisd(-110.0 * kPi / 180.0, Vec3::UnitX()).toRotationMatrix();
      const Vec3 hinge = Vec3(0, 0.11, 0.015) * s;
      return {box("base", at(0, 0, 0.0075 * s), Vec3(0.16, 0.11, 0.0075) * s),
              box("lid", at(hinge + lid_rot * (Vec3(0, -0.11, 0.004) * s), lid_rot), Vec3(0.16, 0.11, 0.004) * s)};
    }
  }
  return {};
}

}  // namespace

std::string to_string(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::Mug: return "mug";
    case ObjectKind::Pot: return "pot";
    case ObjectKind::Pan: return "pan";
    case ObjectKind::Knife: return "knife";
    case ObjectKind::Bottle: return "bottle";
    case ObjectKind::Keyboard: return "keyboard";
    case ObjectKind::Basin: return "basin";
    case ObjectKind::Laptop: return "laptop";
  }
  return "unknown";
}

const std::vector<ObjectKind>& all_object_kinds() {
  static const std::vector<ObjectKind> kinds = {ObjectKind::Mug,    ObjectKind::Pot,      ObjectKind::Pan,
                                                ObjectKind::Knife,  ObjectKind::Bottle,   ObjectKind::Keyboard,
                                                ObjectKind::Basin,  ObjectKind::Laptop};
  return kinds;
}

std::optional<ObjectKind> parse_object_kind(const std::string& name) {
  for (ObjectKind k : all_object_kinds()) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string default_part(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::Mug:
    case ObjectKind::Pot:
    case ObjectKind::Pan:
    case ObjectKind::Knife:
    case ObjectKind::Basin: return "handle";
    case ObjectKind::Bottle: return "neck";
    case ObjectKind::Keyboard:
    case ObjectKind::Laptop: return "*";
  }
  return "*";
}

double object_surface_area(ObjectKind kind, double scale) {
  double total = 0.0;
  for (const auto& s : build(kind, scale)) total += area(s);
  return total;
}

SceneDescription gen_object(ObjectKind kind, double scale, double density, std::uint64_t seed) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("object scale must be positive");
  if (!(density > 0.0) || !std::isfinite(density)) throw ParameterError("point density must be positive");
  const auto solids = build(kind, scale);
  if (density * object_surface_area(kind, scale) < static_cast<double>(kMinPoints)) {
    throw ParameterError("density " + std::to_string(density) + " yields fewer than " +
                         std::to_string(kMinPoints) + " points for " + to_string(kind));
  }

  std::mt19937_64 rng(seed);
  std::vector<Vec3> points;
  std::vector<Vec3> normals;
  std::vector<std::string> owner;
  for (std::size_t si = 0; si < solids.size(); ++si) {
    const Solid& s = solids[si];
    const auto count = static_cast<std::size_t>(std::llround(density * area(s)));
    const Mat3 R = s.frame.rotation_matrix();
    for (std::size_t i = 0; i < count; ++i) {
      Vec3 p, n;
      sample_local(s, rng, p, n);
      const Vec3 wp = s.frame.apply(p);
      bool buried = false;
      for (std::size_t sj = 0; sj < solids.size() && !buried; ++sj) {
        buried = sj != si && inside(solids[sj], wp);
      }
      if (buried) continue;
      points.push_back(wp);
      normals.push_back((R * n).normalized());
      owner.push_back(s.part);
    }
  }

  SceneDescription scene;
  scene.object_label = to_string(kind);
  for (std::size_t i = 0; i < owner.size(); ++i) {
    // laptop halves form a single body part
    const std::string& part = kind == ObjectKind::Laptop ? std::string("body") : owner[i];
    scene.parts[part].push_back(i);
  }
  scene.cloud = PointCloud(std::move(points), std::move(normals));
  if (kind == ObjectKind::Basin || kind == ObjectKind::Laptop) scene.mode_hint = ModeHint::Dual;
  validate_scene(scene);
  return scene;
}

}  // namespace partgrasp
