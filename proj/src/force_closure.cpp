#include "partgrasp/force_closure.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "partgrasp/convex_hull.hpp"
#include "partgrasp/errors.hpp"
#include "partgrasp/linear_program.hpp"

namespace partgrasp {

namespace {

bool lex_less(const Contact& a, const Contact& b) {
  for (int i = 0; i < 3; ++i) {
    if (a.point[i] != b.point[i]) return a.point[i] < b.point[i];
  }
  for (int i = 0; i < 3; ++i) {
    if (a.normal[i] != b.normal[i]) return a.normal[i] < b.normal[i];
  }
  return false;
}

Vec3 reject(const Vec3& v, const Vec3& n) { return v - v.dot(n) * n; }

// First tangent of contact i, built from vectors that move with the
// contacts so the cone discretization is rigid-motion equivariant.
Vec3 tangent_for(const std::vector<Contact>& cs, std::size_t i, const Vec3& centroid, double rho) {
  const Vec3& n = cs[i].normal;
  const double tol = 1e-9 * std::max(rho, 1e-300);
  Vec3 r = reject(centroid - cs[i].point, n);
  if (r.norm() > tol) return r.normalized();
  for (std::size_t j = 0; j < cs.size(); ++j) {
    if (j == i) continue;
    r = reject(cs[j].point - cs[i].point, n);
    if (r.norm() > tol) return r.normalized();
  }
  for (std::size_t j = 0; j < cs.size(); ++j) {
    r = reject(cs[j].normal, n);
    if (r.norm() > 1e-9) return r.normalized();
  }
  const Vec3 any = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return reject(any, n).normalized();
}

}  // namespace

std::vector<Vec6> primitive_wrenches(const std::vector<Contact>& contacts, double mu,
                                     std::size_t edges) {
  if (!(mu > 0.0)) throw ParameterError("friction coefficient must be positive");
  if (edges < 3) throw ParameterError("friction cone needs at least 3 edges");
  std::vector<Contact> cs = contacts;
  std::sort(cs.begin(), cs.end(), lex_less);
  if (cs.empty()) return {};

  Vec3 centroid = Vec3::Zero();
  for (const auto& c : cs) centroid += c.point;
  centroid /= static_cast<double>(cs.size());
  double rho = 0.0;
  for (const auto& c : cs) rho = std::max(rho, (c.point - centroid).norm());
  const double torque_scale = rho > 1e-12 ? 1.0 / rho : 0.0;

  std::vector<Vec6> out;
  out.reserve(cs.size() * edges);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const Vec3 inward = -cs[i].normal.normalized();
    const Vec3 t1 = tangent_for(cs, i, centroid, rho);
    const Vec3 t2 = inward.cross(t1);
    const Vec3 arm = cs[i].point - centroid;
    for (std::size_t e = 0; e < edges; ++e) {
      const double phi = 2.0 * M_PI * static_cast<double>(e) / static_cast<double>(edges);
      const Vec3 f = inward + mu * (std::cos(phi) * t1 + std::sin(phi) * t2);
      Vec6 w;
      w << f, torque_scale * arm.cross(f);
      out.push_back(w);
    }
  }
  return out;
}

double force_closure_epsilon(const std::vector<Contact>& contacts, double mu, std::size_t edges) {
  const auto wrenches = primitive_wrenches(contacts, mu, edges);
  if (contacts.size() < 2) return 0.0;

  Eigen::MatrixXd W(6, static_cast<Eigen::Index>(wrenches.size()));
  for (std::size_t i = 0; i < wrenches.size(); ++i) W.col(static_cast<Eigen::Index>(i)) = wrenches[i];

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(W);
  const auto& sv = svd.singularValues();
  if (sv.size() < 6 || sv[5] <= 1e-9 * sv[0]) return 0.0;

  if (positive_span_margin(W) <= 1e-10) return 0.0;

  std::vector<Eigen::VectorXd> pts;
  pts.reserve(wrenches.size());
  for (const auto& w : wrenches) pts.emplace_back(w);
  HullOptions opts;
  opts.joggle = 1e-9;
  return std::max(0.0, min_facet_offset(pts, opts));
}

}  // namespace partgrasp
