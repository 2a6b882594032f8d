#include "partgrasp/convex_hull.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "partgrasp/errors.hpp"

namespace partgrasp {

namespace {

struct Working {
  Eigen::VectorXd normal;
  double offset;
  std::vector<int> vertices;  // sorted
  bool alive = true;
};

// Distance from p to the affine hull of the chosen points.
double affine_distance(const std::vector<Eigen::VectorXd>& pts, const std::vector<int>& chosen,
                       const Eigen::VectorXd& p) {
  const Eigen::VectorXd base = pts[chosen[0]];
  if (chosen.size() == 1) return (p - base).norm();
  Eigen::MatrixXd B(p.size(), static_cast<Eigen::Index>(chosen.size()) - 1);
  for (std::size_t i = 1; i < chosen.size(); ++i) B.col(static_cast<Eigen::Index>(i) - 1) = pts[chosen[i]] - base;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(p.size(), B.cols());
  const Eigen::VectorXd r = p - base;
  return (r - Q * (Q.transpose() * r)).norm();
}

// Beneath-beyond hull over a fixed (joggled) point set; points are added one
// at a time by index.
class IncrementalHull {
 public:
  IncrementalHull(const std::vector<Eigen::VectorXd>& input, const HullOptions& options) : pts_(input) {
    if (input.empty()) throw DegeneracyError("convex hull of no points");
    d_ = static_cast<int>(input.front().size());
    const int n = static_cast<int>(input.size());
    if (n < d_ + 1) throw DegeneracyError("convex hull needs at least d+1 points");

    double scale = 0.0;
    for (const auto& p : input) scale = std::max(scale, p.cwiseAbs().maxCoeff());
    scale_ = std::max(scale, 1e-300);

    if (options.joggle > 0.0) {
      std::mt19937_64 rng(options.seed);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (auto& p : pts_) {
        for (int k = 0; k < d_; ++k) p[k] += options.joggle * scale_ * u(rng);
      }
    }
    used_.assign(pts_.size(), false);
    build_simplex();
  }

  const std::vector<Eigen::VectorXd>& points() const { return pts_; }
  const std::vector<Working>& facets() const { return facets_; }
  bool used(int p) const { return used_[p]; }

  void insert(int p) {
    used_[p] = true;
    std::vector<int> visible;
    for (int f = 0; f < static_cast<int>(facets_.size()); ++f) {
      if (facets_[f].alive && facets_[f].normal.dot(pts_[p]) > facets_[f].offset) visible.push_back(f);
    }
    if (visible.empty()) return;

    std::map<std::vector<int>, int> ridge_count;
    for (int f : visible) {
      const auto& v = facets_[f].vertices;
      for (int skip = 0; skip < d_; ++skip) {
        std::vector<int> ridge;
        ridge.reserve(d_ - 1);
        for (int i = 0; i < d_; ++i) {
          if (i != skip) ridge.push_back(v[i]);
        }
        ++ridge_count[ridge];
      }
      facets_[f].alive = false;
    }
    for (const auto& [ridge, count] : ridge_count) {
      if (count != 1) continue;
      std::vector<int> verts = ridge;
      verts.push_back(p);
      facets_.push_back(make_facet(std::move(verts)));
    }
    // compact occasionally to keep the scan short
    if (facets_.size() > 4096) {
      std::erase_if(facets_, [](const Working& w) { return !w.alive; });
    }
  }

 private:
  Working make_facet(std::vector<int> verts) const {
    std::sort(verts.begin(), verts.end());
    // the last Householder column of the edge matrix is orthogonal to every edge
    Eigen::MatrixXd E(d_, d_ - 1);
    for (int i = 1; i < d_; ++i) E.col(i - 1) = pts_[verts[i]] - pts_[verts[0]];
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(E);
    Eigen::VectorXd n = qr.householderQ() * Eigen::VectorXd::Unit(d_, d_ - 1);
    n.normalize();
    double off = n.dot(pts_[verts[0]]);
    if (n.dot(interior_) > off) {
      n = -n;
      off = -off;
    }
    return {n, off, std::move(verts), true};
  }

  // Greedy: each vertex is the point farthest from the affine hull of the previous ones.
  void build_simplex() {
    const int n = static_cast<int>(pts_.size());
    std::vector<int> simplex;
    int first = 0;
    for (int i = 1; i < n; ++i) {
      if (pts_[i][0] < pts_[first][0]) first = i;
    }
    simplex.push_back(first);
    while (static_cast<int>(simplex.size()) < d_ + 1) {
      int best = -1;
      double best_dist = -1.0;
      for (int i = 0; i < n; ++i) {
        if (std::find(simplex.begin(), simplex.end(), i) != simplex.end()) continue;
        const double dist = affine_distance(pts_, simplex, pts_[i]);
        if (dist > best_dist) {
          best_dist = dist;
          best = i;
        }
      }
      if (best < 0 || best_dist <= 1e-12 * scale_) {
        throw DegeneracyError("points are not affinely full-dimensional");
      }
      simplex.push_back(best);
    }
    interior_ = Eigen::VectorXd::Zero(d_);
    for (int v : simplex) {
      interior_ += pts_[v];
      used_[v] = true;
    }
    interior_ /= static_cast<double>(d_ + 1);
    for (int skip = 0; skip <= d_; ++skip) {
      std::vector<int> verts;
      for (int i = 0; i <= d_; ++i) {
        if (i != skip) verts.push_back(simplex[i]);
      }
      facets_.push_back(make_facet(std::move(verts)));
    }
  }

  std::vector<Eigen::VectorXd> pts_;
  std::vector<bool> used_;
  std::vector<Working> facets_;
  Eigen::VectorXd interior_;
  double scale_ = 0.0;
  int d_ = 0;
};

}  // namespace

std::vector<HullFacet> convex_hull(const std::vector<Eigen::VectorXd>& input,
                                   const HullOptions& options) {
  IncrementalHull hull(input, options);
  for (int p = 0; p < static_cast<int>(input.size()); ++p) {
    if (!hull.used(p)) hull.insert(p);
  }
  std::vector<HullFacet> out;
  for (const auto& f : hull.facets()) {
    if (f.alive) out.push_back({f.normal, f.offset, f.vertices});
  }
  return out;
}

double min_facet_offset(const std::vector<Eigen::VectorXd>& input, const HullOptions& options) {
  IncrementalHull hull(input, options);
  const auto& pts = hull.points();
  while (true) {
    const Working* nearest = nullptr;
    for (const auto& f : hull.facets()) {
      if (f.alive && (!nearest || f.offset < nearest->offset)) nearest = &f;
    }
    int support = -1;
    double best = nearest->offset;
    for (int p = 0; p < static_cast<int>(pts.size()); ++p) {
      if (hull.used(p)) continue;
      const double h = nearest->normal.dot(pts[p]);
      if (h > best) {
        best = h;
        support = p;
      }
    }
    if (support < 0) return nearest->offset;
    hull.insert(support);
  }
}

}  // namespace partgrasp
