#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace partgrasp {

struct HullFacet {
  Eigen::VectorXd normal;  // unit, outward
  double offset = 0.0;     // normal . x <= offset for every hull point x
  std::vector<int> vertices;
};

struct HullOptions {
  // Relative magnitude of the deterministic perturbation applied to every
  // coordinate so that no d+1 points are cospherical or coplanar.
  double joggle = 0.0;
  std::uint64_t seed = 0x5eed;
};

// Incremental beneath-beyond hull in any dimension. Points must be
// affinely full-dimensional; throws DegeneracyError otherwise.
std::vector<HullFacet> convex_hull(const std::vector<Eigen::VectorXd>& points,
                                   const HullOptions& options = {});

// Smallest facet offset of the hull of `points`: the distance from the origin
// to the hull boundary when the origin is interior, and non-positive
// otherwise. Expands a simplex toward the origin, building only the facets
// nearest to it.
double min_facet_offset(const std::vector<Eigen::VectorXd>& points, const HullOptions& options = {});

}  // namespace partgrasp
