#pragma once

#include <cstddef>
#include <vector>

#include "partgrasp/geometry.hpp"
#include "partgrasp/gripper.hpp"

namespace partgrasp {

// Primitive wrenches of the linearized friction cones, one per cone edge,
// as (force, torque / rho) with torques about the contact centroid and rho
// the largest contact-to-centroid distance. Contacts are put in a canonical
// order first, so the result does not depend on how the caller ordered them.
std::vector<Vec6> primitive_wrenches(const std::vector<Contact>& contacts, double mu,
                                     std::size_t edges);

// Radius of the largest origin-centred ball inside the convex hull of the
// primitive wrenches; 0 when the origin is not strictly interior, when the
// wrenches do not span all six dimensions, or with fewer than two contacts.
double force_closure_epsilon(const std::vector<Contact>& contacts, double mu, std::size_t edges);

}  // namespace partgrasp
