#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "partgrasp/scene.hpp"

namespace partgrasp {

enum class ObjectKind { Mug, Pot, Pan, Knife, Bottle, Keyboard, Basin, Laptop };

std::string to_string(ObjectKind kind);
std::optional<ObjectKind> parse_object_kind(const std::string& name);
const std::vector<ObjectKind>& all_object_kinds();

// Part label a benchmark grasps on this object ("*" for the whole object).
std::string default_part(ObjectKind kind);

// Total area of the analytic surface patches in m^2, before buried points
// are removed.
double object_surface_area(ObjectKind kind, double scale);

// Parametric household stand-in sampled at `density` points per m^2 with
// analytic outward normals. Points of one solid that fall inside another are
// dropped. Parts:
//   mug {body, handle}; pot {body, handle_left, handle_right};
//   pan {body, handle}; knife {blade, handle}; bottle {body, neck};
//   keyboard {body}; basin {body, handle_left, handle_right} (rim halves);
//   laptop {body}.
// Throws ParameterError for non-positive scale or density and when fewer
// than 500 points would be produced.
SceneDescription gen_object(ObjectKind kind, double scale, double density, std::uint64_t seed);

}  // namespace partgrasp
