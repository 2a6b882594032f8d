#pragma once

#include <filesystem>
#include <iosfwd>

#include "partgrasp/geometry.hpp"

namespace partgrasp {

// ASCII PLY with a `vertex` element carrying x, y, z and optionally
// nx, ny, nz. Other vertex properties and other elements are skipped.
// Normals are renormalized on load.
PointCloud read_ply(std::istream& in);
PointCloud read_ply(const std::filesystem::path& path);

// Writes doubles in shortest round-trip form so a reload is bit-exact.
void write_ply(std::ostream& out, const PointCloud& cloud);
void write_ply(const std::filesystem::path& path, const PointCloud& cloud);

}  // namespace partgrasp
