#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "partgrasp/geometry.hpp"

namespace partgrasp {

enum class ModeHint { Single, Dual, Auto };
enum class GraspMode { Single, Dual };

// File-backed stand-in for the language/vision front end: the object label,
// its cloud, and labelled index sets naming parts of that cloud.
struct SceneDescription {
  std::string object_label;
  PointCloud cloud;
  std::map<std::string, std::vector<std::size_t>> parts;
  ModeHint mode_hint = ModeHint::Auto;
  bool allow_overlap = false;
};

struct GroundingResult {
  PointCloud global;
  PointCloud target;
  GraspMode mode = GraspMode::Single;
};

struct GroundingOptions {
  // Auto mode resolves to dual when the longest bounding-box edge exceeds this.
  double dual_span_threshold = 0.45;
  // A single matched part larger than this is split instead of the whole object.
  std::size_t large_part_points = 50;
};

enum class SplitKind { Semantic, GeometricPart, GeometricObject, Baseline };

// Two target regions for the two arms. `axis` and `origin` define the
// splitting plane (or, for the baseline, the seed-to-seed direction and midpoint).
struct RegionSplit {
  PointCloud first;
  PointCloud second;
  std::vector<std::size_t> first_indices;   // into the source cloud
  std::vector<std::size_t> second_indices;
  Vec3 axis = Vec3::UnitX();
  Vec3 origin = Vec3::Zero();
  SplitKind kind = SplitKind::GeometricObject;
};

// Throws SceneError with a kind for parse, missing PLY, out-of-range index,
// empty part and undeclared overlap.
void validate_scene(const SceneDescription& scene);

SceneDescription load_scene(const std::filesystem::path& path);

// Writes <dir>/<stem>.json and <dir>/<stem>.ply.
std::filesystem::path save_scene(const SceneDescription& scene, const std::filesystem::path& dir,
                                 const std::string& stem);

// Labels of parts whose name starts with `prefix`, in map order.
std::vector<std::string> matching_parts(const SceneDescription& scene, const std::string& prefix);

GroundingResult ground_target(const SceneDescription& scene, const std::string& part_label,
                              const GroundingOptions& options = {});

RegionSplit geometric_split(const PointCloud& cloud);

RegionSplit determine_target_regions(const SceneDescription& scene, const std::string& part_label,
                                     const GroundingOptions& options = {});

RegionSplit baseline_fps_knn_regions(const PointCloud& cloud, std::size_t k, std::uint64_t seed);

std::string to_string(ModeHint mode);
std::string to_string(GraspMode mode);

}  // namespace partgrasp
