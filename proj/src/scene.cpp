#include "partgrasp/scene.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "partgrasp/errors.hpp"
#include "partgrasp/ply_io.hpp"

namespace partgrasp {

using json = nlohmann::json;

namespace {

ModeHint parse_mode(const std::string& s) {
  if (s == "single") return ModeHint::Single;
  if (s == "dual") return ModeHint::Dual;
  if (s == "auto") return ModeHint::Auto;
  throw SceneError(SceneError::Kind::Parse, "unknown mode_hint '" + s + "'");
}

std::vector<std::size_t> union_of(const SceneDescription& scene,
                                  const std::vector<std::string>& labels) {
  std::set<std::size_t> all;
  for (const auto& l : labels) {
    const auto& idx = scene.parts.at(l);
    all.insert(idx.begin(), idx.end());
  }
  return {all.begin(), all.end()};
}

bool disjoint(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> sa(a), sb(b);
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::vector<std::size_t> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
  return common.empty();
}

void check_region_sizes(const RegionSplit& split) {
  if (split.first.size() < 2 || split.second.size() < 2) {
    throw RegionTooSmallError("target region has fewer than 2 points (" +
                              std::to_string(split.first.size()) + ", " +
                              std::to_string(split.second.size()) + ")");
  }
}

// Maps indices of a sub-cloud back to the parent cloud.
std::vector<std::size_t> remap(const std::vector<std::size_t>& local,
                               const std::vector<std::size_t>& parent_of_local) {
  std::vector<std::size_t> out;
  out.reserve(local.size());
  for (std::size_t i : local) out.push_back(parent_of_local[i]);
  return out;
}

}  // namespace

std::string to_string(ModeHint mode) {
  switch (mode) {
    case ModeHint::Single: return "single";
    case ModeHint::Dual: return "dual";
    case ModeHint::Auto: return "auto";
  }
  return "auto";
}

std::string to_string(GraspMode mode) { return mode == GraspMode::Single ? "single" : "dual"; }

void validate_scene(const SceneDescription& scene) {
  const std::size_t n = scene.cloud.size();
  for (const auto& [label, idx] : scene.parts) {
    if (idx.empty()) throw SceneError(SceneError::Kind::EmptyPart, "part '" + label + "' is empty");
    for (std::size_t i : idx) {
      if (i >= n) {
        throw SceneError(SceneError::Kind::OutOfRange,
                         "part '" + label + "' index " + std::to_string(i) +
                             " out of range for cloud of " + std::to_string(n));
      }
    }
  }
  if (scene.allow_overlap) return;
  for (auto a = scene.parts.begin(); a != scene.parts.end(); ++a) {
    for (auto b = std::next(a); b != scene.parts.end(); ++b) {
      if (!disjoint(a->second, b->second)) {
        throw SceneError(SceneError::Kind::Overlap,
                         "parts '" + a->first + "' and '" + b->first + "' overlap");
      }
    }
  }
}

SceneDescription load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SceneError(SceneError::Kind::Parse, "cannot open scene " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw SceneError(SceneError::Kind::Parse, "scene " + path.string() + ": " + e.what());
  }

  SceneDescription scene;
  std::filesystem::path ply_path;
  try {
    scene.object_label = doc.at("object_label").get<std::string>();
    ply_path = path.parent_path() / doc.at("cloud_ply").get<std::string>();
    for (const auto& [label, arr] : doc.at("parts").items()) {
      std::vector<std::size_t> idx;
      for (const auto& v : arr) {
        const auto i = v.get<long long>();
        if (i < 0) {
          throw SceneError(SceneError::Kind::OutOfRange,
                           "part '" + label + "' has negative index " + std::to_string(i));
        }
        idx.push_back(static_cast<std::size_t>(i));
      }
      scene.parts[label] = std::move(idx);
    }
    scene.mode_hint = parse_mode(doc.value("mode_hint", std::string("auto")));
    scene.allow_overlap = doc.value("allow_overlap", false);
  } catch (const json::exception& e) {
    throw SceneError(SceneError::Kind::Parse, "scene " + path.string() + ": " + e.what());
  }

  if (!std::filesystem::exists(ply_path)) {
    throw SceneError(SceneError::Kind::MissingPly, "scene cloud not found: " + ply_path.string());
  }
  try {
    scene.cloud = read_ply(ply_path);
  } catch (const PlyError& e) {
    throw SceneError(SceneError::Kind::Parse, e.what());
  } catch (const ParameterError& e) {
    throw SceneError(SceneError::Kind::Parse, e.what());
  }
  validate_scene(scene);
  return scene;
}

std::filesystem::path save_scene(const SceneDescription& scene, const std::filesystem::path& dir,
                                 const std::string& stem) {
  std::filesystem::create_directories(dir);
  const std::string ply_name = stem + ".ply";
  write_ply(dir / ply_name, scene.cloud);
  json doc;
  doc["object_label"] = scene.object_label;
  doc["cloud_ply"] = ply_name;
  json parts = json::object();
  for (const auto& [label, idx] : scene.parts) parts[label] = idx;
  doc["parts"] = parts;
  doc["mode_hint"] = to_string(scene.mode_hint);
  if (scene.allow_overlap) doc["allow_overlap"] = true;
  const auto json_path = dir / (stem + ".json");
  std::ofstream out(json_path);
  out << doc.dump(2) << "\n";
  return json_path;
}

std::vector<std::string> matching_parts(const SceneDescription& scene, const std::string& prefix) {
  std::vector<std::string> out;
  for (const auto& [label, idx] : scene.parts) {
    if (label.rfind(prefix, 0) == 0) out.push_back(label);
  }
  return out;
}

GroundingResult ground_target(const SceneDescription& scene, const std::string& part_label,
                              const GroundingOptions& options) {
  GroundingResult out;
  out.global = scene.cloud;
  std::vector<std::string> matched;
  if (part_label == "*") {
    out.target = scene.cloud;
  } else {
    matched = matching_parts(scene, part_label);
    if (matched.empty()) {
      throw LookupError("no part labelled '" + part_label + "' in scene '" + scene.object_label + "'");
    }
    if (scene.parts.count(part_label)) matched = {part_label};
    const auto idx = union_of(scene, matched);
    out.target = scene.cloud.subset(idx);
  }

  switch (scene.mode_hint) {
    case ModeHint::Single: out.mode = GraspMode::Single; break;
    case ModeHint::Dual: out.mode = GraspMode::Dual; break;
    case ModeHint::Auto: {
      const bool two_parts = part_label != "*" && matching_parts(scene, part_label).size() >= 2;
      const auto [lo, hi] = scene.cloud.bounds();
      const bool wide = (hi - lo).maxCoeff() > options.dual_span_threshold;
      out.mode = (two_parts || wide) ? GraspMode::Dual : GraspMode::Single;
      break;
    }
  }
  return out;
}

RegionSplit geometric_split(const PointCloud& cloud) {
  if (cloud.size() < 4) throw PreconditionError("geometric_split needs at least 4 points");
  RegionSplit split;
  split.kind = SplitKind::GeometricObject;
  split.origin = cloud.centroid();
  try {
    split.axis = pca_major_axis(cloud);
  } catch (const DegeneracyError&) {
    split.axis = Vec3::UnitX();
  }
  // points on the plane go to the smaller side, in index order
  const double tol = 1e-9 * std::max(cloud.bounding_radius(), 1e-12);
  std::vector<std::size_t> on_plane;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double s = (cloud.point(i) - split.origin).dot(split.axis);
    if (std::abs(s) <= tol) {
      on_plane.push_back(i);
    } else {
      (s < 0.0 ? split.first_indices : split.second_indices).push_back(i);
    }
  }
  for (std::size_t i : on_plane) {
    auto& side = split.first_indices.size() <= split.second_indices.size() ? split.first_indices
                                                                           : split.second_indices;
    side.insert(std::lower_bound(side.begin(), side.end(), i), i);
  }
  split.first = cloud.subset(split.first_indices);
  split.second = cloud.subset(split.second_indices);
  return split;
}

RegionSplit determine_target_regions(const SceneDescription& scene, const std::string& part_label,
                                     const GroundingOptions& options) {
  const std::vector<std::string> matched =
      part_label == "*" ? std::vector<std::string>{} : matching_parts(scene, part_label);

  if (matched.size() == 2 && disjoint(scene.parts.at(matched[0]), scene.parts.at(matched[1]))) {
    RegionSplit split;
    split.kind = SplitKind::Semantic;
    const auto& a = scene.parts.at(matched[0]);
    const auto& b = scene.parts.at(matched[1]);
    const PointCloud ca = scene.cloud.subset(a);
    const PointCloud cb = scene.cloud.subset(b);
    const PointCloud both = scene.cloud.subset(union_of(scene, matched));
    split.origin = both.centroid();
    try {
      split.axis = pca_major_axis(both);
    } catch (const DegeneracyError&) {
      split.axis = Vec3::UnitX();
    }
    const bool a_first = (ca.centroid() - split.origin).dot(split.axis) <=
                         (cb.centroid() - split.origin).dot(split.axis);
    split.first = a_first ? ca : cb;
    split.second = a_first ? cb : ca;
    split.first_indices = a_first ? a : b;
    split.second_indices = a_first ? b : a;
    check_region_sizes(split);
    return split;
  }

  RegionSplit split;
  if (matched.size() == 1 && scene.parts.at(matched[0]).size() > options.large_part_points) {
    const auto& idx = scene.parts.at(matched[0]);
    split = geometric_split(scene.cloud.subset(idx));
    split.first_indices = remap(split.first_indices, idx);
    split.second_indices = remap(split.second_indices, idx);
    split.kind = SplitKind::GeometricPart;
  } else {
    split = geometric_split(scene.cloud);
  }
  check_region_sizes(split);
  return split;
}

RegionSplit baseline_fps_knn_regions(const PointCloud& cloud, std::size_t k, std::uint64_t seed) {
  if (k == 0 || 2 * k > cloud.size()) {
    throw ParameterError("baseline region size k=" + std::to_string(k) +
                         " must be in [1, |cloud|/2]");
  }
  const auto seeds = farthest_point_sample(cloud, 2, seed);
  RegionSplit split;
  split.kind = SplitKind::Baseline;
  split.first_indices = knn(cloud, cloud.point(seeds[0]), k);
  split.second_indices = knn(cloud, cloud.point(seeds[1]), k);
  split.first = cloud.subset(split.first_indices);
  split.second = cloud.subset(split.second_indices);
  const Vec3 d = cloud.point(seeds[1]) - cloud.point(seeds[0]);
  split.axis = d.norm() > 0.0 ? Vec3(d.normalized()) : Vec3::UnitX();
  split.origin = 0.5 * (cloud.point(seeds[0]) + cloud.point(seeds[1]));
  return split;
}

}  // namespace partgrasp
