#include "partgrasp/ply_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "partgrasp/errors.hpp"

namespace partgrasp {

namespace {

struct ElementSpec {
  std::string name;
  std::size_t count = 0;
  std::vector<std::string> properties;
  bool has_list = false;
};

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

}  // namespace

PointCloud read_ply(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) throw PlyError("missing 'ply' magic");

  std::vector<ElementSpec> elements;
  bool ascii = false;
  while (true) {
    if (!std::getline(in, line)) throw PlyError("unterminated PLY header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "end_header") break;
    if (word == "format") {
      std::string kind;
      ls >> kind;
      if (kind != "ascii") throw PlyError("only ASCII PLY is supported, got format " + kind);
      ascii = true;
    } else if (word == "element") {
      ElementSpec e;
      ls >> e.name >> e.count;
      if (!ls) throw PlyError("malformed element line: " + line);
      elements.push_back(e);
    } else if (word == "property") {
      if (elements.empty()) throw PlyError("property before any element");
      std::string type;
      ls >> type;
      if (type == "list") {
        elements.back().has_list = true;
        std::string a, b, name;
        ls >> a >> b >> name;
        elements.back().properties.push_back(name);
      } else {
        std::string name;
        ls >> name;
        elements.back().properties.push_back(name);
      }
    }
    // comment / obj_info lines are ignored
  }
  if (!ascii) throw PlyError("PLY header lacks a format line");

  std::vector<Vec3> points;
  std::vector<Vec3> normals;
  bool seen_vertex = false;
  for (const auto& e : elements) {
    if (e.name != "vertex") {
      for (std::size_t i = 0; i < e.count; ++i) {
        if (!std::getline(in, line)) throw PlyError("truncated PLY element " + e.name);
      }
      continue;
    }
    seen_vertex = true;
    if (e.has_list) throw PlyError("list properties on vertex are not supported");
    auto find = [&](const char* name) -> int {
      for (std::size_t i = 0; i < e.properties.size(); ++i) {
        if (e.properties[i] == name) return static_cast<int>(i);
      }
      return -1;
    };
    const std::array<int, 3> xyz{find("x"), find("y"), find("z")};
    const std::array<int, 3> nxyz{find("nx"), find("ny"), find("nz")};
    if (xyz[0] < 0 || xyz[1] < 0 || xyz[2] < 0) throw PlyError("vertex element lacks x/y/z");
    const bool with_normals = nxyz[0] >= 0 && nxyz[1] >= 0 && nxyz[2] >= 0;

    points.reserve(e.count);
    std::vector<double> values(e.properties.size());
    for (std::size_t i = 0; i < e.count; ++i) {
      if (!std::getline(in, line)) throw PlyError("truncated vertex data");
      std::istringstream ls(line);
      for (auto& v : values) {
        if (!(ls >> v)) throw PlyError("malformed vertex line " + std::to_string(i));
      }
      points.emplace_back(values[xyz[0]], values[xyz[1]], values[xyz[2]]);
      if (with_normals) {
        Vec3 n(values[nxyz[0]], values[nxyz[1]], values[nxyz[2]]);
        const double len = n.norm();
        if (!(len > 1e-12)) throw PlyError("zero-length normal at vertex " + std::to_string(i));
        normals.push_back(std::abs(len - 1.0) > 1e-12 ? Vec3(n / len) : n);
      }
    }
  }
  if (!seen_vertex) throw PlyError("PLY has no vertex element");
  return PointCloud(std::move(points), std::move(normals));
}

PointCloud read_ply(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PlyError("cannot open " + path.string());
  return read_ply(in);
}

void write_ply(std::ostream& out, const PointCloud& cloud) {
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << cloud.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  if (cloud.has_normals()) out << "property double nx\nproperty double ny\nproperty double nz\n";
  out << "end_header\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.point(i);
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z());
    if (cloud.has_normals()) {
      const Vec3& n = cloud.normal(i);
      out << ' ' << format_double(n.x()) << ' ' << format_double(n.y()) << ' '
          << format_double(n.z());
    }
    out << '\n';
  }
}

void write_ply(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw PlyError("cannot write " + path.string());
  write_ply(out, cloud);
}

}  // namespace partgrasp
