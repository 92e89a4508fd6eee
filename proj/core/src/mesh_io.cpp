#include <cstdio>
#include <fstream>
#include <sstream>

#include "wavecontrol/error.hpp"
#include "wavecontrol/geometry.hpp"

namespace wavecontrol {

void write_mesh(std::ostream& out, const Mesh2D& mesh) {
  char buf[96];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g\n", v.x, v.z);
    out << buf;
  }
  for (const auto& t : mesh.triangles) out << "t " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  for (const auto& e : mesh.boundary_edges) {
    out << "b " << e.vertices[0] + 1 << ' ' << e.vertices[1] + 1 << ' ' << to_string(e.tag) << '\n';
  }
}

Mesh2D read_mesh(std::istream& in) {
  Mesh2D mesh;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw InputError("mesh line " + std::to_string(line_no) + ": " + what);
  };
  auto index = [&](long value, std::size_t limit) {
    if (value < 1 || static_cast<std::size_t>(value) > limit) fail("vertex index out of range");
    return static_cast<int>(value - 1);
  };
  std::vector<std::array<long, 3>> raw_triangles;
  std::vector<std::pair<std::array<long, 2>, std::string>> raw_edges;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind) || kind[0] == '#') continue;
    if (kind == "v") {
      Point2 p;
      if (!(ls >> p.x >> p.z)) fail("expected 'v x z'");
      mesh.vertices.push_back(p);
    } else if (kind == "t") {
      std::array<long, 3> t{};
      if (!(ls >> t[0] >> t[1] >> t[2])) fail("expected 't i j k'");
      raw_triangles.push_back(t);
    } else if (kind == "b") {
      std::array<long, 2> e{};
      std::string tag;
      if (!(ls >> e[0] >> e[1] >> tag)) fail("expected 'b i j TAG'");
      raw_edges.emplace_back(e, tag);
    } else {
      fail("unknown record '" + kind + "'");
    }
  }
  const std::size_t nv = mesh.vertices.size();
  for (const auto& t : raw_triangles) mesh.triangles.push_back({index(t[0], nv), index(t[1], nv), index(t[2], nv)});
  for (const auto& [e, tag] : raw_edges) {
    BoundaryEdge edge;
    edge.vertices = {index(e[0], nv), index(e[1], nv)};
    edge.tag = boundary_tag_from_string(tag);
    mesh.boundary_edges.push_back(edge);
  }
  compute_outward_normals(mesh);
  return mesh;
}

void write_mesh_file(const std::string& path, const Mesh2D& mesh) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write mesh file '" + path + "'");
  write_mesh(out, mesh);
}

Mesh2D read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read mesh file '" + path + "'");
  return read_mesh(in);
}

}  // namespace wavecontrol
