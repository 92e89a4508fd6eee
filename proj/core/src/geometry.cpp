#include "wavecontrol/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "wavecontrol/error.hpp"

namespace wavecontrol {
namespace {

constexpr double kMinTriangleArea = 1e-14;

std::vector<double> linspace(double a, double b, int intervals) {
  std::vector<double> out(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) {
    out[i] = a + (b - a) * static_cast<double>(i) / intervals;
  }
  out.front() = a;
  out.back() = b;
  return out;
}

int intervals_for(double length, double spacing) {
  return std::max(1, static_cast<int>(std::ceil(length / spacing - 1e-9)));
}

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.z - b.z); }

double signed_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * ((b.x - a.x) * (c.z - a.z) - (c.x - a.x) * (b.z - a.z));
}

// Collects vertices with coordinate de-duplication and emits counter-clockwise triangles.
class MeshBuilder {
 public:
  int vertex(Point2 p) {
    const auto key = std::make_pair(std::llround(p.x * 1e9), std::llround(p.z * 1e9));
    auto [it, inserted] = index_.try_emplace(key, static_cast<int>(mesh_.vertices.size()));
    if (inserted) mesh_.vertices.push_back(p);
    return it->second;
  }

  void triangle(int a, int b, int c) {
    const auto& v = mesh_.vertices;
    const double area = signed_area(v[a], v[b], v[c]);
    if (std::abs(area) < kMinTriangleArea) {
      throw MeshingFailure("degenerate triangle (area " + std::to_string(area) + " m^2)");
    }
    if (area > 0) {
      mesh_.triangles.push_back({a, b, c});
    } else {
      mesh_.triangles.push_back({a, c, b});
    }
  }

  // Quad given in cyclic order; split along the shorter diagonal.
  void quad(int a, int b, int c, int d) {
    const auto& v = mesh_.vertices;
    if (distance(v[a], v[c]) <= distance(v[b], v[d])) {
      triangle(a, b, c);
      triangle(a, c, d);
    } else {
      triangle(a, b, d);
      triangle(b, c, d);
    }
  }

  void tensor_block(const std::vector<double>& xs, const std::vector<double>& zs) {
    for (std::size_t j = 0; j + 1 < zs.size(); ++j) {
      for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        quad(vertex({xs[i], zs[j]}), vertex({xs[i + 1], zs[j]}), vertex({xs[i + 1], zs[j + 1]}),
             vertex({xs[i], zs[j + 1]}));
      }
    }
  }

  Mesh2D take() { return std::move(mesh_); }

 private:
  std::map<std::pair<long long, long long>, int> index_;
  Mesh2D mesh_;
};

void check_slice_config(const SliceGeometryConfig& cfg) {
  const double r = cfg.body_radius;
  if (!(r > 0.0)) throw InvalidGeometry("body radius must be positive");
  if (!(cfg.depth > r)) throw InvalidGeometry("depth must exceed the body radius");
  if (!(cfg.control_extent > 0.0)) throw InvalidGeometry("control extent must be positive (empty control region)");
  if (!(cfg.half_width > r + cfg.control_extent)) {
    throw InvalidGeometry("half width must exceed body radius plus control extent");
  }
  if (!(cfg.mesh_size > 0.0 && cfg.mesh_size < r)) {
    throw InvalidGeometry("mesh size must satisfy 0 < h < body radius");
  }
}

// Concatenates two level sets that share an endpoint.
std::vector<double> join_levels(std::vector<double> first, const std::vector<double>& second) {
  first.insert(first.end(), second.begin() + 1, second.end());
  return first;
}

Mesh2D build_body_slice(const SliceGeometryConfig& cfg) {
  const double r = cfg.body_radius;
  const double h = cfg.mesh_size;
  const double a = r + cfg.control_extent;
  const double L = cfg.half_width;
  const double d = std::min(a, 0.5 * (r + cfg.depth));

  // Square block [-a, a] x [-d, 0] mapped radially onto the half circle. Its outer
  // boundary nodes are shared with the tensor blocks around it.
  int n_side = intervals_for(d, h);
  int n_bottom = intervals_for(2.0 * a, h);
  const int n_radial = intervals_for(a - r, 0.5 * h);

  std::vector<Point2> outer;
  std::vector<Point2> inner;
  std::vector<double> side_levels;
  std::vector<double> bottom_levels;
  for (int attempt = 0;; ++attempt) {
    side_levels = linspace(0.0, -d, n_side);
    bottom_levels = linspace(-a, a, n_bottom);
    outer.clear();
    for (double z : side_levels) outer.push_back({-a, z});
    for (std::size_t i = 1; i < bottom_levels.size(); ++i) outer.push_back({bottom_levels[i], -d});
    for (std::size_t i = side_levels.size() - 1; i-- > 0;) outer.push_back({a, side_levels[i]});

    inner.clear();
    for (const Point2& p : outer) {
      const double rho = std::hypot(p.x, p.z);
      inner.push_back({r * p.x / rho, r * p.z / rho});
    }
    inner.front() = {-r, 0.0};
    inner.back() = {r, 0.0};

    double longest = 0.0;
    for (std::size_t i = 0; i + 1 < inner.size(); ++i) longest = std::max(longest, distance(inner[i], inner[i + 1]));
    if (longest <= 0.5 * h) break;
    if (attempt > 60) throw MeshingFailure("could not resolve the body boundary");
    n_side = static_cast<int>(std::ceil(n_side * 1.15)) + 1;
    n_bottom = static_cast<int>(std::ceil(n_bottom * 1.15)) + 1;
  }

  MeshBuilder builder;
  const std::size_t n_outer = outer.size();
  std::vector<std::vector<int>> ring(n_outer, std::vector<int>(n_radial + 1));
  for (std::size_t i = 0; i < n_outer; ++i) {
    for (int j = 0; j <= n_radial; ++j) {
      Point2 p;
      if (j == 0) {
        p = inner[i];
      } else if (j == n_radial) {
        p = outer[i];
      } else {
        const double t = static_cast<double>(j) / n_radial;
        p = {inner[i].x + t * (outer[i].x - inner[i].x), inner[i].z + t * (outer[i].z - inner[i].z)};
      }
      ring[i][j] = builder.vertex(p);
    }
  }
  for (std::size_t i = 0; i + 1 < n_outer; ++i) {
    for (int j = 0; j < n_radial; ++j) {
      builder.quad(ring[i][j], ring[i + 1][j], ring[i + 1][j + 1], ring[i][j + 1]);
    }
  }

  const auto lower_levels = linspace(-d, -cfg.depth, intervals_for(cfg.depth - d, h));
  std::vector<double> all_z = join_levels(side_levels, lower_levels);
  const int n_far = intervals_for(L - a, h);
  builder.tensor_block(linspace(-L, -a, n_far), all_z);
  builder.tensor_block(linspace(a, L, n_far), all_z);
  builder.tensor_block(bottom_levels, lower_levels);

  Mesh2D mesh = builder.take();
  tag_boundary(mesh, {cfg.depth, -L, L, {{-a, -r}, {r, a}}});
  return mesh;
}

Mesh2D build_open_slice(const SliceGeometryConfig& cfg) {
  const double r = cfg.body_radius;
  const double h = cfg.mesh_size;
  const double a = r + cfg.control_extent;
  const double L = cfg.half_width;
  auto xs = linspace(-L, -a, intervals_for(L - a, h));
  xs = join_levels(xs, linspace(-a, -r, intervals_for(a - r, 0.5 * h)));
  xs = join_levels(xs, linspace(-r, r, intervals_for(2.0 * r, 0.5 * h)));
  xs = join_levels(xs, linspace(r, a, intervals_for(a - r, 0.5 * h)));
  xs = join_levels(xs, linspace(a, L, intervals_for(L - a, h)));
  const auto zs = linspace(0.0, -cfg.depth, intervals_for(cfg.depth, h));

  MeshBuilder builder;
  builder.tensor_block(xs, zs);
  Mesh2D mesh = builder.take();
  tag_boundary(mesh, {cfg.depth, -L, L, {{-a, -r}, {r, a}}});
  return mesh;
}

}  // namespace

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::FreeSurface: return "FreeSurface";
    case BoundaryTag::ControlSurface: return "ControlSurface";
    case BoundaryTag::Bottom: return "Bottom";
    case BoundaryTag::Body: return "Body";
    case BoundaryTag::Truncation: return "Truncation";
  }
  return "Unknown";
}

BoundaryTag boundary_tag_from_string(std::string_view name) {
  for (auto tag : {BoundaryTag::FreeSurface, BoundaryTag::ControlSurface, BoundaryTag::Bottom, BoundaryTag::Body,
                   BoundaryTag::Truncation}) {
    if (to_string(tag) == name) return tag;
  }
  throw InputError("unknown boundary tag '" + std::string(name) + "'");
}

Mesh2D build_slice_mesh(const SliceGeometryConfig& cfg) {
  check_slice_config(cfg);
  return cfg.with_body ? build_body_slice(cfg) : build_open_slice(cfg);
}

Mesh2D build_channel_mesh(const ChannelConfig& cfg) {
  if (!(cfg.depth > 0.0 && cfg.mesh_size > 0.0)) throw InvalidGeometry("channel depth and mesh size must be positive");
  if (!(cfg.x_min < cfg.x_cover && cfg.x_cover < cfg.x_max)) {
    throw InvalidGeometry("channel requires x_min < x_cover < x_max");
  }
  const double h = cfg.mesh_size;
  auto xs = linspace(cfg.x_min, cfg.x_cover, intervals_for(cfg.x_cover - cfg.x_min, h));
  xs = join_levels(xs, linspace(cfg.x_cover, cfg.x_max, intervals_for(cfg.x_max - cfg.x_cover, h)));
  const auto zs = linspace(0.0, -cfg.depth, intervals_for(cfg.depth, h));
  MeshBuilder builder;
  builder.tensor_block(xs, zs);
  Mesh2D mesh = builder.take();
  tag_boundary(mesh, {cfg.depth, cfg.x_min, cfg.x_max, {{cfg.x_cover, cfg.x_max}}});
  return mesh;
}

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

// Maps each edge to the triangles that contain it (by index) and the opposite vertex.
struct EdgeOwners {
  std::vector<int> triangles;
  std::vector<int> opposite;
};

std::map<EdgeKey, EdgeOwners> edge_owners(const Mesh2D& mesh) {
  std::map<EdgeKey, EdgeOwners> owners;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      auto& entry = owners[edge_key(tri[e], tri[(e + 1) % 3])];
      entry.triangles.push_back(static_cast<int>(t));
      entry.opposite.push_back(tri[(e + 2) % 3]);
    }
  }
  return owners;
}

Point2 outward_normal(const Point2& a, const Point2& b, const Point2& opposite) {
  const double len = distance(a, b);
  Point2 n{(b.z - a.z) / len, -(b.x - a.x) / len};
  if (n.x * (opposite.x - a.x) + n.z * (opposite.z - a.z) > 0.0) {
    n.x = -n.x;
    n.z = -n.z;
  }
  return n;
}

}  // namespace

void tag_boundary(Mesh2D& mesh, const TagClassifier& c) {
  const double tol = 1e-12;
  const double plane_tol = 1e-9 * std::max(1.0, c.depth);
  mesh.boundary_edges.clear();
  for (const auto& [key, owner] : edge_owners(mesh)) {
    if (owner.triangles.size() != 1) continue;
    const Point2& pa = mesh.vertices[key.first];
    const Point2& pb = mesh.vertices[key.second];
    BoundaryEdge edge;
    // orient along the boundary so that the fluid lies to the left
    const Point2& opp = mesh.vertices[owner.opposite.front()];
    edge.vertices = signed_area(pa, pb, opp) > 0 ? std::array<int, 2>{key.first, key.second}
                                                  : std::array<int, 2>{key.second, key.first};
    edge.normal = outward_normal(pa, pb, opp);
    if (std::abs(pa.z) <= tol && std::abs(pb.z) <= tol) {
      const double mid = 0.5 * (pa.x + pb.x);
      edge.tag = BoundaryTag::FreeSurface;
      for (const auto& [lo, hi] : c.control_intervals) {
        if (mid > lo && mid < hi) edge.tag = BoundaryTag::ControlSurface;
      }
    } else if (std::abs(pa.z + c.depth) <= plane_tol && std::abs(pb.z + c.depth) <= plane_tol) {
      edge.tag = BoundaryTag::Bottom;
    } else if ((std::abs(pa.x - c.x_left) <= plane_tol && std::abs(pb.x - c.x_left) <= plane_tol) ||
               (std::abs(pa.x - c.x_right) <= plane_tol && std::abs(pb.x - c.x_right) <= plane_tol)) {
      edge.tag = BoundaryTag::Truncation;
    } else {
      edge.tag = BoundaryTag::Body;
    }
    mesh.boundary_edges.push_back(edge);
  }
}

void compute_outward_normals(Mesh2D& mesh) {
  const auto owners = edge_owners(mesh);
  for (auto& edge : mesh.boundary_edges) {
    const auto it = owners.find(edge_key(edge.vertices[0], edge.vertices[1]));
    if (it == owners.end()) throw InputError("boundary edge is not an edge of any triangle");
    edge.normal = outward_normal(mesh.vertices[edge.vertices[0]], mesh.vertices[edge.vertices[1]],
                                 mesh.vertices[it->second.opposite.front()]);
  }
}

double triangle_area(const Mesh2D& mesh, int triangle) {
  const auto& t = mesh.triangles[triangle];
  return signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
}

std::vector<std::pair<double, double>> control_intervals(const Mesh2D& mesh) {
  std::vector<std::pair<double, double>> pieces;
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != BoundaryTag::ControlSurface) continue;
    const double xa = mesh.vertices[e.vertices[0]].x;
    const double xb = mesh.vertices[e.vertices[1]].x;
    pieces.emplace_back(std::min(xa, xb), std::max(xa, xb));
  }
  std::sort(pieces.begin(), pieces.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& p : pieces) {
    if (!merged.empty() && std::abs(p.first - merged.back().second) <= 1e-12) {
      merged.back().second = std::max(merged.back().second, p.second);
    } else {
      merged.push_back(p);
    }
  }
  return merged;
}

double tagged_length(const Mesh2D& mesh, BoundaryTag tag) {
  double total = 0.0;
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag == tag) total += distance(mesh.vertices[e.vertices[0]], mesh.vertices[e.vertices[1]]);
  }
  return total;
}

MeshDiagnostics validate_mesh(const Mesh2D& mesh, int expected_control_intervals) {
  MeshDiagnostics diag;
  const auto owners = edge_owners(mesh);

  diag.min_area = std::numeric_limits<double>::infinity();
  diag.min_quality = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Point2& a = mesh.vertices[tri[0]];
    const Point2& b = mesh.vertices[tri[1]];
    const Point2& c = mesh.vertices[tri[2]];
    const double area = signed_area(a, b, c);
    diag.min_area = std::min(diag.min_area, area);
    const double la = distance(b, c), lb = distance(a, c), lc = distance(a, b);
    const double inradius = 2.0 * std::abs(area) / (la + lb + lc);
    const double circumradius = la * lb * lc / (4.0 * std::abs(area));
    diag.min_quality = std::min(diag.min_quality, inradius / circumradius);
  }
  if (mesh.triangles.empty() || diag.min_area < kMinTriangleArea) {
    diag.positive_area = false;
    diag.messages.push_back("triangle with non-positive or tiny area");
  }

  double z_min = std::numeric_limits<double>::infinity();
  for (const auto& v : mesh.vertices) z_min = std::min(z_min, v.z);

  std::map<EdgeKey, int> tagged;
  for (const auto& e : mesh.boundary_edges) {
    const auto key = edge_key(e.vertices[0], e.vertices[1]);
    ++tagged[key];
    const auto it = owners.find(key);
    if (it == owners.end() || it->second.triangles.size() != 1) {
      diag.single_owner = false;
      diag.messages.push_back("boundary edge not owned by exactly one triangle");
      continue;
    }
    const Point2& pa = mesh.vertices[e.vertices[0]];
    const Point2& pb = mesh.vertices[e.vertices[1]];
    if (e.tag == BoundaryTag::FreeSurface || e.tag == BoundaryTag::ControlSurface) {
      if (std::abs(pa.z) > 1e-12 || std::abs(pb.z) > 1e-12) {
        diag.planes = false;
        diag.messages.push_back("surface edge off z = 0");
      }
    } else if (e.tag == BoundaryTag::Bottom) {
      const double tol = 1e-12 * std::max(1.0, std::abs(z_min));
      if (std::abs(pa.z - z_min) > tol || std::abs(pb.z - z_min) > tol) {
        diag.planes = false;
        diag.messages.push_back("bottom edge off the seabed plane");
      }
    }
    const Point2& opp = mesh.vertices[it->second.opposite.front()];
    const double norm = std::hypot(e.normal.x, e.normal.z);
    const double into_fluid = e.normal.x * (opp.x - pa.x) + e.normal.z * (opp.z - pa.z);
    if (std::abs(norm - 1.0) > 1e-9 || into_fluid >= 0.0) {
      diag.orientation = false;
      diag.messages.push_back("boundary normal does not point out of the fluid");
    }
  }
  for (const auto& [key, owner] : owners) {
    const auto it = tagged.find(key);
    const int count = it == tagged.end() ? 0 : it->second;
    if (owner.triangles.size() == 1 && count != 1) {
      diag.coverage = false;
      diag.messages.push_back(count == 0 ? "untagged boundary edge" : "boundary edge tagged more than once");
    }
  }

  diag.control_interval_count = static_cast<int>(control_intervals(mesh).size());
  if (diag.control_interval_count != expected_control_intervals) {
    diag.control_intervals = false;
    diag.messages.push_back("expected " + std::to_string(expected_control_intervals) + " control intervals, found " +
                            std::to_string(diag.control_interval_count));
  }
  return diag;
}

}  // namespace wavecontrol
