#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wavecontrol/types.hpp"

namespace wavecontrol {

enum class BoundaryTag { FreeSurface, ControlSurface, Bottom, Body, Truncation };

std::string_view to_string(BoundaryTag tag);
BoundaryTag boundary_tag_from_string(std::string_view name);

struct BoundaryEdge {
  std::array<int, 2> vertices{};
  BoundaryTag tag = BoundaryTag::FreeSurface;
  Point2 normal;  // unit, pointing out of the fluid
};

/// Triangulated vertical slice (x horizontal, z up, free surface at z = 0).
struct Mesh2D {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<BoundaryEdge> boundary_edges;
};

/// Slice through the body: fluid in [-L, L] x [-h0, 0] minus the lower half disk of
/// radius r centred at the origin. The control surface is the two intervals
/// [-r-c, -r] and [r, r+c] on z = 0.
struct SliceGeometryConfig {
  double depth = 2.5;           // h0 [m]
  double half_width = 4.0;      // L [m]
  double body_radius = 0.5;     // r [m]
  double control_extent = 0.5;  // c [m]
  double mesh_size = 0.1;       // h [m]
  bool with_body = true;        // false keeps the control intervals but removes the hole
};

/// Flat channel [x_min, x_max] x [-depth, 0]. Surface is free on [x_min, x_cover] and
/// covered (ControlSurface) on [x_cover, x_max].
struct ChannelConfig {
  double depth = 1.0;
  double x_min = -3.0;
  double x_cover = 0.0;
  double x_max = 10.0;
  double mesh_size = 0.1;
};

Mesh2D build_slice_mesh(const SliceGeometryConfig& cfg);
Mesh2D build_channel_mesh(const ChannelConfig& cfg);

/// Extracts boundary edges and tags them by position. Vertices on the planes used by the
/// classifier must carry exact coordinates.
struct TagClassifier {
  double depth = 0.0;
  double x_left = 0.0;
  double x_right = 0.0;
  std::vector<std::pair<double, double>> control_intervals;
};
void tag_boundary(Mesh2D& mesh, const TagClassifier& classifier);

/// Recomputes every boundary normal from the owning triangle.
void compute_outward_normals(Mesh2D& mesh);

struct MeshDiagnostics {
  bool single_owner = true;       // every boundary edge belongs to exactly one triangle
  bool coverage = true;           // every free edge of the triangulation is tagged once
  bool planes = true;             // surface edges on z = 0, bottom edges on the deepest plane
  bool orientation = true;        // stored normals point out of the fluid
  bool control_intervals = true;  // control surface splits into the expected intervals
  bool positive_area = true;
  int control_interval_count = 0;
  double min_quality = 0.0;  // min over triangles of 2 * inradius / circumradius
  double min_area = 0.0;
  std::vector<std::string> messages;

  bool ok() const {
    return single_owner && coverage && planes && orientation && control_intervals && positive_area;
  }
};

MeshDiagnostics validate_mesh(const Mesh2D& mesh, int expected_control_intervals = 2);

/// Sorted, merged [x_begin, x_end] intervals covered by ControlSurface edges.
std::vector<std::pair<double, double>> control_intervals(const Mesh2D& mesh);

double tagged_length(const Mesh2D& mesh, BoundaryTag tag);
double triangle_area(const Mesh2D& mesh, int triangle);

/// Plain-text mesh format: "v x z", "t i j k", "b i j TAG"; 1-based indices.
void write_mesh(std::ostream& out, const Mesh2D& mesh);
Mesh2D read_mesh(std::istream& in);
void write_mesh_file(const std::string& path, const Mesh2D& mesh);
Mesh2D read_mesh_file(const std::string& path);

}  // namespace wavecontrol
