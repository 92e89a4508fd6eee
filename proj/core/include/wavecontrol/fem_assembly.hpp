#pragma once

#include <array>
#include <vector>

#include "wavecontrol/geometry.hpp"
#include "wavecontrol/types.hpp"
#include "wavecontrol/wave_physics.hpp"

namespace wavecontrol {

/// Continuous piecewise-quadratic space on the triangulation. DOFs are the mesh vertices
/// followed by edge midpoints numbered in sorted (min, max) vertex-pair order, so the
/// numbering does not depend on triangle enumeration order.
struct PotentialSpace {
  int vertex_count = 0;
  std::vector<std::array<int, 6>> triangle_dofs;  // v0, v1, v2, m01, m12, m20
  std::vector<Point2> coords;

  int size() const { return static_cast<int>(coords.size()); }
};

struct BoundarySegment {
  BoundaryTag tag;
  std::array<int, 3> dofs;  // start, midpoint, end
  Point2 start;
  Point2 end;
  Point2 normal;
};

/// One control-surface edge, oriented with increasing x.
struct SurfaceElement {
  double xa = 0.0;
  double xb = 0.0;
  std::array<int, 3> potential{};  // P2 potential DOFs: left, mid, right
  std::array<int, 2> control{};    // P1 control DOFs
  std::array<int, 3> lagrange{};   // P2 surface DOFs (membrane displacement)
  std::array<int, 4> hermite{};    // value/slope at left node, value/slope at right node
};

struct ControlSurfaceLayout {
  std::vector<SurfaceElement> elements;
  std::vector<double> control_x;          // P1 control DOF positions
  std::vector<double> lagrange_x;         // P2 surface DOF positions
  std::vector<int> lagrange_potential;    // potential DOF carrying each P2 surface DOF
  std::vector<double> hermite_node_x;     // one entry per node; DOFs 2i (value), 2i+1 (slope)

  int control_size() const { return static_cast<int>(control_x.size()); }
};

/// Every mesh-dependent operator of the coupled potential / rigid-body / control problem.
struct AssembledOperators {
  WaveEnvironment env;
  Complex alpha;  // radiation coefficient
  PotentialSpace space;
  std::vector<BoundarySegment> boundary;
  ControlSurfaceLayout surface;
  bool has_body = false;
  Point2 body_center;

  RealSparse A;    // domain stiffness
  RealSparse C_f;  // boundary mass on the free surface
  RealSparse C_c;  // boundary mass on the control surface
  RealSparse C_e;  // boundary mass on the truncation lines
  RealSparse D_c;  // potential trace x P1 control on the control surface (n x l)
  RealSparse A_c;  // P1 stiffness on the control surface
  RealSparse E_c;  // P1 mass on the control surface
  RealSparse K_g;  // 3 x n, integral of the generalised normal times the potential basis on the body
  ComplexVector f_g;  // -integral of the incident normal derivative on the body
  ComplexVector f_c;  // -integral of the incident normal derivative on the control surface
  BodyVector g;       // integral of the incident potential times the generalised normal

  int potential_size() const { return space.size(); }
  int control_size() const { return surface.control_size(); }
};

/// Assembles every operator with exact-for-polynomial quadrature (degree 4 on triangles,
/// degree 9 on edges). Throws AssemblyFailure on degenerate elements.
AssembledOperators assemble(const Mesh2D& mesh, const WaveEnvironment& env, Point2 body_center = {});

PotentialSpace build_potential_space(const Mesh2D& mesh);

/// Incident potential evaluated at every potential DOF.
ComplexVector interpolate_incident(const AssembledOperators& ops);

/// sqrt(v^H M v) for a real symmetric boundary mass matrix M.
double boundary_norm(const RealSparse& mass, const ComplexVector& v);

/// Writes one "i j value" line per stored entry (1-based).
void write_coordinate_matrix(std::ostream& out, const RealSparse& matrix);

}  // namespace wavecontrol
