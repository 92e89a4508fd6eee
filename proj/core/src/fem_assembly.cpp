#include "wavecontrol/fem_assembly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "quadrature.hpp"
#include "wavecontrol/error.hpp"

namespace wavecontrol {
namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;
using detail::kGauss5;
using detail::kTriangle6;
using detail::quadratic_values;

RealSparse from_triplets(int rows, int cols, const Triplets& triplets) {
  RealSparse m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

double length(const Point2& a, const Point2& b) { return std::hypot(b.x - a.x, b.z - a.z); }

void add_triangle_stiffness(const PotentialSpace& space, int t, Triplets& out) {
  const auto& dofs = space.triangle_dofs[t];
  const Point2& p0 = space.coords[dofs[0]];
  const Point2& p1 = space.coords[dofs[1]];
  const Point2& p2 = space.coords[dofs[2]];
  const double twice_area = (p1.x - p0.x) * (p2.z - p0.z) - (p2.x - p0.x) * (p1.z - p0.z);
  if (!(twice_area > 2e-14)) throw AssemblyFailure("degenerate or inverted triangle " + std::to_string(t));
  const double area = 0.5 * twice_area;
  const std::array<Eigen::Vector2d, 3> gl = {
      Eigen::Vector2d(p1.z - p2.z, p2.x - p1.x) / twice_area,
      Eigen::Vector2d(p2.z - p0.z, p0.x - p2.x) / twice_area,
      Eigen::Vector2d(p0.z - p1.z, p1.x - p0.x) / twice_area,
  };
  Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
  for (const auto& q : kTriangle6) {
    const auto& l = q.l;
    std::array<Eigen::Vector2d, 6> grad = {
        (4.0 * l[0] - 1.0) * gl[0],
        (4.0 * l[1] - 1.0) * gl[1],
        (4.0 * l[2] - 1.0) * gl[2],
        4.0 * (l[1] * gl[0] + l[0] * gl[1]),
        4.0 * (l[2] * gl[1] + l[1] * gl[2]),
        4.0 * (l[0] * gl[2] + l[2] * gl[0]),
    };
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) local(i, j) += q.w * area * grad[i].dot(grad[j]);
    }
  }
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) out.emplace_back(dofs[i], dofs[j], local(i, j));
  }
}

Point2 along(const BoundarySegment& seg, double s) {
  return {seg.start.x + s * (seg.end.x - seg.start.x), seg.start.z + s * (seg.end.z - seg.start.z)};
}

void add_boundary_mass(const BoundarySegment& seg, Triplets& out) {
  const double len = length(seg.start, seg.end);
  for (const auto& q : kGauss5) {
    const auto n = quadratic_values(q.s);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) out.emplace_back(seg.dofs[i], seg.dofs[j], q.w * len * n[i] * n[j]);
    }
  }
}

std::array<double, 3> generalised_normal(const BoundarySegment& seg, const Point2& p, const Point2& center) {
  const Point2& n = seg.normal;
  return {n.x, n.z, (p.x - center.x) * n.z - (p.z - center.z) * n.x};
}

ControlSurfaceLayout build_surface_layout(const Mesh2D& mesh, const PotentialSpace& space,
                                          const std::vector<BoundarySegment>& boundary) {
  ControlSurfaceLayout layout;
  std::map<double, int> vertex_x;     // control vertex x -> mesh vertex
  std::map<double, int> lagrange_x;   // P2 node x -> potential DOF
  for (const auto& seg : boundary) {
    if (seg.tag != BoundaryTag::ControlSurface) continue;
    for (int i = 0; i < 3; ++i) lagrange_x.emplace(space.coords[seg.dofs[i]].x, seg.dofs[i]);
    vertex_x.emplace(seg.start.x, seg.dofs[0]);
    vertex_x.emplace(seg.end.x, seg.dofs[2]);
  }
  (void)mesh;
  std::map<double, int> control_index;
  for (const auto& [x, vertex] : vertex_x) {
    control_index.emplace(x, static_cast<int>(layout.control_x.size()));
    layout.control_x.push_back(x);
    layout.hermite_node_x.push_back(x);
  }
  std::map<int, int> lagrange_index;
  for (const auto& [x, dof] : lagrange_x) {
    lagrange_index.emplace(dof, static_cast<int>(layout.lagrange_x.size()));
    layout.lagrange_x.push_back(x);
    layout.lagrange_potential.push_back(dof);
  }
  for (const auto& seg : boundary) {
    if (seg.tag != BoundaryTag::ControlSurface) continue;
    SurfaceElement el;
    const bool forward = seg.start.x < seg.end.x;
    el.potential = forward ? seg.dofs : std::array<int, 3>{seg.dofs[2], seg.dofs[1], seg.dofs[0]};
    el.xa = std::min(seg.start.x, seg.end.x);
    el.xb = std::max(seg.start.x, seg.end.x);
    const int left = control_index.at(el.xa);
    const int right = control_index.at(el.xb);
    el.control = {left, right};
    for (int i = 0; i < 3; ++i) el.lagrange[i] = lagrange_index.at(el.potential[i]);
    el.hermite = {2 * left, 2 * left + 1, 2 * right, 2 * right + 1};
    layout.elements.push_back(el);
  }
  std::sort(layout.elements.begin(), layout.elements.end(),
            [](const SurfaceElement& a, const SurfaceElement& b) { return a.xa < b.xa; });
  return layout;
}

}  // namespace

PotentialSpace build_potential_space(const Mesh2D& mesh) {
  PotentialSpace space;
  space.vertex_count = static_cast<int>(mesh.vertices.size());
  std::map<std::pair<int, int>, int> midpoint;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      midpoint.emplace(std::minmax(a, b), 0);
    }
  }
  space.coords = mesh.vertices;
  int next = space.vertex_count;
  for (auto& [key, dof] : midpoint) {
    dof = next++;
    const Point2& a = mesh.vertices[key.first];
    const Point2& b = mesh.vertices[key.second];
    space.coords.push_back({0.5 * (a.x + b.x), 0.5 * (a.z + b.z)});
  }
  for (const auto& t : mesh.triangles) {
    space.triangle_dofs.push_back({t[0], t[1], t[2], midpoint.at(std::minmax(t[0], t[1])),
                                   midpoint.at(std::minmax(t[1], t[2])), midpoint.at(std::minmax(t[2], t[0]))});
  }
  return space;
}

AssembledOperators assemble(const Mesh2D& mesh, const WaveEnvironment& env, Point2 body_center) {
  AssembledOperators ops;
  ops.env = env;
  ops.alpha = radiation_coefficient(env);
  ops.body_center = body_center;
  ops.space = build_potential_space(mesh);
  const int n = ops.space.size();

  Triplets stiffness;
  stiffness.reserve(mesh.triangles.size() * 36);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) add_triangle_stiffness(ops.space, static_cast<int>(t), stiffness);
  ops.A = from_triplets(n, n, stiffness);

  std::map<std::pair<int, int>, int> midpoint_of;
  for (const auto& dofs : ops.space.triangle_dofs) {
    midpoint_of.emplace(std::minmax(dofs[0], dofs[1]), dofs[3]);
    midpoint_of.emplace(std::minmax(dofs[1], dofs[2]), dofs[4]);
    midpoint_of.emplace(std::minmax(dofs[2], dofs[0]), dofs[5]);
  }
  for (const auto& e : mesh.boundary_edges) {
    const int a = e.vertices[0], b = e.vertices[1];
    const auto it = midpoint_of.find(std::minmax(a, b));
    if (it == midpoint_of.end()) throw AssemblyFailure("boundary edge is not a triangle edge");
    BoundarySegment seg{e.tag, {a, it->second, b}, mesh.vertices[a], mesh.vertices[b], e.normal};
    if (!(length(seg.start, seg.end) > 1e-14)) throw AssemblyFailure("degenerate boundary edge");
    ops.boundary.push_back(seg);
  }

  Triplets free_mass, control_mass, truncation_mass, body_rows;
  ops.f_g = ComplexVector::Zero(n);
  ops.f_c = ComplexVector::Zero(n);
  ops.g = BodyVector::Zero();
  for (const auto& seg : ops.boundary) {
    const double len = length(seg.start, seg.end);
    switch (seg.tag) {
      case BoundaryTag::FreeSurface: add_boundary_mass(seg, free_mass); break;
      case BoundaryTag::ControlSurface: {
        add_boundary_mass(seg, control_mass);
        for (const auto& q : kGauss5) {
          const Point2 p = along(seg, q.s);
          const Complex dn = incident_normal_derivative(env, p.x, p.z, seg.normal);
          const auto shape = quadratic_values(q.s);
          for (int i = 0; i < 3; ++i) ops.f_c(seg.dofs[i]) -= q.w * len * dn * shape[i];
        }
        break;
      }
      case BoundaryTag::Truncation: add_boundary_mass(seg, truncation_mass); break;
      case BoundaryTag::Body: {
        ops.has_body = true;
        for (const auto& q : kGauss5) {
          const Point2 p = along(seg, q.s);
          const auto gn = generalised_normal(seg, p, body_center);
          const auto shape = quadratic_values(q.s);
          const Complex phi = incident_potential(env, p.x, p.z);
          const Complex dn = incident_normal_derivative(env, p.x, p.z, seg.normal);
          for (int i = 0; i < 3; ++i) {
            ops.f_g(seg.dofs[i]) -= q.w * len * dn * shape[i];
            for (int r = 0; r < 3; ++r) body_rows.emplace_back(r, seg.dofs[i], q.w * len * gn[r] * shape[i]);
          }
          for (int r = 0; r < 3; ++r) ops.g(r) += q.w * len * phi * gn[r];
        }
        break;
      }
      case BoundaryTag::Bottom: break;
    }
  }
  ops.C_f = from_triplets(n, n, free_mass);
  ops.C_c = from_triplets(n, n, control_mass);
  ops.C_e = from_triplets(n, n, truncation_mass);
  ops.K_g = from_triplets(3, n, body_rows);

  ops.surface = build_surface_layout(mesh, ops.space, ops.boundary);
  const int l = ops.control_size();
  Triplets control_coupling, control_stiffness, control_mass_p1;
  for (const auto& el : ops.surface.elements) {
    const double len = el.xb - el.xa;
    for (const auto& q : kGauss5) {
      const auto trace = quadratic_values(q.s);
      const std::array<double, 2> psi = {1.0 - q.s, q.s};
      for (int i = 0; i < 3; ++i) {
        for (int a = 0; a < 2; ++a) control_coupling.emplace_back(el.potential[i], el.control[a], q.w * len * trace[i] * psi[a]);
      }
    }
    const auto [left, right] = el.control;
    control_mass_p1.emplace_back(left, left, len / 3.0);
    control_mass_p1.emplace_back(right, right, len / 3.0);
    control_mass_p1.emplace_back(left, right, len / 6.0);
    control_mass_p1.emplace_back(right, left, len / 6.0);
    control_stiffness.emplace_back(left, left, 1.0 / len);
    control_stiffness.emplace_back(right, right, 1.0 / len);
    control_stiffness.emplace_back(left, right, -1.0 / len);
    control_stiffness.emplace_back(right, left, -1.0 / len);
  }
  ops.D_c = from_triplets(n, l, control_coupling);
  ops.A_c = from_triplets(l, l, control_stiffness);
  ops.E_c = from_triplets(l, l, control_mass_p1);
  return ops;
}

ComplexVector interpolate_incident(const AssembledOperators& ops) {
  ComplexVector out(ops.potential_size());
  for (int i = 0; i < ops.potential_size(); ++i) {
    out(i) = incident_potential(ops.env, ops.space.coords[i].x, ops.space.coords[i].z);
  }
  return out;
}

double boundary_norm(const RealSparse& mass, const ComplexVector& v) {
  return std::sqrt(std::max(0.0, (v.adjoint() * (mass.cast<Complex>() * v))(0).real()));
}

void write_coordinate_matrix(std::ostream& out, const RealSparse& matrix) {
  char buf[96];
  for (int col = 0; col < matrix.outerSize(); ++col) {
    for (RealSparse::InnerIterator it(matrix, col); it; ++it) {
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", static_cast<long>(it.row()) + 1, static_cast<long>(it.col()) + 1,
                    it.value());
      out << buf;
    }
  }
}

}  // namespace wavecontrol
