#include "wavecontrol/surface_tensors.hpp"

#include <array>

#include "quadrature.hpp"
#include "wavecontrol/error.hpp"

namespace wavecontrol {
namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;
using detail::kGauss5;

struct LocalBasis {
  int count = 0;
  std::array<int, 4> dofs{};
  std::array<double, 4> value{};
  std::array<double, 4> deriv{};  // d/dx, or d2/dx2 for Hermite
};

LocalBasis evaluate(const SurfaceElement& el, SurfaceBasis basis, double s) {
  const double h = el.xb - el.xa;
  LocalBasis b;
  switch (basis) {
    case SurfaceBasis::Linear:
      b.count = 2;
      b.dofs = {el.control[0], el.control[1], 0, 0};
      b.value = {1.0 - s, s, 0.0, 0.0};
      b.deriv = {-1.0 / h, 1.0 / h, 0.0, 0.0};
      break;
    case SurfaceBasis::Quadratic:
      b.count = 3;
      b.dofs = {el.lagrange[0], el.lagrange[1], el.lagrange[2], 0};
      {
        const auto q = detail::quadratic_values(s);
        b.value = {q[0], q[1], q[2], 0.0};
      }
      b.deriv = {(4.0 * s - 3.0) / h, (4.0 - 8.0 * s) / h, (4.0 * s - 1.0) / h, 0.0};
      break;
    case SurfaceBasis::Hermite:
      b.count = 4;
      b.dofs = el.hermite;
      b.value = {1.0 - 3.0 * s * s + 2.0 * s * s * s, h * (s - 2.0 * s * s + s * s * s), 3.0 * s * s - 2.0 * s * s * s,
                 h * (s * s * s - s * s)};
      b.deriv = {(12.0 * s - 6.0) / (h * h), (6.0 * s - 4.0) / h, (6.0 - 12.0 * s) / (h * h), (6.0 * s - 2.0) / h};
      break;
  }
  return b;
}

int state_size_of(const ControlSurfaceLayout& layout, SurfaceBasis basis) {
  switch (basis) {
    case SurfaceBasis::Linear: return layout.control_size();
    case SurfaceBasis::Quadratic: return static_cast<int>(layout.lagrange_x.size());
    case SurfaceBasis::Hermite: return 2 * static_cast<int>(layout.hermite_node_x.size());
  }
  return 0;
}

RealSparse contract(const std::vector<RealSparse>& slices, const RealVector& w, int size) {
  RealSparse out(size, size);
  if (w.size() != static_cast<Eigen::Index>(slices.size())) throw InputError("control vector has the wrong length");
  for (std::size_t k = 0; k < slices.size(); ++k) {
    if (w(k) != 0.0) out += w(k) * slices[k];
  }
  out.makeCompressed();
  return out;
}

RealVector slice_gradient(const std::vector<RealSparse>& slices, const ComplexVector& mu, const ComplexVector& eta) {
  RealVector out(slices.size());
  for (std::size_t k = 0; k < slices.size(); ++k) {
    out(k) = mu.dot(slices[k].cast<Complex>() * eta).real();
  }
  return out;
}

void attach_potential_coupling(const AssembledOperators& ops, ControlTensors& t) {
  Triplets coupling;
  t.incident_trace = ComplexVector::Zero(t.state_size);
  for (const auto& el : ops.surface.elements) {
    const double h = el.xb - el.xa;
    for (const auto& q : kGauss5) {
      const auto trace = detail::quadratic_values(q.s);
      const LocalBasis b = evaluate(el, t.basis, q.s);
      const Complex inc = incident_potential(ops.env, el.xa + q.s * h, 0.0);
      for (int j = 0; j < b.count; ++j) {
        t.incident_trace(b.dofs[j]) += q.w * h * inc * b.value[j];
        for (int i = 0; i < 3; ++i) coupling.emplace_back(el.potential[i], b.dofs[j], q.w * h * trace[i] * b.value[j]);
      }
    }
  }
  t.coupling.resize(ops.potential_size(), t.state_size);
  t.coupling.setFromTriplets(coupling.begin(), coupling.end());
  t.coupling.makeCompressed();
}

}  // namespace

RealSparse ControlTensors::contract_stiffness(const RealVector& u) const { return contract(stiffness, u, state_size); }

RealSparse ControlTensors::contract_mass(const RealVector& v) const { return contract(mass, v, state_size); }

RealVector ControlTensors::stiffness_gradient(const ComplexVector& mu, const ComplexVector& eta) const {
  return slice_gradient(stiffness, mu, eta);
}

RealVector ControlTensors::mass_gradient(const ComplexVector& mu, const ComplexVector& eta) const {
  return slice_gradient(mass, mu, eta);
}

ComplexVector ControlTensors::displacement(const ComplexVector& eta) const {
  ComplexVector out(value_dofs.size());
  for (std::size_t i = 0; i < value_dofs.size(); ++i) out(i) = eta(value_dofs[i]);
  return out;
}

ControlTensors assemble_surface_tensors(const ControlSurfaceLayout& layout, SurfaceBasis basis) {
  ControlTensors t;
  t.basis = basis;
  t.state_size = state_size_of(layout, basis);
  t.control_size = layout.control_size();
  std::vector<Triplets> stiff(t.control_size), mass(t.control_size);
  for (const auto& el : layout.elements) {
    const double h = el.xb - el.xa;
    if (!(h > 0.0)) throw AssemblyFailure("degenerate control-surface element");
    for (const auto& q : kGauss5) {
      const LocalBasis b = evaluate(el, basis, q.s);
      const std::array<double, 2> psi = {1.0 - q.s, q.s};
      for (int a = 0; a < 2; ++a) {
        const double w = q.w * h * psi[a];
        for (int i = 0; i < b.count; ++i) {
          for (int j = 0; j < b.count; ++j) {
            stiff[el.control[a]].emplace_back(b.dofs[i], b.dofs[j], w * b.deriv[i] * b.deriv[j]);
            mass[el.control[a]].emplace_back(b.dofs[i], b.dofs[j], w * b.value[i] * b.value[j]);
          }
        }
      }
    }
  }
  for (int k = 0; k < t.control_size; ++k) {
    RealSparse s(t.state_size, t.state_size), m(t.state_size, t.state_size);
    s.setFromTriplets(stiff[k].begin(), stiff[k].end());
    m.setFromTriplets(mass[k].begin(), mass[k].end());
    s.makeCompressed();
    m.makeCompressed();
    t.stiffness.push_back(std::move(s));
    t.mass.push_back(std::move(m));
  }
  switch (basis) {
    case SurfaceBasis::Linear:
      t.node_x = layout.control_x;
      for (int i = 0; i < t.state_size; ++i) t.value_dofs.push_back(i);
      break;
    case SurfaceBasis::Quadratic:
      t.node_x = layout.lagrange_x;
      for (int i = 0; i < t.state_size; ++i) t.value_dofs.push_back(i);
      break;
    case SurfaceBasis::Hermite:
      t.node_x = layout.hermite_node_x;
      for (std::size_t i = 0; i < layout.hermite_node_x.size(); ++i) t.value_dofs.push_back(2 * static_cast<int>(i));
      break;
  }
  return t;
}

ControlTensors assemble_membrane_tensors(const AssembledOperators& ops) {
  ControlTensors t = assemble_surface_tensors(ops.surface, SurfaceBasis::Quadratic);
  attach_potential_coupling(ops, t);
  return t;
}

ControlTensors assemble_plate_tensor(const AssembledOperators& ops) {
  ControlTensors t = assemble_surface_tensors(ops.surface, SurfaceBasis::Hermite);
  attach_potential_coupling(ops, t);
  return t;
}

}  // namespace wavecontrol
