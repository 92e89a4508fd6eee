#pragma once

#include <vector>

#include "wavecontrol/fem_assembly.hpp"
#include "wavecontrol/types.hpp"

namespace wavecontrol {

enum class SurfaceBasis {
  Linear,     // P1, one DOF per control vertex
  Quadratic,  // P2, matches the potential trace
  Hermite,    // C1 cubic, value and slope per control vertex
};

/// Third-order tensors on the control surface, stored as one sparse slice per control
/// basis function psi_k:
///   stiffness[k]_ij = int psi_k D phi_i D phi_j   (first derivatives, second for Hermite)
///   mass[k]_ij      = int psi_k phi_i phi_j
struct ControlTensors {
  SurfaceBasis basis = SurfaceBasis::Quadratic;
  int state_size = 0;
  int control_size = 0;
  std::vector<RealSparse> stiffness;
  std::vector<RealSparse> mass;
  RealSparse coupling;           // potential x surface state, int phi_i eta_j
  ComplexVector incident_trace;  // int phi_inc eta_j
  std::vector<double> node_x;    // position of each displacement value DOF
  std::vector<int> value_dofs;

  RealSparse contract_stiffness(const RealVector& u) const;
  RealSparse contract_mass(const RealVector& v) const;
  /// Re(mu^H slice_k eta) for every k.
  RealVector stiffness_gradient(const ComplexVector& mu, const ComplexVector& eta) const;
  RealVector mass_gradient(const ComplexVector& mu, const ComplexVector& eta) const;
  /// Displacement values at node_x.
  ComplexVector displacement(const ComplexVector& eta) const;
};

/// Slices only; coupling and incident_trace are left empty.
ControlTensors assemble_surface_tensors(const ControlSurfaceLayout& layout, SurfaceBasis basis);

ControlTensors assemble_membrane_tensors(const AssembledOperators& ops);
ControlTensors assemble_plate_tensor(const AssembledOperators& ops);

}  // namespace wavecontrol
