#pragma once

// Binds a grid, parameters and doping into a device and dispatches the
// semidiscrete right-hand side by model kind.

#include <vector>

#include "spindd/core.hpp"

namespace spindd {

/// Grid + parameters + doping, with the Dirichlet data n0 = C, n = 0,
/// V(0) = 0, V(1) = V_A.
class Device {
 public:
  Device(Grid1D grid, ModelParams params, DopingProfile doping);

  const Grid1D& grid() const noexcept { return grid_; }
  const ModelParams& params() const noexcept { return params_; }
  const DopingProfile& doping() const noexcept { return doping_; }
  /// Doping sampled at the nodes.
  const std::vector<double>& C() const noexcept { return C_; }

  /// Number of density fields carried by the model: 1 (n0) or 4 (n0, n).
  int density_components() const noexcept;

  /// Overwrites the boundary nodes with the Dirichlet data.
  void apply_boundary(State& s) const;
  /// Re-solves V from n0 (Poisson with the device's Dirichlet data).
  void update_potential(State& s) const;

 private:
  Grid1D grid_;
  ModelParams params_;
  DopingProfile doping_;
  std::vector<double> C_;
};

/// Right-hand side for a state whose V is already consistent with n0.
TimeDerivative evaluate_rhs(const State& s, const Device& device);

/// Right-hand side after re-solving V from n0.
TimeDerivative evaluate_rhs_with_poisson(State s, const Device& device);

/// Charge flux J0 on every face for the device's model.
std::vector<double> charge_flux(const State& s, const Device& device);

/// J0 at the face next to x = 1.
double terminal_current(const State& s, const Device& device);

/// n0 = exp(-V_eq), n = spin (zero when empty), V from Poisson with the
/// device's bias. Boundary nodes carry the Dirichlet data.
State initial_state(const Device& device, const std::vector<Vec3>& spin = {});

/// Infinity norm of the density time derivative over interior nodes.
double rhs_inf_norm(const TimeDerivative& d);

}  // namespace spindd
