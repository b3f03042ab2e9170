#include "spindd/model.hpp"

#include <algorithm>
#include <cmath>

#include "spindd/poisson.hpp"
#include "spindd/qsde1.hpp"
#include "spindd/qsde2.hpp"

namespace spindd {

Device::Device(Grid1D grid, ModelParams params, DopingProfile doping)
    : grid_(grid), params_(params), doping_(doping) {
  params_.validate();
  doping_.validate();
  C_ = doping_.sample(grid_);
}

int Device::density_components() const noexcept {
  return params_.model == ModelKind::DriftDiffusion ? 1 : 4;
}

void Device::apply_boundary(State& s) const {
  const std::size_t last = s.size() - 1;
  s.n0[0] = C_[0];
  s.n0[last] = C_[last];
  s.nvec[0] = {0.0, 0.0, 0.0};
  s.nvec[last] = {0.0, 0.0, 0.0};
  s.V[0] = 0.0;
  s.V[last] = params_.V_A;
}

void Device::update_potential(State& s) const {
  s.V = poisson::potential_from_density(s.n0, C_, params_.lambda_D2, {0.0, params_.V_A}, grid_);
}

TimeDerivative evaluate_rhs(const State& s, const Device& device) {
  switch (device.params().model) {
    case ModelKind::QSDE1: return qsde1::rhs(s, device.params(), device.grid());
    case ModelKind::QSDE2: return qsde2::rhs(s, device.params(), device.grid());
    case ModelKind::DriftDiffusion: {
      TimeDerivative d;
      d.dn0 = qsde1::rhs_charge(s.n0, s.V, device.grid(), device.params().flux);
      d.dnvec.assign(s.size(), Vec3{0.0, 0.0, 0.0});
      return d;
    }
  }
  return {};
}

TimeDerivative evaluate_rhs_with_poisson(State s, const Device& device) {
  device.update_potential(s);
  return evaluate_rhs(s, device);
}

std::vector<double> charge_flux(const State& s, const Device& device) {
  if (device.params().model == ModelKind::QSDE2) {
    return qsde2::flux(s.n0, s.nvec, s.V, device.params(), device.grid()).J0;
  }
  return qsde1::flux_J0(s.n0, s.V, device.grid(), device.params().flux);
}

double terminal_current(const State& s, const Device& device) { return charge_flux(s, device).back(); }

State initial_state(const Device& device, const std::vector<Vec3>& spin) {
  const auto& grid = device.grid();
  const auto eq = poisson::solve_equilibrium_potential(device.doping(), device.params().lambda_D2, grid);
  State s = State::zeros(grid.num_nodes());
  for (std::size_t i = 0; i < s.size(); ++i) s.n0[i] = std::exp(-eq.V[i]);
  if (!spin.empty()) {
    if (spin.size() != s.size()) throw ConfigError("initial spin has wrong length");
    s.nvec = spin;
  }
  device.apply_boundary(s);
  device.update_potential(s);
  check_state(s);
  return s;
}

double rhs_inf_norm(const TimeDerivative& d) {
  double m = 0.0;
  for (std::size_t i = 1; i + 1 < d.dn0.size(); ++i) {
    m = std::max(m, std::abs(d.dn0[i]));
    for (double v : d.dnvec[i]) m = std::max(m, std::abs(v));
  }
  return m;
}

}  // namespace spindd
