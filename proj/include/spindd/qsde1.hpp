#pragma once

// First spin drift-diffusion model: the charge density evolves as standard
// drift-diffusion, the spin vector follows with a mobility b[n/n0] that
// couples its components.
//
//   d_t n0 = d_x J0,            J0   = d_x n0 + n0 d_x V
//   d_t n_j = d_x J_j1 + F_j,   J_j1 = (delta_jl + b_k eta_jkl) d_x n_l + n_j d_x V
//                                      - 2 eta_j1l n_l + b_k (delta_jk n_1 - delta_j1 n_k)
//                               F_j  = eta_jkl n_k d_l V - 2 n_j + b_1 d_x n_j - b_j d_x n_1
//
// Fluxes live on faces (index f between nodes f and f+1), sources on nodes.

#include <vector>

#include "spindd/core.hpp"

namespace spindd::qsde1 {

struct Fluxes {
  std::vector<double> J0;
  std::vector<Vec3> Jspin;
};

std::vector<double> flux_J0(const std::vector<double>& n0, const std::vector<double>& V, const Grid1D& grid,
                            FluxScheme scheme = FluxScheme::Central);

std::vector<Vec3> flux_Jspin(const std::vector<double>& n0, const std::vector<Vec3>& nvec,
                             const std::vector<double>& V, double lambda, const Grid1D& grid,
                             FluxScheme scheme = FluxScheme::Central);

std::vector<Vec3> source_F(const std::vector<double>& n0, const std::vector<Vec3>& nvec,
                           const std::vector<double>& V, double lambda, const Grid1D& grid);

/// Semidiscrete right-hand side. V must already be consistent with n0.
TimeDerivative rhs(const State& s, const ModelParams& params, const Grid1D& grid);

/// Standard drift-diffusion right-hand side (charge equation only).
std::vector<double> rhs_charge(const std::vector<double>& n0, const std::vector<double>& V, const Grid1D& grid,
                               FluxScheme scheme = FluxScheme::Central);

}  // namespace spindd::qsde1
