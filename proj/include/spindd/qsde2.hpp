#pragma once

// Second spin drift-diffusion model, fully coupled through the polarization
// matrix P = sigma_0 + zeta omega . sigma. With the x-direction brackets
//
//   D0 = d_x n0 + n0 d_x V,   D_k = d_x n_k + n_k d_x V + eta_kl1 n_l,
//
// the fluxes (J0, J_j1) are the Pauli coefficients of P^{-1/2} (D0, D) P^{-1/2}
// and the spin source is
//
//   G_j = eta_jks (J_ks + n_k omega_s) + d_x (b_k (eta_jkl d_x n_l + delta_jk n_1 - delta_j1 n_k))
//         + b_1 d_x n_j - b_j d_x n_1,
//
// where the s = 2 flux entering eta_jks J_ks keeps only its algebraic part.

#include <vector>

#include "spindd/core.hpp"

namespace spindd::qsde2 {

struct Fluxes {
  std::vector<double> J0;     // faces
  std::vector<Vec3> Jspin;    // faces, s = 1
};

Fluxes flux(const std::vector<double>& n0, const std::vector<Vec3>& nvec, const std::vector<double>& V,
            const ModelParams& params, const Grid1D& grid);

/// The s = 2 spin flux at a node (only the eta_kl2 n_l bracket survives in 1D).
Vec3 transverse_flux(const Vec3& n, const ModelParams& params);

std::vector<Vec3> source_G(const std::vector<double>& n0, const std::vector<Vec3>& nvec,
                           const std::vector<double>& V, const ModelParams& params, const Fluxes& fluxes,
                           const Grid1D& grid);

TimeDerivative rhs(const State& s, const ModelParams& params, const Grid1D& grid);

}  // namespace spindd::qsde2
