#include "spindd/qsde2.hpp"

#include "spindd/closure.hpp"
#include "spindd/stencil.hpp"

namespace spindd::qsde2 {

using stencil::drift_diffusion_face;

Fluxes flux(const std::vector<double>& n0, const std::vector<Vec3>& nvec, const std::vector<double>& V,
            const ModelParams& params, const Grid1D& grid) {
  for (std::size_t i = 0; i < n0.size(); ++i) {
    if (!(norm(stencil::spin_ratio(n0[i], nvec[i], i)) < 1.0)) {
      throw ValidityError("|n|/n0 >= 1 at node " + std::to_string(i), static_cast<std::ptrdiff_t>(i));
    }
  }
  const double dx = grid.dx();
  const Vec3 e1{1.0, 0.0, 0.0};
  Fluxes out;
  out.J0.resize(grid.num_faces());
  out.Jspin.resize(grid.num_faces());
  for (std::size_t f = 0; f < grid.num_faces(); ++f) {
    PauliCoeffs D;
    D.a0 = drift_diffusion_face(n0[f], n0[f + 1], V[f], V[f + 1], dx, params.flux);
    for (int k = 0; k < 3; ++k) {
      D.avec[k] = drift_diffusion_face(nvec[f][k], nvec[f + 1][k], V[f], V[f + 1], dx, params.flux);
    }
    // eta_kl1 n_l = (n x e1)_k
    D.avec += cross(0.5 * (nvec[f] + nvec[f + 1]), e1);
    const auto J = closure::polarization_sandwich(D, params.zeta, params.omega);
    out.J0[f] = J.a0;
    out.Jspin[f] = J.avec;
  }
  return out;
}

Vec3 transverse_flux(const Vec3& n, const ModelParams& params) {
  PauliCoeffs D;
  D.avec = cross(n, Vec3{0.0, 1.0, 0.0});
  return closure::polarization_sandwich(D, params.zeta, params.omega).avec;
}

std::vector<Vec3> source_G(const std::vector<double>& n0, const std::vector<Vec3>& nvec,
                           const std::vector<double>& V, const ModelParams& params, const Fluxes& fluxes,
                           const Grid1D& grid) {
  (void)V;
  const double dx = grid.dx();
  const std::size_t nn = grid.num_nodes();
  const std::size_t nf = grid.num_faces();
  const Vec3 e1{1.0, 0.0, 0.0};
  const Vec3 e2{0.0, 1.0, 0.0};

  // Divergence-form bracket on faces.
  std::vector<Vec3> W(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const Vec3 b = stencil::face_mobility(n0, nvec, f, params.lambda);
    const Vec3 dn = (1.0 / dx) * (nvec[f + 1] - nvec[f]);
    W[f] = stencil::mobility_bracket(b, dn, 0.5 * (nvec[f] + nvec[f + 1]));
  }

  std::vector<Vec3> G(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    const Vec3& n = nvec[i];
    Vec3 J1;
    Vec3 divW;
    if (i == 0) {
      J1 = fluxes.Jspin[0];
      divW = (1.0 / dx) * (W[1] - W[0]);
    } else if (i + 1 == nn) {
      J1 = fluxes.Jspin[nf - 1];
      divW = (1.0 / dx) * (W[nf - 1] - W[nf - 2]);
    } else {
      J1 = 0.5 * (fluxes.Jspin[i - 1] + fluxes.Jspin[i]);
      divW = (1.0 / dx) * (W[i] - W[i - 1]);
    }
    const Vec3 J2 = transverse_flux(n, params);
    const Vec3 b = stencil::nodal_mobility(n0, nvec, i, params.lambda);
    const Vec3 dn = stencil::nodal_derivative(nvec, i, dx);

    // eta_jks J_ks = sum_s (J_.s x e_s)_j ; eta_jks n_k omega_s = (n x omega)_j
    Vec3 g = cross(J1, e1) + cross(J2, e2) + cross(n, params.omega);
    g += divW;
    g += b[0] * dn;
    g += (-dn[0]) * b;
    G[i] = g;
  }
  return G;
}

TimeDerivative rhs(const State& s, const ModelParams& params, const Grid1D& grid) {
  const auto J = flux(s.n0, s.nvec, s.V, params, grid);
  const auto G = source_G(s.n0, s.nvec, s.V, params, J, grid);
  const double inv = 1.0 / grid.dx();
  TimeDerivative d;
  d.dn0.assign(s.size(), 0.0);
  d.dnvec.assign(s.size(), Vec3{0.0, 0.0, 0.0});
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    d.dn0[i] = (J.J0[i] - J.J0[i - 1]) * inv;
    d.dnvec[i] = inv * (J.Jspin[i] - J.Jspin[i - 1]) + G[i];
  }
  return d;
}

}  // namespace spindd::qsde2
