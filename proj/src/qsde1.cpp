#include "spindd/qsde1.hpp"

#include "spindd/stencil.hpp"

namespace spindd::qsde1 {

using stencil::drift_diffusion_face;

std::vector<double> flux_J0(const std::vector<double>& n0, const std::vector<double>& V, const Grid1D& grid,
                            FluxScheme scheme) {
  const double dx = grid.dx();
  std::vector<double> J(grid.num_faces());
  for (std::size_t f = 0; f < J.size(); ++f) {
    J[f] = drift_diffusion_face(n0[f], n0[f + 1], V[f], V[f + 1], dx, scheme);
  }
  return J;
}

std::vector<Vec3> flux_Jspin(const std::vector<double>& n0, const std::vector<Vec3>& nvec,
                             const std::vector<double>& V, double lambda, const Grid1D& grid, FluxScheme scheme) {
  const double dx = grid.dx();
  const Vec3 e1{1.0, 0.0, 0.0};
  std::vector<Vec3> J(grid.num_faces());
  for (std::size_t f = 0; f < J.size(); ++f) {
    const Vec3& nL = nvec[f];
    const Vec3& nR = nvec[f + 1];
    const Vec3 dn = (1.0 / dx) * (nR - nL);
    const Vec3 nbar = 0.5 * (nL + nR);
    const Vec3 b = stencil::face_mobility(n0, nvec, f, lambda);

    Vec3 j;
    for (int c = 0; c < 3; ++c) j[c] = drift_diffusion_face(nL[c], nR[c], V[f], V[f + 1], dx, scheme);
    j += (-2.0) * cross(e1, nbar);
    j += stencil::mobility_bracket(b, dn, nbar);
    J[f] = j;
  }
  return J;
}

std::vector<Vec3> source_F(const std::vector<double>& n0, const std::vector<Vec3>& nvec,
                           const std::vector<double>& V, double lambda, const Grid1D& grid) {
  const double dx = grid.dx();
  std::vector<Vec3> F(grid.num_nodes());
  for (std::size_t i = 0; i < F.size(); ++i) {
    const Vec3& n = nvec[i];
    const double dV = stencil::nodal_derivative(V, i, dx);
    const Vec3 dn = stencil::nodal_derivative(nvec, i, dx);
    const Vec3 b = stencil::nodal_mobility(n0, nvec, i, lambda);
    // eta_jkl n_k d_l V = (n x grad V)_j, grad V = (V', 0, 0)
    Vec3 f = cross(n, Vec3{dV, 0.0, 0.0});
    f += (-2.0) * n;
    f += b[0] * dn;
    f += (-dn[0]) * b;
    F[i] = f;
  }
  return F;
}

std::vector<double> rhs_charge(const std::vector<double>& n0, const std::vector<double>& V, const Grid1D& grid,
                               FluxScheme scheme) {
  const auto J0 = flux_J0(n0, V, grid, scheme);
  const double inv = 1.0 / grid.dx();
  std::vector<double> d(n0.size(), 0.0);
  for (std::size_t i = 1; i + 1 < d.size(); ++i) d[i] = (J0[i] - J0[i - 1]) * inv;
  return d;
}

TimeDerivative rhs(const State& s, const ModelParams& params, const Grid1D& grid) {
  TimeDerivative d;
  d.dn0 = rhs_charge(s.n0, s.V, grid, params.flux);
  const auto J = flux_Jspin(s.n0, s.nvec, s.V, params.lambda, grid, params.flux);
  const auto F = source_F(s.n0, s.nvec, s.V, params.lambda, grid);
  const double inv = 1.0 / grid.dx();
  d.dnvec.assign(s.size(), Vec3{0.0, 0.0, 0.0});
  for (std::size_t i = 1; i + 1 < s.size(); ++i) d.dnvec[i] = inv * (J[i] - J[i - 1]) + F[i];
  return d;
}

}  // namespace spindd::qsde1
