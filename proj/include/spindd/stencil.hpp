#pragma once

// Node/face transfer rules shared by the model assemblers.

#include <cmath>
#include <vector>

#include "spindd/core.hpp"

namespace spindd::stencil {

/// Bernoulli function x/(e^x - 1), B(0) = 1.
inline double bernoulli(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - 0.5 * x + x * x / 12.0;
  return x / std::expm1(x);
}

/// Face value of u' + u V' between nodes L and R.
inline double drift_diffusion_face(double uL, double uR, double VL, double VR, double dx, FluxScheme scheme) {
  const double dV = VR - VL;
  if (scheme == FluxScheme::ExponentialFitting) {
    return (bernoulli(-dV) * uR - bernoulli(dV) * uL) / dx;
  }
  return (uR - uL) / dx + 0.5 * (uL + uR) * dV / dx;
}

/// Central difference at interior nodes, one-sided at the two ends.
template <class T>
T nodal_derivative(const std::vector<T>& u, std::size_t i, double dx) {
  const std::size_t n = u.size();
  if (i == 0) return (1.0 / dx) * (u[1] - u[0]);
  if (i + 1 == n) return (1.0 / dx) * (u[n - 1] - u[n - 2]);
  return (0.5 / dx) * (u[i + 1] - u[i - 1]);
}

/// n/n0 at a node; throws ValidityError when n0 <= 0.
inline Vec3 spin_ratio(double n0, const Vec3& n, std::size_t node) {
  if (!(n0 > 0.0)) throw ValidityError("n0 <= 0 at node " + std::to_string(node), static_cast<std::ptrdiff_t>(node));
  return (1.0 / n0) * n;
}

/// b evaluated at a node; throws ValidityError when |n|/n0 >= 1.
Vec3 nodal_mobility(const std::vector<double>& n0, const std::vector<Vec3>& nvec, std::size_t i, double lambda);

/// b evaluated from the face mean of n/n0 between nodes i and i+1.
Vec3 face_mobility(const std::vector<double>& n0, const std::vector<Vec3>& nvec, std::size_t face, double lambda);

/// b_k (eta_{jkl} d n_l + delta_{jk} n_1 - delta_{j1} n_k): the b-dependent part of the
/// spin flux, given b, the gradient dn and the value n (x-direction only).
inline Vec3 mobility_bracket(const Vec3& b, const Vec3& dn, const Vec3& n) {
  Vec3 w = cross(b, dn) + n[0] * b;
  w[0] -= dot(b, n);
  return w;
}

}  // namespace spindd::stencil
