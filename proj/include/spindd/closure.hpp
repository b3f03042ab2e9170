#pragma once

// Pointwise algebra of the kinetic closure: Phi, the spin mobility b, the
// equilibrium Lagrange multipliers and distribution, and the polarization
// sandwich P^{-1/2} a P^{-1/2}.

#include <array>

#include "spindd/core.hpp"

namespace spindd::closure {

/// Below this argument phi() uses its even power series. The closed form
/// loses about eps/y^2 to cancellation, so 0.1 keeps it within 1e-13.
inline constexpr double kPhiSeriesThreshold = 0.1;

/// Phi(y) = y^-2 (1 - 2y / (log(1+y) - log(1-y))), 0 <= y < 1; Phi(0) = 1/3.
double phi(double y);

/// The two branches of phi, exposed for continuity checks.
double phi_series(double y);
double phi_closed_form(double y);

/// b_k = lambda v_k Phi(|v|). Throws DomainError for |v| >= 1.
Vec3 spin_mobility(const Vec3& v, double lambda);

struct EquilibriumMultipliers {
  double A = 0.0;
  Vec3 B{0.0, 0.0, 0.0};
};

/// Leading-order inversion of the moment constraints for (A, B).
EquilibriumMultipliers lagrange_multipliers(double n0, const Vec3& nvec);

/// Momentum 2-vector.
using Momentum = std::array<double, 2>;
/// gradB[k][j] = d_k B_j; row k = 2 (the x3 direction) must be zero.
using GradB = std::array<Vec3, 3>;

PauliCoeffs equilibrium_g0(const Momentum& p, const EquilibriumMultipliers& mult);
PauliCoeffs equilibrium_g1(const Momentum& p, const EquilibriumMultipliers& mult, const GradB& gradB,
                           double gamma);

struct MomentCheck {
  double m0 = 0.0;
  Vec3 mvec{0.0, 0.0, 0.0};
  /// |moments(order) - moments(order + 2)| / |(n0, n)|
  double rel_error_estimate = 0.0;
  /// Set when the requested order is below 10.
  bool low_order_warning = false;
};

/// Integrates g0 over R^2 with tensor Gauss-Hermite quadrature (weight e^{-|p|^2/2}).
MomentCheck moment_check(double n0, const Vec3& nvec, int quad_order = 20);

/// Gauss-Hermite nodes and weights for the weight e^{-x^2} on R.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermite gauss_hermite(int order);

/// Pauli coefficients of P^{-1/2} a P^{-1/2}, P = sigma_0 + zeta omega . sigma.
PauliCoeffs polarization_sandwich(const PauliCoeffs& a, double zeta, const Vec3& omega);

}  // namespace spindd::closure
