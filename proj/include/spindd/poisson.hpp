#pragma once

#include <utility>
#include <vector>

#include "spindd/core.hpp"

namespace spindd::poisson {

/// -lambda_D2 V'' = rhs on (0,1) with V(0), V(1) prescribed.
struct PoissonProblem {
  double lambda_D2 = 1e-3;
  std::vector<double> rhs;  // nodal n0 - C; boundary entries ignored
  std::pair<double, double> bc{0.0, 0.0};
};

std::vector<double> solve_poisson(const PoissonProblem& problem, const Grid1D& grid);

/// Convenience: V from n0, doping and Dirichlet data.
std::vector<double> potential_from_density(const std::vector<double>& n0, const std::vector<double>& doping,
                                           double lambda_D2, std::pair<double, double> bc, const Grid1D& grid);

/// Interior residual -lambda_D2 (V_{i+1} - 2V_i + V_{i-1})/dx^2 - rhs_i (boundary entries 0).
std::vector<double> poisson_residual(const std::vector<double>& V, const PoissonProblem& problem,
                                     const Grid1D& grid);

struct EquilibriumPotential {
  std::vector<double> V;
  /// Infinity norm of the discrete residual after each Newton iteration (entry 0: initial guess).
  std::vector<double> residual_history;
};

/// Damped Newton for -lambda_D2 V'' = exp(-V) - C(x), V(0) = V(1) = 0.
EquilibriumPotential solve_equilibrium_potential(const DopingProfile& profile, double lambda_D2,
                                                 const Grid1D& grid, double tol = 1e-10, int max_iter = 50);

}  // namespace spindd::poisson
