#include "spindd/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spindd/banded.hpp"

namespace spindd::poisson {

namespace {

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<double> solve_poisson(const PoissonProblem& problem, const Grid1D& grid) {
  const std::size_t nn = grid.num_nodes();
  if (problem.rhs.size() != nn) throw ConfigError("solve_poisson: rhs size does not match grid");
  if (!(problem.lambda_D2 > 0.0)) throw ConfigError("lambda_D2: must be > 0");
  const std::size_t m = nn - 2;  // interior unknowns
  const double h2 = grid.dx() * grid.dx();
  // Scaled rows: -(V_{i-1} - 2 V_i + V_{i+1}) = h^2/lambda_D2 * rhs_i
  const double s = h2 / problem.lambda_D2;
  std::vector<double> sub(m, -1.0), diag(m, 2.0), sup(m, -1.0), b(m);
  for (std::size_t k = 0; k < m; ++k) b[k] = s * problem.rhs[k + 1];
  b.front() += problem.bc.first;
  b.back() += problem.bc.second;
  const auto x = solve_tridiagonal(sub, diag, sup, b);
  std::vector<double> V(nn);
  V.front() = problem.bc.first;
  V.back() = problem.bc.second;
  std::copy(x.begin(), x.end(), V.begin() + 1);
  return V;
}

std::vector<double> potential_from_density(const std::vector<double>& n0, const std::vector<double>& doping,
                                           double lambda_D2, std::pair<double, double> bc, const Grid1D& grid) {
  PoissonProblem p;
  p.lambda_D2 = lambda_D2;
  p.bc = bc;
  p.rhs.resize(n0.size());
  for (std::size_t i = 0; i < n0.size(); ++i) p.rhs[i] = n0[i] - doping[i];
  return solve_poisson(p, grid);
}

std::vector<double> poisson_residual(const std::vector<double>& V, const PoissonProblem& problem,
                                     const Grid1D& grid) {
  const std::size_t nn = grid.num_nodes();
  const double c = problem.lambda_D2 / (grid.dx() * grid.dx());
  std::vector<double> r(nn, 0.0);
  for (std::size_t i = 1; i + 1 < nn; ++i) {
    r[i] = -c * (V[i + 1] - 2.0 * V[i] + V[i - 1]) - problem.rhs[i];
  }
  return r;
}

EquilibriumPotential solve_equilibrium_potential(const DopingProfile& profile, double lambda_D2,
                                                 const Grid1D& grid, double tol, int max_iter) {
  if (!(lambda_D2 > 0.0)) throw ConfigError("lambda_D2: must be > 0");
  profile.validate();
  const std::size_t nn = grid.num_nodes();
  const std::size_t m = nn - 2;
  const auto C = profile.sample(grid);
  const double c = lambda_D2 / (grid.dx() * grid.dx());

  std::vector<double> V(nn, 0.0);
  for (std::size_t i = 1; i + 1 < nn; ++i) V[i] = -std::log(std::max(C[i], profile.C_min));

  auto residual = [&](const std::vector<double>& v) {
    std::vector<double> r(m);
    for (std::size_t i = 1; i + 1 < nn; ++i) {
      r[i - 1] = -c * (v[i + 1] - 2.0 * v[i] + v[i - 1]) - (std::exp(-v[i]) - C[i]);
    }
    return r;
  };

  EquilibriumPotential out;
  auto r = residual(V);
  double rn = inf_norm(r);
  out.residual_history.push_back(rn);
  for (int it = 0; it < max_iter && rn > tol; ++it) {
    std::vector<double> sub(m, -c), diag(m), sup(m, -c), b(m);
    for (std::size_t k = 0; k < m; ++k) {
      diag[k] = 2.0 * c + std::exp(-V[k + 1]);
      b[k] = -r[k];
    }
    const auto dV = solve_tridiagonal(sub, diag, sup, b);
    // Backtrack until the residual norm decreases.
    double step = 1.0;
    std::vector<double> trial(V);
    double tn = rn;
    std::vector<double> tr;
    for (int h = 0; h <= 30; ++h) {
      for (std::size_t k = 0; k < m; ++k) trial[k + 1] = V[k + 1] + step * dV[k];
      tr = residual(trial);
      tn = inf_norm(tr);
      if (tn < rn) break;
      step *= 0.5;
    }
    if (!(tn < rn)) {
      throw SolverError("equilibrium potential: line search failed to reduce the residual", rn);
    }
    V.swap(trial);
    r.swap(tr);
    rn = tn;
    out.residual_history.push_back(rn);
  }
  if (!(rn <= tol)) {
    std::ostringstream os;
    os << "equilibrium potential: Newton did not converge in " << max_iter << " iterations";
    throw SolverError(os.str(), rn);
  }
  out.V = std::move(V);
  return out;
}

}  // namespace spindd::poisson
