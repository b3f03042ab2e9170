#pragma once

// Derived functionals along a trajectory: entropy, its dissipation, the G
// functional, spin norms, decay fits, bound checks, terminal current and I-V
// sweeps.

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spindd/core.hpp"

namespace spindd {

class Device;
struct Trajectory;
struct StepperConfig;

struct DiagnosticsRecord {
  double t = 0.0;
  double S = 0.0;
  double D = 0.0;
  double l2_spin = 0.0;
  double linf_spin = 0.0;
  double ratio_max = 0.0;
  double current_out = 0.0;
  double reldiff = std::numeric_limits<double>::quiet_NaN();
  double min_n0 = 0.0;
  double max_n0 = 0.0;
  /// max over nodes of -(n0 - C)/lambda_D2, i.e. the discrete V''.
  double sup_laplacian_V = 0.0;
};

namespace diagnostics {

/// S = int( (n+)(log n+ - 1)/2 + (n-)(log n- - 1)/2 + (n0 - C) V - lambda_D2/2 |V'|^2 ),
/// n+- = n0 +- |n|.
double entropy(const State& s, const std::vector<double>& C, double lambda_D2, const Grid1D& grid);

/// Scalar drift-diffusion entropy int( n0 (log n0 - 1) + (n0 - C) V - lambda_D2/2 |V'|^2 ).
double entropy_scalar(const std::vector<double>& n0, const std::vector<double>& V, const std::vector<double>& C,
                      double lambda_D2, const Grid1D& grid);

double entropy_dissipation(const State& s, const Grid1D& grid);

struct GFunctional {
  std::vector<double> integrand;
  double integral = 0.0;
};

/// |u'|^2 + 2 u . curl u + 2 |u|^2 with curl u = (0, -u3', u2').
GFunctional g_functional(const std::vector<Vec3>& u, const Grid1D& grid);

/// Trapezoidal L^p norm of |n|; p = infinity gives the max norm.
double spin_norm(const State& s, const Grid1D& grid, double p);

struct DecayFit {
  double kappa = 0.0;
  double r2 = 0.0;
};

/// Least squares of log(norm) against t; kappa = -slope.
DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& norms);

/// ||n0 - ref||_2 / ||ref||_2 (trapezoidal).
double relative_difference(const std::vector<double>& n0, const std::vector<double>& ref, const Grid1D& grid);

DiagnosticsRecord make_record(const State& s, const Device& device);

struct BoundViolation {
  std::size_t snapshot;
  double t;
  double value;
  double bound;
};

struct BoundReport {
  std::vector<BoundViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// ||n(t)||_inf <= ||n_I||_inf exp(sup(-(n0 - C)/lambda_D2) t) (1 + 1e-6) per snapshot.
BoundReport linf_growth_bound_check(const Trajectory& traj, const Grid1D& grid, double lambda_D2,
                                    const std::vector<double>& C);

/// (M, m): M = max(boundary data, initial n0, C), m = min(boundary data, initial n0).
std::pair<double, double> max_principle_bounds(const State& initial, const Device& device);

/// m e^{-t/lambda_D2} - tol <= n0 <= M + tol at every record.
BoundReport max_principle_check(const Trajectory& traj, double M, double m, double lambda_D2, double tol = 1e-8);

/// Time derivative of S at each interior record by 3-point nonuniform differences.
std::vector<double> entropy_rate(const std::vector<DiagnosticsRecord>& records);

double terminal_current(const State& s, const Device& device);

struct IvRow {
  double V_A = 0.0;
  ModelKind model = ModelKind::QSDE1;
  double current = std::numeric_limits<double>::quiet_NaN();
  bool steady = false;
  std::string error;  // empty on success
};

/// run_to_steady_state + terminal_current per (bias, model). Runs points on
/// up to `threads` threads (0: SPIN_DD_THREADS or hardware concurrency).
std::vector<IvRow> iv_sweep(const std::vector<double>& biases, const Device& base, const StepperConfig& config,
                            const std::vector<ModelKind>& models, double stall_tol, unsigned threads = 0);

}  // namespace diagnostics
}  // namespace spindd
