#pragma once

// Crank-Nicolson in time with V kept as a coupled per-node unknown, so every
// Newton iterate solves the discrete Poisson equation together with the
// density update. Adaptive step size by step doubling.

#include <limits>
#include <string>
#include <vector>

#include "spindd/core.hpp"
#include "spindd/diagnostics.hpp"
#include "spindd/model.hpp"

namespace spindd {

struct StepperConfig {
  double dt0 = 1e-6;
  double rtol = 1e-6;
  double atol = 1e-9;
  double newton_tol = 1e-10;
  int newton_max = 25;
  double t_end = 1.0;
  bool adaptive = true;
  double dt_max = std::numeric_limits<double>::infinity();

  void validate() const;
  bool operator==(const StepperConfig&) const = default;
};

struct StepStats {
  double t = 0.0;   // time reached
  double dt = 0.0;
  // Step-doubling estimates, charge (n0) and spin (n) separately.
  double error = 0.0;
  double tolerance = 0.0;
  double spin_error = 0.0;
  double spin_tolerance = 0.0;
  int newton_iterations = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> snapshots;
  /// One record per accepted step, the first one at the initial time.
  std::vector<DiagnosticsRecord> records;
  /// Step-control data per accepted step (records.size() - 1 entries).
  std::vector<StepStats> steps;
  /// n0 after each record, used for the relative difference to a reference.
  std::vector<std::vector<double>> record_n0;
  int rejected_steps = 0;

  /// Fills records[k].reldiff against a reference density.
  void attach_reldiff(const std::vector<double>& ref, const Grid1D& grid);
};

/// dt fell below the floor; carries the last accepted state.
class StiffFailure : public SolverError {
 public:
  StiffFailure(const std::string& what, double last_residual, State last)
      : SolverError(what, last_residual), last_state_(std::move(last)) {}
  const State& last_state() const noexcept { return last_state_; }

 private:
  State last_state_;
};

struct StepOutcome {
  bool accepted = false;
  State state;
  int newton_iterations = 0;
  double residual = 0.0;
  std::string reason;  // why the step was rejected
};

/// One CN step. Never throws for Newton failure or invalid iterates; those
/// come back with accepted = false.
StepOutcome cn_step(const State& s, double dt, const Device& device, const StepperConfig& config);

Trajectory run_transient(const State& initial, const Device& device, const StepperConfig& config,
                         std::vector<double> sample_times);

struct SteadyResult {
  State state;
  bool steady = false;
  double residual = 0.0;  // ||d state/dt||_inf at the returned state
};

SteadyResult run_to_steady_state(const State& initial, const Device& device, const StepperConfig& config,
                                 double stall_tol);

}  // namespace spindd
