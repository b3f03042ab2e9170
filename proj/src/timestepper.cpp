#include "spindd/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "spindd/banded.hpp"

namespace spindd {

void StepperConfig::validate() const {
  if (!(dt0 > 0.0)) throw ConfigError("stepper.dt0 must be > 0");
  if (!(rtol > 0.0)) throw ConfigError("stepper.rtol must be > 0");
  if (!(atol > 0.0)) throw ConfigError("stepper.atol must be > 0");
  if (!(newton_tol > 0.0)) throw ConfigError("stepper.newton_tol must be > 0");
  if (newton_max < 1) throw ConfigError("stepper.newton_max must be >= 1");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("stepper.t_end must be finite and >= 0");
  if (!(dt_max > 0.0)) throw ConfigError("stepper.dt_max must be > 0");
}

void Trajectory::attach_reldiff(const std::vector<double>& ref, const Grid1D& grid) {
  for (std::size_t k = 0; k < records.size(); ++k) {
    records[k].reldiff = diagnostics::relative_difference(record_n0[k], ref, grid);
  }
}

namespace {

constexpr double kDtFloor = 1e-14;

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Interior unknowns, per node: n0, [n1 n2 n3,] V.
class CnSystem {
 public:
  CnSystem(const Device& device, const State& old, const TimeDerivative& Rold, double dt)
      : device_(device), old_(old), Rold_(Rold), half_dt_(0.5 * dt), dt_(dt) {
    dc_ = device.density_components();
    m_ = dc_ + 1;
    interior_ = old.size() - 2;
    const double dx = device.grid().dx();
    poisson_scale_ = dx * dx / device.params().lambda_D2;
    xold_ = pack(old);
  }

  std::size_t size() const noexcept { return interior_ * m_; }
  std::size_t block() const noexcept { return m_; }
  std::size_t nodes() const noexcept { return interior_; }
  const std::vector<double>& x_old() const noexcept { return xold_; }

  std::vector<double> pack(const State& s) const {
    std::vector<double> x(size());
    for (std::size_t k = 0; k < interior_; ++k) {
      const std::size_t i = k + 1;
      double* row = &x[k * m_];
      row[0] = s.n0[i];
      for (std::size_t c = 1; c < dc_; ++c) row[c] = s.nvec[i][c - 1];
      row[dc_] = s.V[i];
    }
    return x;
  }

  State unpack(const std::vector<double>& x) const {
    State s = old_;
    s.t = old_.t + dt_;
    for (std::size_t k = 0; k < interior_; ++k) {
      const std::size_t i = k + 1;
      const double* row = &x[k * m_];
      s.n0[i] = row[0];
      for (std::size_t c = 1; c < dc_; ++c) s.nvec[i][c - 1] = row[c];
      s.V[i] = row[dc_];
    }
    return s;
  }

  // Throws ValidityError when x leaves the admissible set.
  void residual(const std::vector<double>& x, std::vector<double>& F) const {
    const State s = unpack(x);
    const TimeDerivative R = evaluate_rhs(s, device_);
    const auto& C = device_.C();
    F.resize(size());
    for (std::size_t k = 0; k < interior_; ++k) {
      const std::size_t i = k + 1;
      const std::size_t b = k * m_;
      F[b] = x[b] - xold_[b] - half_dt_ * (R.dn0[i] + Rold_.dn0[i]);
      for (std::size_t c = 1; c < dc_; ++c) {
        F[b + c] = x[b + c] - xold_[b + c] - half_dt_ * (R.dnvec[i][c - 1] + Rold_.dnvec[i][c - 1]);
      }
      F[b + dc_] = -(s.V[i + 1] - 2.0 * s.V[i] + s.V[i - 1]) - poisson_scale_ * (s.n0[i] - C[i]);
    }
    for (double f : F) {
      if (!std::isfinite(f)) throw ValidityError("non-finite residual", -1);
    }
  }

  // Forward-difference Jacobian; columns sharing a color are three nodes apart.
  void jacobian(const std::vector<double>& x, const std::vector<double>& F, BandMatrix& J) const {
    J.set_zero();
    std::vector<double> xp;
    std::vector<double> Fp;
    std::vector<double> h(interior_);
    for (std::size_t color = 0; color < 3; ++color) {
      for (std::size_t c = 0; c < m_; ++c) {
        xp = x;
        for (std::size_t k = color; k < interior_; k += 3) {
          const std::size_t j = k * m_ + c;
          const double step = 1.4901161193847656e-08 * std::max(std::abs(x[j]), 1.0);
          xp[j] = x[j] + step;
          h[k] = xp[j] - x[j];
        }
        residual(xp, Fp);
        for (std::size_t k = color; k < interior_; k += 3) {
          const std::size_t j = k * m_ + c;
          const std::size_t r0 = k == 0 ? 0 : k - 1;
          const std::size_t r1 = std::min(k + 1, interior_ - 1);
          for (std::size_t r = r0; r <= r1; ++r) {
            for (std::size_t q = 0; q < m_; ++q) {
              const std::size_t row = r * m_ + q;
              J(row, j) = (Fp[row] - F[row]) / h[k];
            }
          }
        }
      }
    }
  }

 private:
  const Device& device_;
  const State& old_;
  const TimeDerivative& Rold_;
  double half_dt_;
  double dt_;
  std::size_t dc_ = 0;
  std::size_t m_ = 0;
  std::size_t interior_ = 0;
  double poisson_scale_ = 0.0;
  std::vector<double> xold_;
};

StepOutcome solve_step(const State& s, const TimeDerivative& Rs, double dt, const Device& device,
                       const StepperConfig& config) {
  StepOutcome out;
  CnSystem sys(device, s, Rs, dt);
  const std::size_t n = sys.size();
  const std::size_t bw = 2 * sys.block() - 1;
  BandMatrix J(n, bw, bw);

  std::vector<double> x = sys.x_old();
  std::vector<double> F;
  std::vector<double> Ftrial;
  try {
    sys.residual(x, F);
  } catch (const ValidityError& e) {
    out.reason = e.what();
    return out;
  }
  double res = inf_norm(F);

  // At least one update: a residual that starts below tolerance would
  // otherwise freeze fields far smaller than newton_tol.
  int it = 0;
  while (it == 0 || res > config.newton_tol) {
    if (it == config.newton_max) {
      out.reason = "Newton did not converge";
      out.residual = res;
      return out;
    }
    ++it;
    std::vector<double> delta(F);
    try {
      sys.jacobian(x, F, J);
      J.factorize();
    } catch (const std::exception& e) {
      out.reason = e.what();
      out.residual = res;
      return out;
    }
    for (double& d : delta) d = -d;
    J.solve(delta);

    // Backtracking on the residual norm.
    double damping = 1.0;
    bool moved = false;
    std::vector<double> xt(n);
    for (int k = 0; k < 12; ++k, damping *= 0.5) {
      for (std::size_t j = 0; j < n; ++j) xt[j] = x[j] + damping * delta[j];
      try {
        sys.residual(xt, Ftrial);
      } catch (const ValidityError&) {
        continue;
      }
      const double rt = inf_norm(Ftrial);
      if (rt <= (1.0 - 1e-4 * damping) * res || rt <= config.newton_tol) {
        x.swap(xt);
        F.swap(Ftrial);
        res = rt;
        moved = true;
        break;
      }
    }
    if (!moved) {
      out.reason = "Newton line search failed";
      out.residual = res;
      return out;
    }
  }

  out.state = sys.unpack(x);
  out.newton_iterations = it;
  out.residual = res;
  try {
    check_state(out.state);
  } catch (const ValidityError& e) {
    out.reason = e.what();
    return out;
  }
  out.accepted = true;
  return out;
}

// Infinity norms over interior nodes, charge and spin kept apart.
struct GroupNorms {
  double charge = 0.0;
  double spin = 0.0;
};

GroupNorms group_norms(const State& s) {
  GroupNorms g;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    g.charge = std::max(g.charge, std::abs(s.n0[i]));
    for (double v : s.nvec[i]) g.spin = std::max(g.spin, std::abs(v));
  }
  return g;
}

GroupNorms group_diff(const State& a, const State& b) {
  GroupNorms g;
  for (std::size_t i = 1; i + 1 < a.size(); ++i) {
    g.charge = std::max(g.charge, std::abs(a.n0[i] - b.n0[i]));
    for (int c = 0; c < 3; ++c) g.spin = std::max(g.spin, std::abs(a.nvec[i][c] - b.nvec[i][c]));
  }
  return g;
}

// Shared driver. `on_accept` sees every accepted state and returns true to stop.
struct Integrator {
  const Device& device;
  const StepperConfig& config;
  State u;
  TimeDerivative Ru;
  double dt;
  int rejected = 0;
  double last_residual = 0.0;

  Integrator(const Device& d, const StepperConfig& c, const State& initial)
      : device(d), config(c), u(initial), Ru(evaluate_rhs(initial, d)), dt(std::min(c.dt0, c.dt_max)) {}

  // Advances to `target`, calling on_accept after each accepted step.
  // Returns false if on_accept asked to stop early.
  bool advance_to(double target, const std::function<bool(const StepStats&)>& on_accept) {
    while (u.t < target) {
      const double remaining = target - u.t;
      double h = std::min(dt, config.dt_max);
      bool landing = false;
      if (remaining <= h * (1.0 + 1e-8)) {
        h = remaining;
        landing = true;
      }

      StepStats st;
      st.dt = h;
      bool ok = false;
      State next;
      double factor = 1.5;
      const StepOutcome full = solve_step(u, Ru, h, device, config);
      last_residual = full.residual;
      if (full.accepted && !config.adaptive) {
        ok = true;
        next = full.state;
        st.newton_iterations = full.newton_iterations;
      } else if (full.accepted) {
        const StepOutcome half1 = solve_step(u, Ru, 0.5 * h, device, config);
        if (half1.accepted) {
          const TimeDerivative Rh = evaluate_rhs(half1.state, device);
          const StepOutcome half2 = solve_step(half1.state, Rh, 0.5 * h, device, config);
          if (half2.accepted) {
            const GroupNorms err = group_diff(half2.state, full.state);
            const GroupNorms size = group_norms(half2.state);
            st.error = err.charge / 3.0;
            st.tolerance = std::max(config.rtol * size.charge, config.atol);
            st.spin_error = err.spin / 3.0;
            st.spin_tolerance = std::max(config.rtol * size.spin, config.atol);
            st.newton_iterations = full.newton_iterations + half1.newton_iterations + half2.newton_iterations;
            const double ratio = std::max(st.error / st.tolerance, st.spin_error / st.spin_tolerance);
            if (ratio <= 1.0) {
              ok = true;
              next = half2.state;
              if (ratio > 0.0) factor = std::clamp(0.9 * std::cbrt(1.0 / ratio), 0.2, 1.5);
            }
          }
        }
      }

      if (!ok) {
        ++rejected;
        dt = 0.5 * h;
        if (dt < kDtFloor) {
          throw StiffFailure("time step fell below 1e-14 at t = " + std::to_string(u.t), last_residual, u);
        }
        continue;
      }

      next.t = landing ? target : u.t + h;
      u = std::move(next);
      Ru = evaluate_rhs(u, device);
      st.t = u.t;
      if (config.adaptive) {
        const double grown = h * factor;
        dt = (landing && h < dt) ? (factor >= 1.0 ? dt : std::min(dt, grown)) : grown;
      }
      if (on_accept(st)) return false;
    }
    return true;
  }
};

}  // namespace

StepOutcome cn_step(const State& s, double dt, const Device& device, const StepperConfig& config) {
  TimeDerivative Rs;
  try {
    Rs = evaluate_rhs(s, device);
  } catch (const ValidityError& e) {
    StepOutcome out;
    out.reason = e.what();
    return out;
  }
  return solve_step(s, Rs, dt, device, config);
}

Trajectory run_transient(const State& initial, const Device& device, const StepperConfig& config,
                         std::vector<double> sample_times) {
  config.validate();
  check_state(initial);
  std::sort(sample_times.begin(), sample_times.end());
  sample_times.erase(std::unique(sample_times.begin(), sample_times.end()), sample_times.end());
  for (double t : sample_times) {
    if (t < initial.t || t > config.t_end) throw ConfigError("sample time outside [t0, t_end]");
  }

  Trajectory traj;
  auto record = [&](const State& s) {
    traj.records.push_back(diagnostics::make_record(s, device));
    traj.record_n0.push_back(s.n0);
  };
  std::size_t next_sample = 0;
  auto snapshot_if_due = [&](const State& s) {
    if (next_sample < sample_times.size() && s.t == sample_times[next_sample]) {
      traj.times.push_back(s.t);
      traj.snapshots.push_back(s);
      ++next_sample;
    }
  };

  record(initial);
  snapshot_if_due(initial);

  Integrator integ(device, config, initial);
  auto on_accept = [&](const StepStats& st) {
    traj.steps.push_back(st);
    record(integ.u);
    return false;
  };
  while (integ.u.t < config.t_end) {
    const double target = next_sample < sample_times.size() ? sample_times[next_sample] : config.t_end;
    integ.advance_to(target, on_accept);
    snapshot_if_due(integ.u);
  }
  traj.rejected_steps = integ.rejected;
  return traj;
}

SteadyResult run_to_steady_state(const State& initial, const Device& device, const StepperConfig& config,
                                 double stall_tol) {
  config.validate();
  if (!(stall_tol > 0.0)) throw ConfigError("stall_tol must be > 0");
  check_state(initial);
  Integrator integ(device, config, initial);
  SteadyResult out;
  out.residual = rhs_inf_norm(integ.Ru);
  if (out.residual > stall_tol) {
    integ.advance_to(config.t_end, [&](const StepStats&) {
      out.residual = rhs_inf_norm(integ.Ru);
      return out.residual <= stall_tol;
    });
  }
  out.state = integ.u;
  out.steady = out.residual <= stall_tol;
  return out;
}

}  // namespace spindd
