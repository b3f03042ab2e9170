#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "spindd/diagnostics.hpp"
#include "spindd/scenario.hpp"
#include "spindd/timestepper.hpp"

using namespace spindd;

namespace {

double max_diff(const State& a, const State& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.n0[i] - b.n0[i]));
    m = std::max(m, norm(a.nvec[i] - b.nvec[i]));
  }
  return m;
}

State step(const State& s, double dt, const Device& dev, const StepperConfig& cfg) {
  auto r = cn_step(s, dt, dev, cfg);
  REQUIRE(r.accepted);
  return r.state;
}

// ||one step of dt - two steps of dt/2||
double doubling_error(const State& s, double dt, const Device& dev, const StepperConfig& cfg) {
  const State big = step(s, dt, dev, cfg);
  const State half = step(step(s, 0.5 * dt, dev, cfg), 0.5 * dt, dev, cfg);
  return max_diff(big, half);
}

}  // namespace

TEST_SUITE("timestepper") {

TEST_CASE("config validation") {
  StepperConfig c;
  CHECK_NOTHROW(c.validate());
  c.dt0 = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = StepperConfig{};
  c.rtol = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = StepperConfig{};
  c.newton_max = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("thermal equilibrium is a fixed point") {
  Scenario s = scenario_preset("equilibrium");
  s.spin_init = SpinInit::Zero;
  s.params.flux = FluxScheme::ExponentialFitting;
  const Device dev = make_device(s);
  const State init = make_initial_state(s, dev);
  for (double dt : {1e-6, 1e-3, 0.5}) {
    const State next = step(init, dt, dev, s.stepper);
    CHECK(max_diff(init, next) <= 1e-10);
    CHECK(next.t == doctest::Approx(dt));
  }
}

TEST_CASE("QSDE1 keeps zero spin") {
  Scenario s = scenario_preset("baseline_diode");
  s.params.model = ModelKind::QSDE1;
  const Device dev = make_device(s);
  State st = make_initial_state(s, dev);
  for (int k = 0; k < 20; ++k) st = step(st, 1e-5, dev, s.stepper);
  double m = 0.0;
  for (const Vec3& n : st.nvec) m = std::max(m, norm(n));
  CHECK(m <= 1e-12);
}

TEST_CASE("local error shrinks by about 8 per halving") {
  Scenario s = scenario_preset("equilibrium");
  s.stepper.newton_tol = 1e-13;
  const Device dev = make_device(s);
  const State init = make_initial_state(s, dev);
  // step away from the initial layer so the transient is smooth
  StepperConfig cfg = s.stepper;
  cfg.t_end = 2e-3;
  const auto traj = run_transient(init, dev, cfg, {2e-3});
  const State& st = traj.snapshots.back();
  const double e1 = doubling_error(st, 4e-4, dev, s.stepper);
  const double e2 = doubling_error(st, 2e-4, dev, s.stepper);
  const double e3 = doubling_error(st, 1e-4, dev, s.stepper);
  MESSAGE("doubling errors " << e1 << ' ' << e2 << ' ' << e3);
  CHECK(e1 / e2 == doctest::Approx(8.0).epsilon(0.25));
  CHECK(e2 / e3 == doctest::Approx(8.0).epsilon(0.25));
}

TEST_CASE("trajectory bookkeeping") {
  Scenario s = scenario_preset("equilibrium");
  const Device dev = make_device(s);
  const State init = make_initial_state(s, dev);

  StepperConfig zero = s.stepper;
  zero.t_end = 0.0;
  const auto t0 = run_transient(init, dev, zero, {0.0});
  REQUIRE(t0.snapshots.size() == 1);
  CHECK(t0.records.size() == 1);
  CHECK(max_diff(t0.snapshots[0], init) == 0.0);

  StepperConfig cfg = s.stepper;
  cfg.t_end = 0.05;
  const auto tr = run_transient(init, dev, cfg, {0.05, 0.0, 0.01, 0.01});
  REQUIRE(tr.times.size() == 3);
  CHECK(tr.times[0] == 0.0);
  CHECK(tr.times[1] == 0.01);
  CHECK(tr.times[2] == 0.05);
  for (std::size_t k = 0; k < tr.snapshots.size(); ++k) CHECK(tr.snapshots[k].t == tr.times[k]);
  for (std::size_t k = 1; k < tr.records.size(); ++k) CHECK(tr.records[k].t > tr.records[k - 1].t);
  CHECK(tr.steps.size() + 1 == tr.records.size());
  for (const auto& st : tr.steps) {
    CHECK(st.error <= st.tolerance);
    CHECK(st.spin_error <= st.spin_tolerance);
    CHECK(st.dt > 0.0);
  }

  CHECK_THROWS_AS(run_transient(init, dev, cfg, {0.2}), ConfigError);

  // deterministic
  const auto again = run_transient(init, dev, cfg, {0.05, 0.0, 0.01});
  REQUIRE(again.snapshots.size() == tr.snapshots.size());
  CHECK(max_diff(again.snapshots.back(), tr.snapshots.back()) == 0.0);
  CHECK(again.steps.size() == tr.steps.size());
}

TEST_CASE("tighter tolerance agrees within the looser one") {
  Scenario s = scenario_preset("baseline_diode");
  s.stepper.t_end = 7e-4;
  s.sample_times = {7e-4};
  const Device dev = make_device(s);
  const State init = make_initial_state(s, dev);
  StepperConfig loose = s.stepper;
  loose.rtol = 1e-4;
  loose.atol = 1e-7;
  StepperConfig tight = loose;
  tight.rtol = 1e-5;
  tight.atol = 1e-8;
  const auto a = run_transient(init, dev, loose, {7e-4});
  const auto b = run_transient(init, dev, tight, {7e-4});
  double scale = 0.0;
  for (double v : b.snapshots.back().n0) scale = std::max(scale, std::abs(v));
  // global error accumulates over the steps; allow one decade over the local tolerance
  CHECK(max_diff(a.snapshots.back(), b.snapshots.back()) <= 10.0 * loose.rtol * scale);
}

TEST_CASE("steady state") {
  Scenario s = scenario_preset("equilibrium");
  s.spin_init = SpinInit::Zero;
  s.params.flux = FluxScheme::ExponentialFitting;
  const Device dev = make_device(s);
  const State init = make_initial_state(s, dev);
  const auto r = run_to_steady_state(init, dev, s.stepper, 1e-6);
  CHECK(r.steady);
  CHECK(r.state.t == 0.0);
  CHECK(r.residual <= 1e-6);
  CHECK_THROWS_AS(run_to_steady_state(init, dev, s.stepper, 0.0), ConfigError);
}

TEST_CASE("QSDE1 charge density matches plain drift-diffusion") {
  Scenario s = scenario_preset("baseline_diode");
  s.params.model = ModelKind::QSDE1;
  s.stepper.t_end = 1e-3;
  s.sample_times = {1e-3};
  const Device dev = make_device(s);
  Scenario dd = s;
  dd.params.model = ModelKind::DriftDiffusion;
  const Device ddev = make_device(dd);
  const auto a = run_transient(make_initial_state(s, dev), dev, s.stepper, {1e-3});
  const auto b = run_transient(make_initial_state(dd, ddev), ddev, dd.stepper, {1e-3});
  double m = 0.0;
  for (std::size_t i = 0; i < a.snapshots.back().size(); ++i)
    m = std::max(m, std::abs(a.snapshots.back().n0[i] - b.snapshots.back().n0[i]));
  CHECK(m <= 1e-10);
}

}
