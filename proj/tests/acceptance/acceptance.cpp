// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run criteria 1-12
//   acceptance 4 7        run a subset
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "../oracles.hpp"
#include "spindd/closure.hpp"
#include "spindd/diagnostics.hpp"
#include "spindd/poisson.hpp"
#include "spindd/qsde1.hpp"
#include "spindd/qsde2.hpp"
#include "spindd/scenario.hpp"
#include "spindd/timestepper.hpp"

using namespace spindd;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Report {
 public:
  void require(bool ok, const std::string& what) {
    out_.pass = out_.pass && ok;
    if (!out_.detail.empty()) out_.detail += "; ";
    out_.detail += (ok ? "" : "[x] ") + what;
  }
  Outcome done() const { return out_; }

 private:
  Outcome out_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Trajectory run_scenario(const Scenario& s, const std::vector<double>& samples) {
  const Device dev = make_device(s);
  return run_transient(make_initial_state(s, dev), dev, s.stepper, samples);
}

std::vector<double> uniform_samples(double step, double stop) {
  std::vector<double> t;
  for (int k = 0; k * step <= stop + 1e-12; ++k) t.push_back(k * step);
  return t;
}

// ---------------------------------------------------------------------------

Outcome closure_algebra() {
  Report r;
  const double e0 = std::abs(closure::phi(0.0) - oracle::phi(0.0));
  r.require(e0 <= 1e-12 && std::abs(oracle::phi(0.0) - 1.0 / 3.0) <= 1e-15, "|phi(0)-1/3| = " + fmt(e0));

  int drops = 0;
  double prev = closure::phi(0.0);
  for (int i = 1; i < 1000; ++i) {
    const double v = closure::phi(0.999 * i / 999.0);
    if (!(v > prev)) ++drops;
    prev = v;
  }
  r.require(drops == 0, std::to_string(drops) + " non-increasing steps of phi on 1000 samples");

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double lambda = 1.0;
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Vec3 v = std::cbrt(U(rng)) * 0.999999 * oracle::random_unit(rng);
    const Vec3 b = closure::spin_mobility(v, lambda);
    for (int k = 0; k < 3; ++k) {
      // b_k carries the sign of v_k; its magnitude lies in [0, lambda)
      if (!(std::abs(b[k]) < lambda) || b[k] * v[k] < 0.0) ++bad;
      worst = std::max(worst, std::abs(b[k]));
    }
  }
  r.require(bad == 0, "0 <= |b_k| < lambda on 1e4 samples (max |b_k| = " + fmt(worst) + ")");
  return r.done();
}

Outcome polarization_sandwich() {
  Report r;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0, worst_imag = 0.0, worst_inv = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double zeta = 0.99 * (0.5 * U(rng) + 0.5);
    const Vec3 w = oracle::random_unit(rng);
    const PauliCoeffs a{U(rng), {U(rng), U(rng), U(rng)}};
    const auto got = closure::polarization_sandwich(a, zeta, w);
    const auto ref = oracle::sandwich(a.a0, a.avec, zeta, w);
    worst = std::max(worst, std::abs(got.a0 - ref[0].real()));
    for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(got.avec[k] - ref[k + 1].real()));
    for (int k = 0; k < 4; ++k) worst_imag = std::max(worst_imag, std::abs(ref[k].imag()));

    // P^{-1/2} sigma_0 P^{-1/2} against P^{-1} from the adjugate
    const auto P = oracle::from_pauli(1.0, zeta * w);
    const oracle::cplx det = P[0][0] * P[1][1] - P[0][1] * P[1][0];
    oracle::Mat2 Pinv{{{P[1][1] / det, -P[0][1] / det}, {-P[1][0] / det, P[0][0] / det}}};
    const auto inv = oracle::to_pauli(Pinv);
    const auto s0 = closure::polarization_sandwich(PauliCoeffs{1.0, {0.0, 0.0, 0.0}}, zeta, w);
    worst_inv = std::max(worst_inv, std::abs(s0.a0 - inv[0].real()));
    for (int k = 0; k < 3; ++k) worst_inv = std::max(worst_inv, std::abs(s0.avec[k] - inv[k + 1].real()));
  }
  r.require(worst <= 1e-12, "max deviation from the 2x2 matrix oracle " + fmt(worst));
  r.require(worst_imag <= 1e-12, "oracle imaginary parts " + fmt(worst_imag));
  r.require(worst_inv <= 1e-12, "P^-1/2 sigma_0 P^-1/2 vs P^-1 " + fmt(worst_inv));
  return r.done();
}

Outcome moment_closure() {
  Report r;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double n0 = 0.05 + 5.0 * U(rng);
    const Vec3 n = (0.999 * U(rng) * n0) * oracle::random_unit(rng);
    const auto m = closure::moment_check(n0, n, 20);
    const double err = std::hypot(m.m0 - n0, norm(m.mvec - n)) / std::hypot(n0, norm(n));
    worst = std::max(worst, err);
  }
  r.require(worst <= 1e-8, "max relative moment error at order 20: " + fmt(worst));
  return r.done();
}

Outcome poisson_solver() {
  Report r;
  const double pi = std::numbers::pi;
  std::vector<double> err;
  for (int N : {50, 100, 200}) {
    const Grid1D g(N);
    poisson::PoissonProblem p{1e-3, std::vector<double>(g.num_nodes()), {0.0, 0.0}};
    for (std::size_t i = 0; i < p.rhs.size(); ++i) p.rhs[i] = 1e-3 * pi * pi * std::sin(pi * g.node(i));
    const auto V = poisson::solve_poisson(p, g);
    double e = 0.0;
    for (std::size_t i = 0; i < V.size(); ++i) e = std::max(e, std::abs(V[i] - std::sin(pi * g.node(i))));
    err.push_back(e);
  }
  const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
  r.require(o1 >= 1.9 && o1 <= 2.1 && o2 >= 1.9 && o2 <= 2.1, "observed orders " + fmt(o1) + ", " + fmt(o2));

  const auto eq = poisson::solve_equilibrium_potential(DopingProfile{1.0, 0.2}, 1e-3, Grid1D(100));
  double vmax = 0.0;
  for (double v : eq.V) vmax = std::max(vmax, std::abs(v));
  r.require(vmax <= 1e-12, "||V_eq||_inf for C = 1: " + fmt(vmax));
  return r.done();
}

Outcome assembly_oracles() {
  Report r;
  const Grid1D g(50);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double w1 = 0.0, w2 = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto f = oracle::random_fields(rng, g);
    const double lambda = 0.2 + 1.5 * U(rng);
    const auto J = qsde1::flux_Jspin(f.n0, f.n, f.V, lambda, g);
    const auto F = qsde1::source_F(f.n0, f.n, f.V, lambda, g);
    const auto Jo = oracle::qsde1_Jspin(f, lambda, g);
    const auto Fo = oracle::qsde1_F(f, lambda, g);
    for (std::size_t k = 0; k < J.size(); ++k) w1 = std::max(w1, norm(J[k] - Jo[k]));
    for (std::size_t i = 0; i < F.size(); ++i) w1 = std::max(w1, norm(F[i] - Fo[i]));

    ModelParams p;
    p.lambda = lambda;
    p.zeta = 0.98 * U(rng);
    p.omega = oracle::random_unit(rng);
    const auto J2 = qsde2::flux(f.n0, f.n, f.V, p, g);
    const auto G2 = qsde2::source_G(f.n0, f.n, f.V, p, J2, g);
    const auto o = oracle::qsde2(f, {p.lambda, p.zeta, p.omega}, g);
    for (std::size_t k = 0; k < J2.J0.size(); ++k) {
      w2 = std::max(w2, std::abs(J2.J0[k] - o.J0[k]));
      w2 = std::max(w2, norm(J2.Jspin[k] - o.J[k]));
    }
    for (std::size_t i = 0; i < G2.size(); ++i) w2 = std::max(w2, norm(G2[i] - o.G[i]));
  }
  r.require(w1 <= 1e-12, "QSDE1 max deviation " + fmt(w1));
  r.require(w2 <= 1e-12, "QSDE2 max deviation " + fmt(w2));
  return r.done();
}

Outcome qsde1_decoupling() {
  Report r;
  Scenario s = scenario_preset("baseline_diode");
  s.params.model = ModelKind::QSDE1;
  Scenario dd = s;
  dd.params.model = ModelKind::DriftDiffusion;
  const auto samples = s.sample_times;
  const auto a = run_scenario(s, samples);
  const auto b = run_scenario(dd, samples);

  double spin = 0.0;
  for (const auto& rec : a.records) spin = std::max(spin, rec.linf_spin);
  r.require(spin <= 1e-12 && a.records.back().t == 1.0, "max ||n||_inf up to t = 1: " + fmt(spin));

  double dn0 = 0.0;
  bool aligned = a.snapshots.size() == b.snapshots.size();
  for (std::size_t k = 0; aligned && k < a.snapshots.size(); ++k) {
    aligned = a.snapshots[k].t == b.snapshots[k].t;
    for (std::size_t i = 0; i < a.snapshots[k].size(); ++i)
      dn0 = std::max(dn0, std::abs(a.snapshots[k].n0[i] - b.snapshots[k].n0[i]));
  }
  r.require(aligned && dn0 <= 1e-10, "n0 vs drift-diffusion at t = 0, 7e-4, 1: " + fmt(dn0));
  return r.done();
}

struct BaselineRun {
  Trajectory traj;
  double M = 0.0, m = 0.0, lambda_D2 = 0.0;
};

const BaselineRun& baseline() {
  static const BaselineRun run = [] {
    const Scenario s = scenario_preset("baseline_diode");
    const Device dev = make_device(s);
    const State init = make_initial_state(s, dev);
    BaselineRun b;
    b.traj = run_transient(init, dev, s.stepper, s.sample_times);
    std::tie(b.M, b.m) = diagnostics::max_principle_bounds(init, dev);
    b.lambda_D2 = s.params.lambda_D2;
    return b;
  }();
  return run;
}

Outcome maximum_principle() {
  Report r;
  const auto& b = baseline();
  const auto rep = diagnostics::max_principle_check(b.traj, b.M, b.m, b.lambda_D2, 1e-8);
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& rec : b.traj.records) {
    lo = std::min(lo, rec.min_n0);
    hi = std::max(hi, rec.max_n0);
  }
  r.require(rep.ok(), std::to_string(rep.violations.size()) + " violations over " +
                          std::to_string(b.traj.records.size()) + " accepted states (M = " + fmt(b.M) +
                          ", m = " + fmt(b.m) + ", n0 in [" + fmt(lo) + ", " + fmt(hi) + "])");
  return r.done();
}

Outcome validity_bound() {
  Report r;
  const auto& b = baseline();
  double worst = 0.0;
  for (const auto& rec : b.traj.records) worst = std::max(worst, rec.ratio_max);
  r.require(worst < 1.0, "max |n|/n0 over " + std::to_string(b.traj.records.size()) +
                             " accepted QSDE2 states: " + fmt(worst));
  return r.done();
}

Outcome entropy_dissipation() {
  Report r;
  const Scenario s = scenario_preset("equilibrium");
  const auto traj = run_scenario(s, s.sample_times);
  const auto& rec = traj.records;
  double rise = 0.0;
  for (std::size_t k = 1; k < rec.size(); ++k) rise = std::max(rise, rec[k].S - rec[k - 1].S);
  r.require(rise <= 1e-10, "largest entropy increase over " + std::to_string(rec.size()) + " states: " + fmt(rise));

  const auto rate = diagnostics::entropy_rate(rec);
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::size_t k = 1; k + 1 < rec.size(); ++k) {
    if (rec[k].t < s.params.lambda_D2) continue;
    worst = std::max(worst, std::abs(rate[k] + rec[k].D) / std::max(std::abs(rec[k].D), 1.0));
    ++checked;
  }
  r.require(checked > 10 && worst <= 1e-2,
            "max |dS/dt + D|/max(|D|,1) for t >= lambda_D^2: " + fmt(worst) + " (" + std::to_string(checked) + " states)");
  return r.done();
}

Outcome spin_decay() {
  Report r;
  const Scenario s = scenario_preset("spin_decay");
  const Device dev = make_device(s);
  const auto traj = run_scenario(s, s.sample_times);
  std::vector<double> t, n;
  for (const auto& st : traj.snapshots) {
    if (st.t < 0.05) continue;
    t.push_back(st.t);
    n.push_back(diagnostics::spin_norm(st, dev.grid(), 2.0));
  }
  const auto fit = diagnostics::fit_decay_rate(t, n);
  r.require(fit.kappa > 0.0 && fit.r2 >= 0.99,
            "kappa_2 = " + fmt(fit.kappa) + ", r2 = " + fmt(fit.r2) + " on " + std::to_string(t.size()) + " samples");
  const auto rep = diagnostics::linf_growth_bound_check(traj, dev.grid(), s.params.lambda_D2, dev.C());
  r.require(rep.ok(), "L-infinity growth bound: " + std::to_string(rep.violations.size()) + " violations");
  return r.done();
}

Outcome steady_state_decay() {
  Report r;
  const double floor_factor = 10.0;
  for (ModelKind model : {ModelKind::QSDE1, ModelKind::QSDE2}) {
    Scenario s = scenario_preset("baseline_diode");
    s.params.model = model;
    auto samples = uniform_samples(1e-3, 0.1);
    samples.push_back(1.0);
    const Device dev = make_device(s);
    auto traj = run_scenario(s, samples);
    const auto& ref = traj.snapshots.back().n0;
    traj.attach_reldiff(ref, dev.grid());
    const double floor = floor_factor * s.stepper.rtol;

    std::vector<double> t, rd;
    for (const auto& st : traj.snapshots) {
      if (st.t > 0.1) continue;
      t.push_back(st.t);
      rd.push_back(diagnostics::relative_difference(st.n0, ref, dev.grid()));
    }
    const std::string name(to_string(model));
    if (model == ModelKind::QSDE1) {
      // below ~1e-12 the difference is rounding noise of n0 itself
      const double noise = 1e-12;
      int rises = 0;
      std::size_t checked = 0;
      for (std::size_t k = 1; k < traj.records.size(); ++k) {
        if (traj.records[k - 1].reldiff < noise) continue;
        ++checked;
        if (traj.records[k].reldiff > traj.records[k - 1].reldiff) ++rises;
      }
      r.require(rises == 0, name + ": " + std::to_string(rises) + " increases over " + std::to_string(checked) +
                                " accepted steps above " + fmt(noise));
      std::vector<double> tt, rr;
      for (std::size_t k = 0; k < t.size(); ++k) {
        if (rd[k] >= floor && rd[k] <= 1e-2) {
          tt.push_back(t[k]);
          rr.push_back(rd[k]);
        }
      }
      const auto fit = diagnostics::fit_decay_rate(tt, rr);
      r.require(fit.r2 >= 0.98, name + " tail r2 = " + fmt(fit.r2) + " (" + std::to_string(tt.size()) + " samples)");
    } else {
      const double ratio = rd.back() / rd.front();
      r.require(ratio <= 1e-2, name + " reldiff(0.1)/reldiff(0) = " + fmt(ratio));
      std::vector<double> tt, rr;
      for (std::size_t k = 0; k < t.size(); ++k) {
        if (rd[k] >= floor) {
          tt.push_back(t[k]);
          rr.push_back(rd[k]);
        }
      }
      const auto fit = diagnostics::fit_decay_rate(tt, rr);
      r.require(fit.r2 >= 0.98, name + " r2 on t <= 0.1 = " + fmt(fit.r2) + " (" + std::to_string(tt.size()) + " samples)");
    }
  }
  return r.done();
}

Outcome iv_characteristic() {
  Report r;
  const Scenario s = scenario_preset("baseline_diode");
  std::vector<double> biases;
  for (int k = 0; k <= 10; ++k) biases.push_back(8.0 * k);
  const auto rows =
      diagnostics::iv_sweep(biases, make_device(s), s.stepper, {ModelKind::QSDE1, ModelKind::QSDE2}, 1e-6);
  std::vector<double> j1, j2;
  int failed = 0;
  for (const auto& row : rows) {
    if (!row.error.empty() || !row.steady) ++failed;
    (row.model == ModelKind::QSDE1 ? j1 : j2).push_back(row.current);
  }
  r.require(failed == 0 && j1.size() == 11 && j2.size() == 11, std::to_string(failed) + " rows failed or not steady");
  auto monotone = [](const std::vector<double>& j) {
    for (std::size_t k = 1; k < j.size(); ++k)
      if (j[k] < j[k - 1]) return false;
    return true;
  };
  r.require(monotone(j1) && monotone(j2), "both curves nondecreasing");
  r.require(std::abs(j1[0]) <= 1e-6 && std::abs(j2[0]) <= 1e-6,
            "J(0) = " + fmt(j1[0]) + " (qsde1), " + fmt(j2[0]) + " (qsde2)");
  // currents within the zero tolerance count as equal
  const double zero = 1e-6;
  int below = 0;
  double margin = INFINITY;
  for (std::size_t k = 0; k < j1.size(); ++k) {
    if (j2[k] < j1[k] - zero) ++below;
    if (k > 0) margin = std::min(margin, j2[k] - j1[k]);
  }
  r.require(below == 0, "qsde2 >= qsde1 at every bias (min gap for V_A > 0: " + fmt(margin) + "); J(80) = " +
                            fmt(j1.back()) + " / " + fmt(j2.back()));
  return r.done();
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "closure algebra", closure_algebra},
      {2, "polarization sandwich", polarization_sandwich},
      {3, "moment closure", moment_closure},
      {4, "poisson", poisson_solver},
      {5, "assembly oracles", assembly_oracles},
      {6, "qsde1 decoupling", qsde1_decoupling},
      {7, "maximum principle", maximum_principle},
      {8, "validity bound", validity_bound},
      {9, "entropy", entropy_dissipation},
      {10, "spin decay", spin_decay},
      {11, "steady-state decay", steady_state_decay},
      {12, "current-voltage", iv_characteristic},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %2d %-20s %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures ? 1 : 0;
}
