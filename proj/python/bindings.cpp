// Python module _core: closure functions, scenarios, transient runs and sweeps.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spindd/closure.hpp"
#include "spindd/diagnostics.hpp"
#include "spindd/poisson.hpp"
#include "spindd/scenario.hpp"
#include "spindd/timestepper.hpp"

namespace py = pybind11;
using namespace spindd;

namespace {

Scenario resolve(const std::string& preset, const std::string& config, const py::dict& overrides) {
  std::string text = config.empty() ? format_config(scenario_preset(preset)) : config;
  for (const auto& [k, v] : overrides) text += "\n" + py::str(k).cast<std::string>() + " = " + py::str(v).cast<std::string>();
  Scenario s = parse_config(text);
  s.validate();
  return s;
}

py::dict state_dict(const State& s) {
  std::vector<double> n1, n2, n3;
  for (const Vec3& v : s.nvec) {
    n1.push_back(v[0]);
    n2.push_back(v[1]);
    n3.push_back(v[2]);
  }
  py::dict d;
  d["t"] = s.t;
  d["n0"] = s.n0;
  d["n1"] = n1;
  d["n2"] = n2;
  d["n3"] = n3;
  d["V"] = s.V;
  return d;
}

py::dict run(const std::string& preset, const std::string& config, const py::dict& overrides) {
  Scenario s = resolve(preset, config, overrides);
  if (s.sample_times.empty() || s.sample_times.back() != s.stepper.t_end) s.sample_times.push_back(s.stepper.t_end);
  const Device device = make_device(s);
  const State initial = make_initial_state(s, device);
  Trajectory traj;
  {
    py::gil_scoped_release release;
    traj = run_transient(initial, device, s.stepper, s.sample_times);
  }
  traj.attach_reldiff(traj.snapshots.back().n0, device.grid());

  py::dict series;
  std::vector<double> t, S, D, l2, linf, ratio, current, reldiff;
  for (const auto& r : traj.records) {
    t.push_back(r.t);
    S.push_back(r.S);
    D.push_back(r.D);
    l2.push_back(r.l2_spin);
    linf.push_back(r.linf_spin);
    ratio.push_back(r.ratio_max);
    current.push_back(r.current_out);
    reldiff.push_back(r.reldiff);
  }
  series["t"] = t;
  series["S"] = S;
  series["D"] = D;
  series["l2_spin"] = l2;
  series["linf_spin"] = linf;
  series["ratio_max"] = ratio;
  series["current_out"] = current;
  series["reldiff"] = reldiff;

  py::list snapshots;
  for (const State& st : traj.snapshots) snapshots.append(state_dict(st));
  const auto [M, m] = diagnostics::max_principle_bounds(initial, device);

  py::dict out;
  out["x"] = device.grid().nodes();
  out["series"] = series;
  out["snapshots"] = snapshots;
  out["rejected_steps"] = traj.rejected_steps;
  out["max_principle_violations"] = diagnostics::max_principle_check(traj, M, m, s.params.lambda_D2).violations.size();
  return out;
}

std::vector<py::dict> sweep(const std::vector<double>& biases, const std::vector<std::string>& models,
                            const std::string& preset, const std::string& config, const py::dict& overrides,
                            double stall_tol, unsigned threads) {
  const Scenario s = resolve(preset, config, overrides);
  std::vector<ModelKind> kinds;
  for (const auto& m : models) kinds.push_back(model_from_string(m));
  const Device device = make_device(s);
  std::vector<diagnostics::IvRow> rows;
  {
    py::gil_scoped_release release;
    rows = diagnostics::iv_sweep(biases, device, s.stepper, kinds, stall_tol, threads);
  }
  std::vector<py::dict> out;
  for (const auto& r : rows) {
    py::dict d;
    d["V_A"] = r.V_A;
    d["model"] = std::string(to_string(r.model));
    d["current"] = r.current;
    d["steady"] = r.steady;
    d["error"] = r.error;
    out.push_back(d);
  }
  return out;
}

py::dict equilibrium(const std::string& preset, const std::string& config, const py::dict& overrides) {
  const Scenario s = resolve(preset, config, overrides);
  const Grid1D grid = build_uniform_grid(s.intervals);
  const auto eq = poisson::solve_equilibrium_potential(s.doping, s.params.lambda_D2, grid);
  py::dict d;
  d["x"] = grid.nodes();
  d["V_eq"] = eq.V;
  d["C"] = s.doping.sample(grid);
  d["residual_history"] = eq.residual_history;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spin drift-diffusion simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ValidityError>(m, "ValidityError", PyExc_ArithmeticError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  m.def("phi", &closure::phi, py::arg("y"));
  m.def("spin_mobility", &closure::spin_mobility, py::arg("v"), py::arg("lambda_"));
  m.def(
      "polarization_sandwich",
      [](double a0, const Vec3& a, double zeta, const Vec3& omega) {
        const PauliCoeffs r = closure::polarization_sandwich({a0, a}, zeta, omega);
        return py::make_tuple(r.a0, r.avec);
      },
      py::arg("a0"), py::arg("a"), py::arg("zeta"), py::arg("omega"));
  m.def("preset_names", &preset_names);
  m.def(
      "format_config", [](const std::string& preset, const std::string& config, const py::dict& overrides) {
        return format_config(resolve(preset, config, overrides));
      },
      py::arg("preset") = "baseline_diode", py::arg("config") = "", py::arg("overrides") = py::dict());
  m.def("run", &run, py::arg("preset") = "baseline_diode", py::arg("config") = "", py::arg("overrides") = py::dict(),
        "Transient run. Returns x, series (one entry per accepted step) and snapshots at the sample times.");
  m.def("sweep", &sweep, py::arg("biases"), py::arg("models") = std::vector<std::string>{"qsde1", "qsde2"},
        py::arg("preset") = "baseline_diode", py::arg("config") = "", py::arg("overrides") = py::dict(),
        py::arg("stall_tol") = 1e-6, py::arg("threads") = 0u);
  m.def("equilibrium", &equilibrium, py::arg("preset") = "baseline_diode", py::arg("config") = "",
        py::arg("overrides") = py::dict());
}
