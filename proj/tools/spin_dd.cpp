// spin_dd: transient runs, I-V sweeps, output audits and equilibrium profiles.
//
// Exit status: 0 ok, 1 solver error, 2 usage or configuration error,
// 3 violations found by `check`.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spindd/diagnostics.hpp"
#include "spindd/io.hpp"
#include "spindd/poisson.hpp"
#include "spindd/scenario.hpp"
#include "spindd/timestepper.hpp"

namespace fs = std::filesystem;
using namespace spindd;

namespace {

constexpr int kExitSolver = 1;
constexpr int kExitUsage = 2;
constexpr int kExitViolations = 3;

struct ScenarioArgs {
  std::string preset = "baseline_diode";
  std::string config;
  std::string model;
  std::string flux;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--preset", preset, "baseline_diode | equilibrium | spin_decay")->capture_default_str();
    cmd->add_option("--config", config, "key = value scenario file (overrides --preset)")->check(CLI::ExistingFile);
    cmd->add_option("--model", model, "qsde1 | qsde2 | dd");
    cmd->add_option("--flux", flux, "central | sg");
  }

  Scenario resolve() const {
    Scenario s = config.empty() ? scenario_preset(preset) : load_config(config);
    if (!model.empty()) s.params.model = model_from_string(model);
    if (!flux.empty()) s.params.flux = flux_scheme_from_string(flux);
    s.validate();
    return s;
  }
};

/// "a:b:c" (inclusive, step c) or "v1,v2,...".
std::vector<double> parse_biases(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double a = 0, b = 0, c = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &a, &b, &c, &tail) != 3 || !(c > 0.0) || b < a) {
      throw ConfigError("--bias: expected start:stop:step with step > 0");
    }
    const long n = std::lround(std::floor((b - a) / c + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(a + static_cast<double>(k) * c);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw ConfigError("--bias: cannot parse '" + item + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

io::Metadata scenario_meta(const Scenario& s) {
  return {{"scenario", s.name},
          {"model", std::string(to_string(s.params.model))},
          {"flux", std::string(to_string(s.params.flux))},
          {"lambda", io::format_double(s.params.lambda)},
          {"lambda_D2", io::format_double(s.params.lambda_D2)},
          {"zeta", io::format_double(s.params.zeta)},
          {"V_A", io::format_double(s.params.V_A)},
          {"N", std::to_string(s.intervals)}};
}

int cmd_run(const ScenarioArgs& args, const std::string& out_dir, bool dump_config) {
  Scenario s = args.resolve();
  if (dump_config) {
    std::cout << format_config(s);
    return 0;
  }
  if (s.sample_times.empty() || s.sample_times.back() != s.stepper.t_end) s.sample_times.push_back(s.stepper.t_end);
  const Device device = make_device(s);
  const State initial = make_initial_state(s, device);
  Trajectory traj = run_transient(initial, device, s.stepper, s.sample_times);
  traj.attach_reldiff(traj.snapshots.back().n0, device.grid());

  const auto [M, m] = diagnostics::max_principle_bounds(initial, device);
  io::Metadata meta = scenario_meta(s);
  meta.emplace_back("t_ref", io::format_double(traj.snapshots.back().t));
  meta.emplace_back("M", io::format_double(M));
  meta.emplace_back("m", io::format_double(m));

  fs::create_directories(out_dir);
  auto prof = open_output(fs::path(out_dir) / "profiles.csv");
  io::write_profiles(prof, traj, device.grid(), meta);
  auto series = open_output(fs::path(out_dir) / "series.csv");
  io::write_series(series, traj.records, meta);
  write_config(s, fs::path(out_dir) / "scenario.cfg");
  std::cout << "accepted steps " << traj.steps.size() << ", rejected " << traj.rejected_steps << ", J0(x=1) = "
            << io::format_double(traj.records.back().current_out) << '\n';
  return 0;
}

int cmd_sweep(const ScenarioArgs& args, const std::string& bias_text, const std::string& models_text,
              unsigned threads, double stall_tol, const std::string& out_dir) {
  const Scenario s = args.resolve();
  const auto biases = parse_biases(bias_text);
  std::vector<ModelKind> models;
  std::istringstream names(models_text);
  for (std::string name; std::getline(names, name, ',');) models.push_back(model_from_string(name));
  if (models.empty()) throw ConfigError("--models: expected a list drawn from qsde1, qsde2, dd");
  const Device device = make_device(s);
  const auto rows = diagnostics::iv_sweep(biases, device, s.stepper, models, stall_tol, threads);

  io::Metadata meta = scenario_meta(s);
  // model and V_A vary per row
  std::erase_if(meta, [](const auto& kv) { return kv.first == "model" || kv.first == "V_A"; });
  meta.emplace_back("bias", bias_text);
  meta.emplace_back("stall_tol", io::format_double(stall_tol));
  fs::create_directories(out_dir);
  auto out = open_output(fs::path(out_dir) / "iv.csv");
  io::write_iv(out, rows, meta);

  int failures = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      std::cerr << "V_A=" << r.V_A << " " << to_string(r.model) << ": " << r.error << '\n';
      ++failures;
    } else if (!r.steady) {
      std::cerr << "V_A=" << r.V_A << " " << to_string(r.model) << ": not steady at t_end\n";
    }
  }
  return failures ? kExitSolver : 0;
}

int cmd_check(const std::string& target) {
  fs::path path(target);
  if (fs::is_directory(path)) path /= "series.csv";
  const auto issues = io::audit(path);
  for (const auto& msg : issues) std::cout << msg << '\n';
  if (!issues.empty()) {
    std::cout << issues.size() << " violation(s)\n";
    return kExitViolations;
  }
  std::cout << "ok\n";
  return 0;
}

int cmd_equilibrium(const ScenarioArgs& args, const std::string& out_dir) {
  const Scenario s = args.resolve();
  const Grid1D grid = build_uniform_grid(s.intervals);
  const auto eq = poisson::solve_equilibrium_potential(s.doping, s.params.lambda_D2, grid);
  io::Metadata meta = scenario_meta(s);
  meta.emplace_back("newton_iterations", std::to_string(eq.residual_history.size() - 1));
  fs::create_directories(out_dir);
  auto out = open_output(fs::path(out_dir) / "equilibrium.csv");
  io::write_equilibrium(out, grid, eq.V, s.doping.sample(grid), meta);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin drift-diffusion device simulator"};
  app.require_subcommand(1);

  ScenarioArgs run_args, sweep_args, eq_args;
  std::string run_out, sweep_out, eq_out, check_target;
  bool dump_config = false;
  std::string bias_text = "0:80:8";
  std::string models_text = "qsde1,qsde2";
  unsigned threads = 0;
  double stall_tol = 1e-6;

  auto* run = app.add_subcommand("run", "Transient run; writes profiles.csv and series.csv");
  run_args.add_to(run);
  run->add_option("--out", run_out, "output directory");
  run->add_flag("--dump-config", dump_config, "print the resolved scenario and exit");

  auto* sweep = app.add_subcommand("sweep", "Current-voltage sweep; writes iv.csv");
  sweep_args.add_to(sweep);
  sweep->add_option("--bias", bias_text, "start:stop:step or a comma list")->capture_default_str();
  sweep->add_option("--models", models_text, "comma list of models")->capture_default_str();
  sweep->add_option("--threads", threads, "worker threads (0: SPIN_DD_THREADS or all cores)");
  sweep->add_option("--stall-tol", stall_tol, "steady-state threshold on |d state/dt|")->capture_default_str();
  sweep->add_option("--out", sweep_out, "output directory")->required();

  auto* check = app.add_subcommand("check", "Audit a stored run (series.csv or its directory)");
  check->add_option("path", check_target, "series.csv or run directory")->required();

  auto* equilibrium = app.add_subcommand("equilibrium", "Equilibrium potential; writes equilibrium.csv");
  eq_args.add_to(equilibrium);
  equilibrium->add_option("--out", eq_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) {
      if (run_out.empty() && !dump_config) throw ConfigError("run: --out is required");
      return cmd_run(run_args, run_out, dump_config);
    }
    if (*sweep) return cmd_sweep(sweep_args, bias_text, models_text, threads, stall_tol, sweep_out);
    if (*check) return cmd_check(check_target);
    if (*equilibrium) return cmd_equilibrium(eq_args, eq_out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StiffFailure& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitUsage;
}
