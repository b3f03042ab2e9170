#include "spindd/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace spindd {

std::string_view to_string(SpinInit s) { return s == SpinInit::Zero ? "zero" : "sine"; }

SpinInit spin_init_from_string(std::string_view s) {
  if (s == "zero") return SpinInit::Zero;
  if (s == "sine") return SpinInit::Sine;
  throw ConfigError("initial.spin: unknown rule '" + std::string(s) + "' (expected zero or sine)");
}

void Scenario::validate() const {
  if (intervals < 4) throw ConfigError("grid.N: need at least 4 intervals");
  try {
    params.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("params.") + e.what());
  }
  try {
    doping.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("doping.") + e.what());
  }
  if (spin_init == SpinInit::Sine) {
    if (!(spin_amplitude >= 0.0 && spin_amplitude < 1.0)) {
      throw ConfigError("initial.spin_amplitude: must lie in [0,1) so that |n|/n0 < 1");
    }
    if (std::abs(norm(spin_direction) - 1.0) > 1e-12) throw ConfigError("initial.spin_direction: must be a unit vector");
  }
  stepper.validate();
  for (std::size_t k = 0; k < sample_times.size(); ++k) {
    const double t = sample_times[k];
    if (!(t >= 0.0 && t <= stepper.t_end)) throw ConfigError("samples: times must lie in [0, stepper.t_end]");
    if (k > 0 && !(t > sample_times[k - 1])) throw ConfigError("samples: times must be strictly increasing");
  }
}

namespace {

std::vector<double> uniform_samples(double step, double end) {
  std::vector<double> t;
  const int n = static_cast<int>(std::lround(end / step));
  for (int k = 0; k <= n; ++k) t.push_back(k * step);
  return t;
}

Scenario spin_scenario(const char* name, double bias) {
  Scenario s;
  s.name = name;
  s.params.model = ModelKind::QSDE1;
  s.params.V_A = bias;
  s.spin_init = SpinInit::Sine;
  s.spin_amplitude = 0.5;
  s.spin_direction = {0.0, 0.0, 1.0};
  s.sample_times = uniform_samples(0.05, 1.0);
  return s;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view text, const std::string& key) {
  const std::string buf(trim(text));
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size()) {
    throw ConfigError(key + ": expected a number, got '" + buf + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view text, const std::string& key) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_double(text.substr(start, comma - start), key));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Vec3 parse_vec3(std::string_view text, const std::string& key) {
  const auto v = parse_list(text, key);
  if (v.size() != 3) throw ConfigError(key + ": expected three comma-separated numbers");
  return {v[0], v[1], v[2]};
}

int parse_int(std::string_view text, const std::string& key) {
  const double v = parse_double(text, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(key + ": expected an integer");
  return static_cast<int>(v);
}

bool parse_bool(std::string_view text, const std::string& key) {
  const auto t = trim(text);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw ConfigError(key + ": expected true or false");
}

using Setter = std::function<void(Scenario&, std::string_view, const std::string&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"name", [](Scenario& s, std::string_view v, const std::string&) { s.name = std::string(trim(v)); }},
      {"model", [](Scenario& s, std::string_view v, const std::string&) { s.params.model = model_from_string(trim(v)); }},
      {"grid.N", [](Scenario& s, std::string_view v, const std::string& k) { s.intervals = parse_int(v, k); }},
      {"params.lambda", [](Scenario& s, std::string_view v, const std::string& k) { s.params.lambda = parse_double(v, k); }},
      {"params.lambda_D2",
       [](Scenario& s, std::string_view v, const std::string& k) { s.params.lambda_D2 = parse_double(v, k); }},
      {"params.zeta", [](Scenario& s, std::string_view v, const std::string& k) { s.params.zeta = parse_double(v, k); }},
      {"params.omega", [](Scenario& s, std::string_view v, const std::string& k) { s.params.omega = parse_vec3(v, k); }},
      {"params.V_A", [](Scenario& s, std::string_view v, const std::string& k) { s.params.V_A = parse_double(v, k); }},
      {"params.flux",
       [](Scenario& s, std::string_view v, const std::string&) { s.params.flux = flux_scheme_from_string(trim(v)); }},
      {"doping.C_min", [](Scenario& s, std::string_view v, const std::string& k) { s.doping.C_min = parse_double(v, k); }},
      {"doping.x_bar", [](Scenario& s, std::string_view v, const std::string& k) { s.doping.x_bar = parse_double(v, k); }},
      {"initial.spin",
       [](Scenario& s, std::string_view v, const std::string&) { s.spin_init = spin_init_from_string(trim(v)); }},
      {"initial.spin_amplitude",
       [](Scenario& s, std::string_view v, const std::string& k) { s.spin_amplitude = parse_double(v, k); }},
      {"initial.spin_direction",
       [](Scenario& s, std::string_view v, const std::string& k) { s.spin_direction = parse_vec3(v, k); }},
      {"stepper.dt0", [](Scenario& s, std::string_view v, const std::string& k) { s.stepper.dt0 = parse_double(v, k); }},
      {"stepper.rtol", [](Scenario& s, std::string_view v, const std::string& k) { s.stepper.rtol = parse_double(v, k); }},
      {"stepper.atol", [](Scenario& s, std::string_view v, const std::string& k) { s.stepper.atol = parse_double(v, k); }},
      {"stepper.newton_tol",
       [](Scenario& s, std::string_view v, const std::string& k) { s.stepper.newton_tol = parse_double(v, k); }},
      {"stepper.newton_max",
       [](Scenario& s, std::string_view v, const std::string& k) { s.stepper.newton_max = parse_int(v, k); }},
      {"stepper.t_end", [](Scenario& s, std::string_view v, const std::string& k) { s.stepper.t_end = parse_double(v, k); }},
      {"stepper.adaptive",
       [](Scenario& s, std::string_view v, const std::string& k) { s.stepper.adaptive = parse_bool(v, k); }},
      {"stepper.dt_max",
       [](Scenario& s, std::string_view v, const std::string& k) { s.stepper.dt_max = parse_double(v, k); }},
      {"samples", [](Scenario& s, std::string_view v, const std::string& k) { s.sample_times = parse_list(v, k); }},
  };
  return table;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string vec(const Vec3& v) { return num(v[0]) + ", " + num(v[1]) + ", " + num(v[2]); }

}  // namespace

std::vector<std::string> preset_names() { return {"baseline_diode", "equilibrium", "spin_decay"}; }

Scenario scenario_preset(std::string_view name) {
  if (name == "baseline_diode") return Scenario{};
  if (name == "equilibrium") return spin_scenario("equilibrium", 0.0);
  if (name == "spin_decay") {
    Scenario s = spin_scenario("spin_decay", 2.0);
    // The decay is followed over many decades; only relative error control.
    s.stepper.atol = 1e-30;
    return s;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

Scenario parse_config(std::string_view text) {
  Scenario s;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    try {
      it->second(s, line.substr(eq + 1), key);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  s.validate();
  return s;
}

Scenario load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_config(const Scenario& s) {
  std::ostringstream out;
  out << "name = " << s.name << '\n';
  out << "model = " << to_string(s.params.model) << '\n';
  out << "grid.N = " << s.intervals << '\n';
  out << "params.lambda = " << num(s.params.lambda) << '\n';
  out << "params.lambda_D2 = " << num(s.params.lambda_D2) << '\n';
  out << "params.zeta = " << num(s.params.zeta) << '\n';
  out << "params.omega = " << vec(s.params.omega) << '\n';
  out << "params.V_A = " << num(s.params.V_A) << '\n';
  out << "params.flux = " << to_string(s.params.flux) << '\n';
  out << "doping.C_min = " << num(s.doping.C_min) << '\n';
  out << "doping.x_bar = " << num(s.doping.x_bar) << '\n';
  out << "initial.spin = " << to_string(s.spin_init) << '\n';
  out << "initial.spin_amplitude = " << num(s.spin_amplitude) << '\n';
  out << "initial.spin_direction = " << vec(s.spin_direction) << '\n';
  out << "stepper.dt0 = " << num(s.stepper.dt0) << '\n';
  out << "stepper.rtol = " << num(s.stepper.rtol) << '\n';
  out << "stepper.atol = " << num(s.stepper.atol) << '\n';
  out << "stepper.newton_tol = " << num(s.stepper.newton_tol) << '\n';
  out << "stepper.newton_max = " << s.stepper.newton_max << '\n';
  out << "stepper.t_end = " << num(s.stepper.t_end) << '\n';
  out << "stepper.adaptive = " << (s.stepper.adaptive ? "true" : "false") << '\n';
  out << "stepper.dt_max = " << num(s.stepper.dt_max) << '\n';
  out << "samples = ";
  for (std::size_t k = 0; k < s.sample_times.size(); ++k) out << (k ? ", " : "") << num(s.sample_times[k]);
  out << '\n';
  return out.str();
}

void write_config(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file '" + path.string() + "'");
  out << format_config(s);
}

Device make_device(const Scenario& s) {
  s.validate();
  return Device(build_uniform_grid(s.intervals), s.params, s.doping);
}

State make_initial_state(const Scenario& s, const Device& device) {
  if (s.spin_init == SpinInit::Zero) return initial_state(device);
  // n0 is needed to scale the spin, so build the spin-free state first.
  const State base = initial_state(device);
  std::vector<Vec3> spin(base.size());
  for (std::size_t i = 0; i < spin.size(); ++i) {
    const double x = device.grid().node(i);
    spin[i] = (s.spin_amplitude * base.n0[i] * std::sin(std::numbers::pi * x)) * s.spin_direction;
  }
  return initial_state(device, spin);
}

}  // namespace spindd
