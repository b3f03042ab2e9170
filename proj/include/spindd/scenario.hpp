#pragma once

// Scenario description, presets and the flat key = value config format.
//
//   # comment
//   model = qsde2
//   grid.N = 100
//   params.zeta = 0.5
//   params.omega = 0, 0, 1
//   samples = 0, 7e-4, 1
//
// Keys not present keep the baseline_diode defaults.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "spindd/core.hpp"
#include "spindd/model.hpp"
#include "spindd/timestepper.hpp"

namespace spindd {

/// Initial spin rule; n0 always starts from exp(-V_eq).
enum class SpinInit {
  Zero,
  Sine,  // amplitude * n0 * sin(pi x) * direction
};

std::string_view to_string(SpinInit s);
SpinInit spin_init_from_string(std::string_view s);

struct Scenario {
  std::string name = "baseline_diode";
  int intervals = 100;
  ModelParams params;
  DopingProfile doping;
  SpinInit spin_init = SpinInit::Zero;
  double spin_amplitude = 0.5;
  Vec3 spin_direction{0.0, 0.0, 1.0};
  StepperConfig stepper;
  std::vector<double> sample_times{0.0, 7e-4, 1.0};

  /// Throws ConfigError naming the offending key.
  void validate() const;
  bool operator==(const Scenario&) const = default;
};

/// baseline_diode | equilibrium | spin_decay
Scenario scenario_preset(std::string_view name);
std::vector<std::string> preset_names();

Scenario parse_config(std::string_view text);
Scenario load_config(const std::filesystem::path& path);
std::string format_config(const Scenario& s);
void write_config(const Scenario& s, const std::filesystem::path& path);

Device make_device(const Scenario& s);
State make_initial_state(const Scenario& s, const Device& device);

}  // namespace spindd
