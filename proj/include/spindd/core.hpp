#pragma once

// Shared vocabulary: grid, parameters, doping, state, Pauli coefficients.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spindd {

using Vec3 = std::array<double, 3>;

// ---------------------------------------------------------------------------
// Errors

/// Invalid configuration or parameter value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The model's validity condition |n|/n0 < 1 (or n0 > 0) failed.
class ValidityError : public std::runtime_error {
 public:
  ValidityError(const std::string& what, std::ptrdiff_t location)
      : std::runtime_error(what), location_(location) {}
  /// Face or node index where the violation was detected (-1 if unknown).
  std::ptrdiff_t location() const noexcept { return location_; }

 private:
  std::ptrdiff_t location_;
};

/// Nonlinear or linear solver failure.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

// ---------------------------------------------------------------------------
// Small vector helpers

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3& operator+=(Vec3& a, const Vec3& b) {
  a[0] += b[0];
  a[1] += b[1];
  a[2] += b[2];
  return a;
}

// ---------------------------------------------------------------------------
// Grid

/// Uniform mesh of [0,1] with N intervals. Nodes x_i = i*dx, faces x_{i+1/2}.
class Grid1D {
 public:
  explicit Grid1D(int intervals);

  int intervals() const noexcept { return n_; }
  std::size_t num_nodes() const noexcept { return static_cast<std::size_t>(n_) + 1; }
  std::size_t num_faces() const noexcept { return static_cast<std::size_t>(n_); }
  double dx() const noexcept { return dx_; }
  double node(std::size_t i) const noexcept { return static_cast<double>(i) * dx_; }
  double face(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * dx_; }
  std::vector<double> nodes() const;

 private:
  int n_;
  double dx_;
};

/// Throws ConfigError when N < 4.
Grid1D build_uniform_grid(int intervals);

// ---------------------------------------------------------------------------
// Parameters

enum class ModelKind { QSDE1, QSDE2, DriftDiffusion };

std::string_view to_string(ModelKind m);
ModelKind model_from_string(std::string_view s);

/// Face-flux discretization of the drift-diffusion brackets.
enum class FluxScheme { Central, ExponentialFitting };

std::string_view to_string(FluxScheme s);
FluxScheme flux_scheme_from_string(std::string_view s);

struct ModelParams {
  double lambda = 1.0;      // spin-coupling constant
  double lambda_D2 = 1e-3;  // squared scaled Debye length
  double zeta = 0.5;        // pseudo-spin polarization, [0,1)
  Vec3 omega{0.0, 0.0, 1.0};
  double V_A = 80.0;
  ModelKind model = ModelKind::QSDE2;
  FluxScheme flux = FluxScheme::Central;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  bool operator==(const ModelParams&) const = default;
};

// ---------------------------------------------------------------------------
// Doping

/// Ballistic diode: C_min on the open interval (x_bar, 1 - x_bar), 1 elsewhere.
struct DopingProfile {
  double C_min = 0.025;
  double x_bar = 0.2;

  void validate() const;
  double operator()(double x) const;
  std::vector<double> sample(const Grid1D& grid) const;
  bool operator==(const DopingProfile&) const = default;
};

double doping_eval(const DopingProfile& profile, double x);

// ---------------------------------------------------------------------------
// State

struct State {
  std::vector<double> n0;
  std::vector<Vec3> nvec;
  std::vector<double> V;
  double t = 0.0;

  std::size_t size() const noexcept { return n0.size(); }
  static State zeros(std::size_t nodes);
};

/// d/dt of the density fields at every node (zero at Dirichlet nodes).
struct TimeDerivative {
  std::vector<double> dn0;
  std::vector<Vec3> dnvec;
};

struct StateSummary {
  double min_n0;
  double max_ratio;  // max |n|/n0
};

StateSummary summarize(const State& s);

/// Throws ValidityError (node index) when n0 <= 0 or |n|/n0 >= 1 somewhere.
void check_state(const State& s);

// ---------------------------------------------------------------------------
// Pauli basis

/// a0*sigma_0 + avec . sigma; Hermitian because the coefficients are real.
struct PauliCoeffs {
  double a0 = 0.0;
  Vec3 avec{0.0, 0.0, 0.0};
};

// ---------------------------------------------------------------------------
// Units (scaled -> SI)

enum class UnitKind { Length, Time, Voltage, Density, Current };

UnitKind unit_kind_from_string(std::string_view s);

struct PhysicalValue {
  double value;
  std::string_view unit;
};

PhysicalValue to_physical(double scaled, UnitKind kind);
PhysicalValue to_physical(double scaled, std::string_view kind);

}  // namespace spindd
