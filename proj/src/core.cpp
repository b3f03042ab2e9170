#include "spindd/core.hpp"

#include <algorithm>
#include <sstream>

namespace spindd {

Grid1D::Grid1D(int intervals) : n_(intervals), dx_(0.0) {
  if (intervals < 4) {
    throw ConfigError("grid needs at least 4 intervals, got " + std::to_string(intervals));
  }
  dx_ = 1.0 / static_cast<double>(intervals);
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> x(num_nodes());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = node(i);
  x.back() = 1.0;
  return x;
}

Grid1D build_uniform_grid(int intervals) { return Grid1D(intervals); }

std::string_view to_string(ModelKind m) {
  switch (m) {
    case ModelKind::QSDE1: return "qsde1";
    case ModelKind::QSDE2: return "qsde2";
    case ModelKind::DriftDiffusion: return "dd";
  }
  return "?";
}

ModelKind model_from_string(std::string_view s) {
  if (s == "qsde1") return ModelKind::QSDE1;
  if (s == "qsde2") return ModelKind::QSDE2;
  if (s == "dd") return ModelKind::DriftDiffusion;
  throw ConfigError("unknown model '" + std::string(s) + "' (expected qsde1, qsde2 or dd)");
}

std::string_view to_string(FluxScheme s) {
  return s == FluxScheme::Central ? "central" : "sg";
}

FluxScheme flux_scheme_from_string(std::string_view s) {
  if (s == "central") return FluxScheme::Central;
  if (s == "sg" || s == "exponential_fitting") return FluxScheme::ExponentialFitting;
  throw ConfigError("unknown flux scheme '" + std::string(s) + "' (expected central or sg)");
}

void ModelParams::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda: must be finite and >= 0");
  if (!(lambda_D2 > 0.0) || !std::isfinite(lambda_D2)) throw ConfigError("lambda_D2: must be > 0");
  if (!(zeta >= 0.0 && zeta < 1.0)) throw ConfigError("zeta: must lie in [0,1)");
  if (std::abs(norm(omega) - 1.0) > 1e-12) throw ConfigError("omega: must be a unit vector");
  if (!std::isfinite(V_A)) throw ConfigError("V_A: must be finite");
}

void DopingProfile::validate() const {
  if (!(C_min > 0.0 && C_min <= 1.0)) throw ConfigError("C_min: must lie in (0,1]");
  if (!(x_bar > 0.0 && x_bar < 0.5)) throw ConfigError("x_bar: must lie in (0,0.5)");
}

double DopingProfile::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << "doping evaluated outside [0,1]: x = " << x;
    throw DomainError(os.str());
  }
  return (x > x_bar && x < 1.0 - x_bar) ? C_min : 1.0;
}

std::vector<double> DopingProfile::sample(const Grid1D& grid) const {
  std::vector<double> c(grid.num_nodes());
  const auto x = grid.nodes();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (*this)(x[i]);
  return c;
}

double doping_eval(const DopingProfile& profile, double x) { return profile(x); }

State State::zeros(std::size_t nodes) {
  State s;
  s.n0.assign(nodes, 0.0);
  s.nvec.assign(nodes, Vec3{0.0, 0.0, 0.0});
  s.V.assign(nodes, 0.0);
  return s;
}

StateSummary summarize(const State& s) {
  StateSummary r{s.n0.empty() ? 0.0 : s.n0[0], 0.0};
  for (std::size_t i = 0; i < s.size(); ++i) {
    r.min_n0 = std::min(r.min_n0, s.n0[i]);
    r.max_ratio = std::max(r.max_ratio, norm(s.nvec[i]) / s.n0[i]);
  }
  return r;
}

void check_state(const State& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double n0 = s.n0[i];
    if (!(n0 > 0.0)) {
      throw ValidityError("n0 <= 0 at node " + std::to_string(i), static_cast<std::ptrdiff_t>(i));
    }
    if (!(norm(s.nvec[i]) < n0)) {
      throw ValidityError("|n|/n0 >= 1 at node " + std::to_string(i), static_cast<std::ptrdiff_t>(i));
    }
  }
}

UnitKind unit_kind_from_string(std::string_view s) {
  if (s == "length") return UnitKind::Length;
  if (s == "time") return UnitKind::Time;
  if (s == "voltage") return UnitKind::Voltage;
  if (s == "density") return UnitKind::Density;
  if (s == "current") return UnitKind::Current;
  throw ConfigError("unknown unit kind '" + std::string(s) + "'");
}

PhysicalValue to_physical(double scaled, UnitKind kind) {
  switch (kind) {
    case UnitKind::Length: return {scaled * 1e-7, "m"};
    case UnitKind::Time: return {scaled * 0.5e-13, "s"};
    case UnitKind::Voltage: return {scaled * 1.25e-2, "V"};
    case UnitKind::Density: return {scaled * 1e17, "m^-2"};
    case UnitKind::Current: return {scaled * 2e23, "m^-1 s^-1"};
  }
  throw ConfigError("unknown unit kind");
}

PhysicalValue to_physical(double scaled, std::string_view kind) {
  return to_physical(scaled, unit_kind_from_string(kind));
}

}  // namespace spindd
