#include "spindd/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "spindd/model.hpp"
#include "spindd/stencil.hpp"
#include "spindd/timestepper.hpp"

namespace spindd::diagnostics {

namespace {

double trapezoid(const std::vector<double>& f, double dx) {
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return dx * (s + 0.5 * (f.front() + f.back()));
}

// -lambda_D2/2 int |V'|^2 on faces, the discrete energy paired with the Poisson stencil.
double field_energy(const std::vector<double>& V, double lambda_D2, double dx) {
  double e = 0.0;
  for (std::size_t f = 0; f + 1 < V.size(); ++f) {
    const double g = (V[f + 1] - V[f]) / dx;
    e += g * g;
  }
  return -0.5 * lambda_D2 * e * dx;
}

void require_valid(const State& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s.n0[i] > 0.0) || !(norm(s.nvec[i]) < s.n0[i])) {
      throw ValidityError("|n| >= n0 at node " + std::to_string(i), static_cast<std::ptrdiff_t>(i));
    }
  }
}

}  // namespace

double entropy(const State& s, const std::vector<double>& C, double lambda_D2, const Grid1D& grid) {
  require_valid(s);
  std::vector<double> f(s.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = norm(s.nvec[i]);
    const double np = s.n0[i] + a;
    const double nm = s.n0[i] - a;
    f[i] = 0.5 * np * (std::log(np) - 1.0) + 0.5 * nm * (std::log(nm) - 1.0) + (s.n0[i] - C[i]) * s.V[i];
  }
  return trapezoid(f, grid.dx()) + field_energy(s.V, lambda_D2, grid.dx());
}

double entropy_scalar(const std::vector<double>& n0, const std::vector<double>& V, const std::vector<double>& C,
                      double lambda_D2, const Grid1D& grid) {
  std::vector<double> f(n0.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(n0[i] > 0.0)) throw ValidityError("n0 <= 0", static_cast<std::ptrdiff_t>(i));
    f[i] = n0[i] * (std::log(n0[i]) - 1.0) + (n0[i] - C[i]) * V[i];
  }
  return trapezoid(f, grid.dx()) + field_energy(V, lambda_D2, grid.dx());
}

double entropy_dissipation(const State& s, const Grid1D& grid) {
  require_valid(s);
  const double dx = grid.dx();
  const std::size_t nn = s.size();
  std::vector<double> np(nn), nm(nn), a(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    a[i] = norm(s.nvec[i]);
    np[i] = s.n0[i] + a[i];
    nm[i] = s.n0[i] - a[i];
  }

  double gradient_terms = 0.0;
  for (std::size_t f = 0; f + 1 < nn; ++f) {
    const double dV = s.V[f + 1] - s.V[f];
    const double gp = (std::log(np[f + 1]) - std::log(np[f]) + dV) / dx;
    const double gm = (std::log(nm[f + 1]) - std::log(nm[f]) + dV) / dx;
    gradient_terms += 0.5 * (0.5 * (np[f] + np[f + 1]) * gp * gp + 0.5 * (nm[f] + nm[f + 1]) * gm * gm);
  }
  gradient_terms *= dx;

  // Third term: normalized field, differenced only across faces with both ends resolved.
  constexpr double kTiny = 1e-12;
  std::vector<Vec3> unit(nn);
  for (std::size_t i = 0; i < nn; ++i) unit[i] = a[i] < kTiny ? Vec3{0.0, 0.0, 0.0} : (1.0 / a[i]) * s.nvec[i];
  std::vector<double> third(nn, 0.0);
  for (std::size_t i = 0; i < nn; ++i) {
    if (a[i] < kTiny) continue;
    Vec3 du{0.0, 0.0, 0.0};
    int faces = 0;
    if (i > 0 && a[i - 1] >= kTiny) {
      du += (1.0 / dx) * (unit[i] - unit[i - 1]);
      ++faces;
    }
    if (i + 1 < nn && a[i + 1] >= kTiny) {
      du += (1.0 / dx) * (unit[i + 1] - unit[i]);
      ++faces;
    }
    if (faces == 2) du = 0.5 * du;
    const Vec3& u = unit[i];
    const Vec3 curl{0.0, -du[2], du[1]};
    const double G = dot(du, du) + 2.0 * dot(u, curl) + 2.0 * dot(u, u);
    third[i] = 0.5 * a[i] * std::log(np[i] / nm[i]) * G;
  }
  return gradient_terms + trapezoid(third, dx);
}

GFunctional g_functional(const std::vector<Vec3>& u, const Grid1D& grid) {
  const double dx = grid.dx();
  GFunctional out;
  out.integrand.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Vec3 du = stencil::nodal_derivative(u, i, dx);
    const Vec3 curl{0.0, -du[2], du[1]};
    out.integrand[i] = dot(du, du) + 2.0 * dot(u[i], curl) + 2.0 * dot(u[i], u[i]);
  }
  out.integral = trapezoid(out.integrand, dx);
  return out;
}

double spin_norm(const State& s, const Grid1D& grid, double p) {
  if (!(p >= 1.0)) throw DomainError("spin_norm: p must be >= 1");
  std::vector<double> f(s.size());
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& n : s.nvec) m = std::max(m, norm(n));
    return m;
  }
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(norm(s.nvec[i]), p);
  return std::pow(trapezoid(f, grid.dx()), 1.0 / p);
}

DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& norms) {
  if (times.size() != norms.size()) throw DomainError("fit_decay_rate: size mismatch");
  if (times.size() < 5) throw DomainError("fit_decay_rate: need at least 5 samples");
  const std::size_t n = times.size();
  std::vector<double> y(n);
  double tm = 0.0;
  double ym = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(norms[k] > 0.0)) throw DomainError("fit_decay_rate: nonpositive norm");
    y[k] = std::log(norms[k]);
    tm += times[k];
    ym += y[k];
  }
  tm /= static_cast<double>(n);
  ym /= static_cast<double>(n);
  double stt = 0.0;
  double sty = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    stt += (times[k] - tm) * (times[k] - tm);
    sty += (times[k] - tm) * (y[k] - ym);
    syy += (y[k] - ym) * (y[k] - ym);
  }
  if (stt == 0.0) throw DomainError("fit_decay_rate: all times equal");
  const double slope = sty / stt;
  DecayFit fit;
  fit.kappa = -slope;
  double ssr = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = y[k] - (ym + slope * (times[k] - tm));
    ssr += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  return fit;
}

double relative_difference(const std::vector<double>& n0, const std::vector<double>& ref, const Grid1D& grid) {
  std::vector<double> num(n0.size());
  std::vector<double> den(n0.size());
  for (std::size_t i = 0; i < n0.size(); ++i) {
    num[i] = (n0[i] - ref[i]) * (n0[i] - ref[i]);
    den[i] = ref[i] * ref[i];
  }
  return std::sqrt(trapezoid(num, grid.dx()) / trapezoid(den, grid.dx()));
}

DiagnosticsRecord make_record(const State& s, const Device& device) {
  const auto& grid = device.grid();
  DiagnosticsRecord r;
  r.t = s.t;
  r.S = entropy(s, device.C(), device.params().lambda_D2, grid);
  r.D = entropy_dissipation(s, grid);
  r.l2_spin = spin_norm(s, grid, 2.0);
  r.linf_spin = spin_norm(s, grid, INFINITY);
  const auto summary = summarize(s);
  r.ratio_max = summary.max_ratio;
  r.min_n0 = summary.min_n0;
  r.max_n0 = *std::max_element(s.n0.begin(), s.n0.end());
  r.current_out = spindd::terminal_current(s, device);
  double sup = -INFINITY;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sup = std::max(sup, -(s.n0[i] - device.C()[i]) / device.params().lambda_D2);
  }
  r.sup_laplacian_V = sup;
  return r;
}

BoundReport linf_growth_bound_check(const Trajectory& traj, const Grid1D& grid, double lambda_D2,
                                    const std::vector<double>& C) {
  BoundReport report;
  if (traj.snapshots.empty()) return report;
  const State& first = traj.snapshots.front();
  const double t0 = first.t;
  const double init = spin_norm(first, grid, INFINITY);

  auto laplacian_sup = [&](const State& s) {
    double sup = -INFINITY;
    for (std::size_t i = 0; i < s.size(); ++i) sup = std::max(sup, -(s.n0[i] - C[i]) / lambda_D2);
    return sup;
  };

  double sup = laplacian_sup(first);
  std::size_t rec = 0;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const State& s = traj.snapshots[k];
    while (rec < traj.records.size() && traj.records[rec].t <= s.t) {
      sup = std::max(sup, traj.records[rec].sup_laplacian_V);
      ++rec;
    }
    sup = std::max(sup, laplacian_sup(s));
    const double value = spin_norm(s, grid, INFINITY);
    const double bound = init * std::exp(sup * (s.t - t0)) * (1.0 + 1e-6);
    if (value > bound) report.violations.push_back({k, s.t, value, bound});
  }
  return report;
}

std::pair<double, double> max_principle_bounds(const State& initial, const Device& device) {
  const auto& C = device.C();
  const std::size_t last = C.size() - 1;
  double M = std::max(C[0], C[last]);
  double m = std::min(C[0], C[last]);
  for (double v : initial.n0) {
    M = std::max(M, v);
    m = std::min(m, v);
  }
  for (double v : C) M = std::max(M, v);
  return {M, m};
}

BoundReport max_principle_check(const Trajectory& traj, double M, double m, double lambda_D2, double tol) {
  BoundReport report;
  const double t0 = traj.records.empty() ? 0.0 : traj.records.front().t;
  for (std::size_t k = 0; k < traj.records.size(); ++k) {
    const auto& r = traj.records[k];
    const double lower = m * std::exp(-(r.t - t0) / lambda_D2) - tol;
    if (r.min_n0 < lower) report.violations.push_back({k, r.t, r.min_n0, lower});
    if (r.max_n0 > M + tol) report.violations.push_back({k, r.t, r.max_n0, M + tol});
  }
  return report;
}

std::vector<double> entropy_rate(const std::vector<DiagnosticsRecord>& records) {
  const std::size_t n = records.size();
  std::vector<double> rate(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h1 = records[k].t - records[k - 1].t;
    const double h2 = records[k + 1].t - records[k].t;
    rate[k] = -h2 / (h1 * (h1 + h2)) * records[k - 1].S + (h2 - h1) / (h1 * h2) * records[k].S +
              h1 / (h2 * (h1 + h2)) * records[k + 1].S;
  }
  return rate;
}

double terminal_current(const State& s, const Device& device) { return spindd::terminal_current(s, device); }

std::vector<IvRow> iv_sweep(const std::vector<double>& biases, const Device& base, const StepperConfig& config,
                            const std::vector<ModelKind>& models, double stall_tol, unsigned threads) {
  for (double v : biases) {
    if (!std::isfinite(v)) throw ConfigError("bias values must be finite");
  }
  std::vector<IvRow> rows;
  for (double v : biases) {
    for (ModelKind m : models) {
      IvRow r;
      r.V_A = v;
      r.model = m;
      rows.push_back(r);
    }
  }

  if (threads == 0) {
    if (const char* env = std::getenv("SPIN_DD_THREADS")) threads = static_cast<unsigned>(std::atoi(env));
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = std::min<unsigned>(threads, static_cast<unsigned>(rows.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < rows.size(); k = next++) {
      IvRow& r = rows[k];
      try {
        ModelParams p = base.params();
        p.V_A = r.V_A;
        p.model = r.model;
        const Device dev(base.grid(), p, base.doping());
        const State init = initial_state(dev);
        const SteadyResult res = run_to_steady_state(init, dev, config, stall_tol);
        r.current = spindd::terminal_current(res.state, dev);
        r.steady = res.steady;
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace spindd::diagnostics
