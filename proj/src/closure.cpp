#include "spindd/closure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace spindd::closure {

namespace {

// (atanh(y)/y - 1)/y^2 = sum_{k>=1} y^{2k-2}/(2k+1), summed without cancellation.
double atanh_ratio_tail(double u) {
  double sum = 0.0;
  double term = 1.0;  // u^{k-1}
  for (int k = 1; k < 200; ++k) {
    const double c = term / (2.0 * k + 1.0);
    sum += c;
    if (c < 1e-18 * sum) break;
    term *= u;
  }
  return sum;
}

// sinh(x)/x and (cosh(x) - sinh(x)/x)/x^2, both even in x.
struct SinhRatios {
  double s;  // sinh(x)/x
  double c;  // (cosh(x) - sinh(x)/x)/x^2
};

SinhRatios sinh_ratios(double x) {
  if (x < 0.5) {
    const double u = x * x;
    // sinh(x)/x = sum u^k/(2k+1)!,  c = sum u^{k-1} (2k)/(2k+1)!
    double s = 1.0, c = 0.0;
    double fact = 1.0;  // (2k+1)!
    double pw = 1.0;    // u^{k-1}
    for (int k = 1; k < 30; ++k) {
      fact *= (2.0 * k) * (2.0 * k + 1.0);
      const double cs = pw * u / fact;
      const double cc = pw * (2.0 * k) / fact;
      s += cs;
      c += cc;
      if (cc < 1e-18 * c) break;
      pw *= u;
    }
    return {s, c};
  }
  const double s = std::sinh(x) / x;
  return {s, (std::cosh(x) - s) / (x * x)};
}

}  // namespace

double phi_series(double y) {
  const double u = y * y;
  const double tail = atanh_ratio_tail(u);  // (S - 1)/u with S = atanh(y)/y
  return tail / (1.0 + u * tail);
}

double phi_closed_form(double y) {
  return (1.0 - 2.0 * y / (std::log1p(y) - std::log1p(-y))) / (y * y);
}

double phi(double y) {
  if (!(y >= 0.0 && y < 1.0)) {
    std::ostringstream os;
    os << "phi: argument must lie in [0,1), got " << y;
    throw DomainError(os.str());
  }
  return y < kPhiSeriesThreshold ? phi_series(y) : phi_closed_form(y);
}

Vec3 spin_mobility(const Vec3& v, double lambda) {
  const double r = norm(v);
  if (!(r < 1.0)) {
    std::ostringstream os;
    os << "spin mobility: |v| = " << r << " outside the validity ball |v| < 1";
    throw DomainError(os.str());
  }
  if (r == 0.0) return {0.0, 0.0, 0.0};
  return (lambda * phi(r)) * v;
}

EquilibriumMultipliers lagrange_multipliers(double n0, const Vec3& nvec) {
  const double r = norm(nvec);
  if (!(n0 > 0.0) || !(r < n0)) {
    std::ostringstream os;
    os << "lagrange multipliers need 0 <= |n| < n0, got n0 = " << n0 << ", |n| = " << r;
    throw DomainError(os.str());
  }
  EquilibriumMultipliers m;
  m.A = -std::log(std::sqrt((n0 - r) * (n0 + r)) / (2.0 * std::numbers::pi));
  if (r > 0.0) {
    // log sqrt((n0+|n|)/(n0-|n|)) = atanh(|n|/n0)
    m.B = (-std::atanh(r / n0) / r) * nvec;
  }
  return m;
}

PauliCoeffs equilibrium_g0(const Momentum& p, const EquilibriumMultipliers& mult) {
  const double w = std::exp(-(mult.A + 0.5 * (p[0] * p[0] + p[1] * p[1])));
  const double b = norm(mult.B);
  const auto r = sinh_ratios(b);
  PauliCoeffs g;
  g.a0 = w * std::cosh(b);
  g.avec = (-w * r.s) * mult.B;
  return g;
}

PauliCoeffs equilibrium_g1(const Momentum& p, const EquilibriumMultipliers& mult, const GradB& gradB,
                           double gamma) {
  if (!(gamma > 0.0)) throw DomainError("equilibrium_g1: gamma must be > 0");
  const Vec3 p3{p[0], p[1], 0.0};
  const Vec3& B = mult.B;
  const double w = gamma * std::exp(-(mult.A + 0.5 * (p[0] * p[0] + p[1] * p[1])));
  const auto r = sinh_ratios(norm(B));

  // (p . grad) B
  Vec3 pgradB{0.0, 0.0, 0.0};
  for (int k = 0; k < 3; ++k) pgradB += p3[k] * gradB[k];

  // [ (cosh - sinh/|B|) B (x) B/|B|^2 + (sinh/|B|) I ] p, with (cosh - sinh/|B|)/|B|^2 = r.c
  const Vec3 linear = (r.c * dot(B, p3)) * B + r.s * p3;
  const Vec3 twist = (r.c / (2.0 * gamma)) * cross(pgradB, B);

  PauliCoeffs g;
  g.a0 = w * r.s * dot(B, p3);
  g.avec = (-w) * (linear + twist);
  return g;
}

GaussHermite gauss_hermite(int order) {
  if (order < 1) throw DomainError("gauss_hermite: order must be >= 1");
  // Newton iteration on orthonormal Hermite recurrences.
  const int n = order;
  GaussHermite q;
  q.nodes.assign(static_cast<std::size_t>(n), 0.0);
  q.weights.assign(static_cast<std::size_t>(n), 0.0);
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * q.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * q.nodes[1];
    } else {
      z = 2.0 * z - q.nodes[static_cast<std::size_t>(i - 2)];
    }
    double pp = 0.0;
    for (int its = 0; its < 100; ++its) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    const auto hi = static_cast<std::size_t>(i);
    const auto lo = static_cast<std::size_t>(n - 1 - i);
    q.nodes[hi] = z;
    q.nodes[lo] = -z;
    q.weights[hi] = 2.0 / (pp * pp);
    q.weights[lo] = q.weights[hi];
  }
  return q;
}

namespace {

PauliCoeffs integrate_g0(const EquilibriumMultipliers& mult, int order) {
  const auto q = gauss_hermite(order);
  const double s2 = std::numbers::sqrt2;
  PauliCoeffs sum;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    for (std::size_t j = 0; j < q.nodes.size(); ++j) {
      const Momentum p{s2 * q.nodes[i], s2 * q.nodes[j]};
      const auto g = equilibrium_g0(p, mult);
      // e^{-|p|^2/2} dp = 2 e^{-|xi|^2} dxi
      const double w = 2.0 * q.weights[i] * q.weights[j] * std::exp(0.5 * (p[0] * p[0] + p[1] * p[1]));
      sum.a0 += w * g.a0;
      sum.avec += w * g.avec;
    }
  }
  return sum;
}

}  // namespace

MomentCheck moment_check(double n0, const Vec3& nvec, int quad_order) {
  if (quad_order < 1) throw DomainError("moment_check: quadrature order must be >= 1");
  const auto mult = lagrange_multipliers(n0, nvec);
  const auto m = integrate_g0(mult, quad_order);
  const auto m2 = integrate_g0(mult, quad_order + 2);
  MomentCheck r;
  r.m0 = m.a0;
  r.mvec = m.avec;
  const Vec3 dv = m.avec - m2.avec;
  const double scale = std::hypot(n0, norm(nvec));
  r.rel_error_estimate = std::hypot(m.a0 - m2.a0, norm(dv)) / scale;
  r.low_order_warning = quad_order < 10;
  return r;
}

PauliCoeffs polarization_sandwich(const PauliCoeffs& a, double zeta, const Vec3& omega) {
  if (!(zeta >= 0.0 && zeta < 1.0)) {
    std::ostringstream os;
    os << "polarization sandwich: zeta must lie in [0,1), got " << zeta;
    throw DomainError(os.str());
  }
  const double inv = 1.0 / ((1.0 - zeta) * (1.0 + zeta));
  const double root = std::sqrt((1.0 - zeta) * (1.0 + zeta));
  const double wa = dot(omega, a.avec);
  // (w (x) w + root (I - w (x) w)) a = root a + (1 - root) (w.a) w
  const Vec3 mixed = root * a.avec + ((1.0 - root) * wa) * omega;
  PauliCoeffs r;
  r.a0 = inv * (a.a0 - zeta * wa);
  r.avec = inv * (mixed - (zeta * a.a0) * omega);
  return r;
}

}  // namespace spindd::closure
