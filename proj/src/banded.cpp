#include "spindd/banded.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "spindd/core.hpp"

namespace spindd {

BandMatrix::BandMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1), ab_(ldab_ * n, 0.0), piv_(n, 0) {}

void BandMatrix::set_zero() {
  std::fill(ab_.begin(), ab_.end(), 0.0);
  factored_ = false;
}

std::vector<double> BandMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j0 = i > kl_ ? i - kl_ : 0;
    const std::size_t j1 = std::min(n_ - 1, i + ku_);
    for (std::size_t j = j0; j <= j1; ++j) y[i] += (*this)(i, j) * x[j];
  }
  return y;
}

void BandMatrix::factorize() {
  const std::size_t kv = kl_ + ku_;  // upper bandwidth of U after pivoting
  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t last_row = std::min(n_ - 1, k + kl_);
    std::size_t p = k;
    double best = std::abs((*this)(k, k));
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      const double v = std::abs((*this)(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    piv_[k] = p;
    if (best == 0.0) throw SolverError("band LU: singular pivot", 0.0);
    const std::size_t last_col = std::min(n_ - 1, k + kv);
    if (p != k) {
      for (std::size_t j = k; j <= last_col; ++j) std::swap((*this)(k, j), (*this)(p, j));
    }
    const double inv = 1.0 / (*this)(k, k);
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      const double l = (*this)(i, k) * inv;
      (*this)(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j <= last_col; ++j) (*this)(i, j) -= l * (*this)(k, j);
    }
  }
  factored_ = true;
}

void BandMatrix::solve(std::span<double> b) const {
  if (!factored_) throw SolverError("band LU: solve before factorize", 0.0);
  const std::size_t kv = kl_ + ku_;
  for (std::size_t k = 0; k < n_; ++k) {
    if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
    const std::size_t last_row = std::min(n_ - 1, k + kl_);
    for (std::size_t i = k + 1; i <= last_row; ++i) b[i] -= (*this)(i, k) * b[k];
  }
  for (std::size_t kk = n_; kk-- > 0;) {
    const std::size_t last_col = std::min(n_ - 1, kk + kv);
    double s = b[kk];
    for (std::size_t j = kk + 1; j <= last_col; ++j) s -= (*this)(kk, j) * b[j];
    b[kk] = s / (*this)(kk, kk);
  }
}

std::vector<double> solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> super, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n, 0.0), x(rhs.begin(), rhs.end());
  double denom = diag[0];
  if (denom == 0.0) throw SolverError("tridiagonal solve: zero pivot", 0.0);
  c[0] = n > 1 ? super[0] / denom : 0.0;
  x[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - sub[i] * c[i - 1];
    if (denom == 0.0) throw SolverError("tridiagonal solve: zero pivot", 0.0);
    c[i] = i + 1 < n ? super[i] / denom : 0.0;
    x[i] = (x[i] - sub[i] * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

}  // namespace spindd
