#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spindd {

/// Square band matrix with kl sub- and ku super-diagonals, factorized in place
/// by Gaussian elimination with partial pivoting (LAPACK gbtrf layout: the
/// factor needs kl extra super-diagonals for fill-in).
class BandMatrix {
 public:
  BandMatrix(std::size_t n, std::size_t kl, std::size_t ku);

  std::size_t size() const noexcept { return n_; }
  std::size_t lower() const noexcept { return kl_; }
  std::size_t upper() const noexcept { return ku_; }

  /// True when (i, j) lies inside the band.
  bool in_band(std::size_t i, std::size_t j) const noexcept {
    return j + kl_ >= i && i + ku_ >= j;
  }
  double& operator()(std::size_t i, std::size_t j) { return ab_[index(i, j)]; }
  double operator()(std::size_t i, std::size_t j) const { return ab_[index(i, j)]; }

  void set_zero();
  /// y = A x (before factorization only).
  std::vector<double> multiply(std::span<const double> x) const;

  /// LU-factorizes in place. Throws SolverError on an exactly singular pivot.
  void factorize();
  /// Solves A x = b in place using the factorization.
  void solve(std::span<double> b) const;

 private:
  std::size_t index(std::size_t i, std::size_t j) const noexcept {
    // row (kl + ku + i - j) of the (2kl+ku+1) x n band storage, column j
    return j * ldab_ + (kl_ + ku_ + i - j);
  }

  std::size_t n_, kl_, ku_, ldab_;
  std::vector<double> ab_;
  std::vector<std::size_t> piv_;
  bool factored_ = false;
};

/// Thomas algorithm for a tridiagonal system; sub[0] and super[n-1] unused.
std::vector<double> solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> super, std::span<const double> rhs);

}  // namespace spindd
