#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "kts/spd.hpp"

namespace kts {

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
/// Throws NonConvergence when the solver fails (ill-formed input).
SpectralDecomposition spectral_decompose(const SymMatrix& m);

/// Matrix exponential U exp(S) U^T of a symmetric matrix. The result is
/// positive definite by construction. Throws Overflow when any exp(lambda)
/// is non-finite.
SpdMatrix matrix_exp(const SymMatrix& m);

/// Matrix logarithm U log(S) U^T of an SPD matrix; inverse of matrix_exp.
/// Eigenvalues at or below 1e-12 times the largest eigenvalue are rejected
/// as NotPositiveDefinite (rank deficiency rather than rounding noise).
SymMatrix matrix_log(const SpdMatrix& m);

/// (X^{1/2}, X^{-1/2}) from a single spectral decomposition.
std::pair<SpdMatrix, SpdMatrix> spd_sqrt_pair(const SpdMatrix& x);

/// Exponential map on Sym_d^+:
///   exp_X(y) = X^{1/2} exp(X^{-1/2} y X^{-1/2}) X^{1/2}.
SpdMatrix exp_map(const SpdMatrix& pole, const SymMatrix& y);

/// Logarithm map on Sym_d^+, inverse of exp_map:
///   log_X(Y) = X^{1/2} log(X^{-1/2} Y X^{-1/2}) X^{1/2}.
SymMatrix log_map(const SpdMatrix& pole, const SpdMatrix& y);

/// Geodesic distance: sqrt(trace(log^2(X^{-1/2} Y X^{-1/2}))).
double geodesic_distance(const SpdMatrix& x, const SpdMatrix& y);

/// Karcher mean of a non-empty point set, by fixed-point iteration
///   mu <- exp_mu(mean_i log_mu(X_i)).
/// Stops when the Frobenius norm of the averaged tangent update drops below
/// tol, or after max_iter iterations. Throws NonConvergence only when
/// max_iter is reached with the update norm still above 100*tol.
SpdMatrix karcher_mean(const std::vector<SpdMatrix>& points, double tol = 1e-6,
                       int max_iter = 50);

/// Minimal coordinates of a symmetric matrix: diagonal entries as-is, each
/// strict-upper entry scaled by sqrt(2), row-major over the upper triangle.
/// Preserves the Frobenius norm.
TangentVector vectorize(const SymMatrix& m);

/// Exact inverse of vectorize.
SymMatrix unvectorize(const TangentVector& v);

/// Process-wide count of log_map evaluations (free function and PoleCache).
/// Instrumentation for tests that assert a code path never maps to a
/// tangent space.
std::uint64_t log_map_call_count();

/// Precomputed X^{1/2} / X^{-1/2} factors of a fixed pole, for repeated
/// maps and distances against it.
class PoleCache {
 public:
  explicit PoleCache(const SpdMatrix& pole);

  const SpdMatrix& pole() const { return pole_; }
  int dim() const { return pole_.dim(); }

  SymMatrix log_map(const SpdMatrix& y) const;
  SpdMatrix exp_map(const SymMatrix& y) const;
  double distance(const SpdMatrix& y) const;

 private:
  SpdMatrix pole_;
  Eigen::MatrixXd sqrt_;
  Eigen::MatrixXd inv_sqrt_;
};

namespace detail {

/// U f(S) U^T for an already-symmetrized raw matrix.
SpectralDecomposition decompose_raw(const Eigen::MatrixXd& sym);

}  // namespace detail

}  // namespace kts
