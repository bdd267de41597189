#pragma once

#include <Eigen/Dense>

#include "kts/error.hpp"

namespace kts {

/// Symmetric d x d matrix, not necessarily definite. Construction validates
/// symmetry to a relative tolerance and stores the symmetrized (M + M^T)/2
/// form, so downstream spectral code never sees rounding asymmetry.
class SymMatrix {
 public:
  explicit SymMatrix(const Eigen::MatrixXd& m);

  static SymMatrix zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  struct Unchecked {};
  SymMatrix(const Eigen::MatrixXd& m, Unchecked) : m_(m) {}

  Eigen::MatrixXd m_;

  friend class SpdMatrix;
  friend SymMatrix sym_from_symmetrized(Eigen::MatrixXd m);
};

/// A point on Sym_d^+: symmetric positive-definite d x d matrix.
/// Positive definiteness is checked at construction (Cholesky), symmetry as
/// for SymMatrix.
class SpdMatrix {
 public:
  explicit SpdMatrix(const Eigen::MatrixXd& m);
  explicit SpdMatrix(const SymMatrix& m);

  static SpdMatrix identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  /// View this point as a plain symmetric matrix (e.g. for vectorize).
  SymMatrix as_sym() const { return SymMatrix(m_, SymMatrix::Unchecked{}); }

 private:
  Eigen::MatrixXd m_;
};

/// Minimal coordinates of a symmetric matrix: length d(d+1)/2, with
/// off-diagonal entries scaled by sqrt(2) so the Euclidean norm equals the
/// Frobenius norm of the matrix.
class TangentVector {
 public:
  explicit TangentVector(const Eigen::VectorXd& coords);

  int dim() const { return dim_; }
  const Eigen::VectorXd& coords() const { return v_; }
  int size() const { return static_cast<int>(v_.size()); }

 private:
  Eigen::VectorXd v_;
  int dim_;
};

/// Eigenpairs of a symmetric matrix: m = U diag(eigvals) U^T,
/// eigvals ascending.
struct SpectralDecomposition {
  Eigen::VectorXd eigvals;
  Eigen::MatrixXd eigvecs;
};

namespace detail {

/// Symmetry check shared by SymMatrix/SpdMatrix: max |a_ij - a_ji| must not
/// exceed tol * max |a_ij|.
bool is_symmetric(const Eigen::MatrixXd& m, double rel_tol = 1e-10);

/// Number of rows d such that d(d+1)/2 == n, or -1 if none.
int triangular_dim(int n);

}  // namespace detail

/// Wrap an already-symmetric matrix without re-validating. Internal use by
/// geometry code whose outputs are symmetric by construction.
inline SymMatrix sym_from_symmetrized(Eigen::MatrixXd m) {
  return SymMatrix(std::move(m), SymMatrix::Unchecked{});
}

}  // namespace kts
