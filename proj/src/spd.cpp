#include "kts/spd.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

namespace kts {

namespace detail {

bool is_symmetric(const Eigen::MatrixXd& m, double rel_tol) {
  const double max_abs = m.cwiseAbs().maxCoeff();
  const double max_asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  return max_asym <= rel_tol * max_abs || max_asym == 0.0;
}

int triangular_dim(int n) {
  // solve d(d+1)/2 == n
  const int d = static_cast<int>((std::sqrt(8.0 * n + 1.0) - 1.0) / 2.0 + 0.5);
  return (d > 0 && d * (d + 1) / 2 == n) ? d : -1;
}

namespace {

void check_square(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw DimensionMismatch(std::string(what) + ": expected a square matrix, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

}  // namespace detail

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  detail::check_square(m, "SymMatrix");
  if (!detail::is_symmetric(m)) {
    throw NotSymmetric("SymMatrix: input exceeds the relative asymmetry tolerance");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::zero(int dim) {
  if (dim < 1) throw DimensionMismatch("SymMatrix::zero: dim must be positive");
  return SymMatrix(Eigen::MatrixXd::Zero(dim, dim), Unchecked{});
}

SpdMatrix::SpdMatrix(const Eigen::MatrixXd& m) {
  detail::check_square(m, "SpdMatrix");
  if (!detail::is_symmetric(m)) {
    throw NotSymmetric("SpdMatrix: input exceeds the relative asymmetry tolerance");
  }
  m_ = 0.5 * (m + m.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(m_);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("SpdMatrix: matrix is not positive definite");
  }
}

SpdMatrix::SpdMatrix(const SymMatrix& m) : SpdMatrix(m.matrix()) {}

SpdMatrix SpdMatrix::identity(int dim) {
  if (dim < 1) throw DimensionMismatch("SpdMatrix::identity: dim must be positive");
  return SpdMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

TangentVector::TangentVector(const Eigen::VectorXd& coords) : v_(coords) {
  dim_ = detail::triangular_dim(static_cast<int>(coords.size()));
  if (dim_ < 0) {
    throw BadLength("TangentVector: length " + std::to_string(coords.size()) +
                    " is not d(d+1)/2 for any d");
  }
}

}  // namespace kts
