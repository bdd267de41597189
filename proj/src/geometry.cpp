#include "kts/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <string>

namespace kts {

namespace {

std::atomic<std::uint64_t> g_log_map_calls{0};

// Relative floor below which an eigenvalue is treated as rank deficiency.
constexpr double kEigenvalueFloor = 1e-12;

void check_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimensions " + std::to_string(a) + " and " +
                            std::to_string(b) + " differ");
  }
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Eigenvalues of an SPD-by-contract matrix, with the relative floor applied.
Eigen::VectorXd positive_eigvals(const SpectralDecomposition& d, const char* what) {
  const double largest = d.eigvals(d.eigvals.size() - 1);
  const double floor = kEigenvalueFloor * largest;
  if (!(d.eigvals(0) > floor) || !(largest > 0.0)) {
    throw NotPositiveDefinite(std::string(what) + ": eigenvalue " + std::to_string(d.eigvals(0)) +
                              " at or below the relative floor");
  }
  return d.eigvals;
}

Eigen::MatrixXd log_of_whitened(const Eigen::MatrixXd& whitened, const char* what) {
  const SpectralDecomposition d = detail::decompose_raw(symmetrized(whitened));
  const Eigen::VectorXd ev = positive_eigvals(d, what);
  return symmetrized(d.eigvecs * ev.array().log().matrix().asDiagonal() * d.eigvecs.transpose());
}

Eigen::MatrixXd exp_of_sym(const Eigen::MatrixXd& sym, const char* what) {
  const SpectralDecomposition d = detail::decompose_raw(sym);
  const Eigen::VectorXd ev = d.eigvals.array().exp().matrix();
  if (!ev.allFinite()) {
    throw Overflow(std::string(what) + ": exp of eigenvalue is not finite");
  }
  return symmetrized(d.eigvecs * ev.asDiagonal() * d.eigvecs.transpose());
}

struct SqrtPairRaw {
  Eigen::MatrixXd sqrt;
  Eigen::MatrixXd inv_sqrt;
};

SqrtPairRaw sqrt_pair_raw(const Eigen::MatrixXd& spd, const char* what) {
  const SpectralDecomposition d = detail::decompose_raw(spd);
  const Eigen::VectorXd ev = positive_eigvals(d, what);
  const Eigen::VectorXd r = ev.array().sqrt().matrix();
  SqrtPairRaw out;
  out.sqrt = symmetrized(d.eigvecs * r.asDiagonal() * d.eigvecs.transpose());
  out.inv_sqrt =
      symmetrized(d.eigvecs * r.array().inverse().matrix().asDiagonal() * d.eigvecs.transpose());
  return out;
}

}  // namespace

namespace detail {

SpectralDecomposition decompose_raw(const Eigen::MatrixXd& sym) {
  if (!sym.allFinite()) {
    throw NonConvergence("spectral_decompose: input has non-finite entries");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NonConvergence("spectral_decompose: eigen-solver failed to converge");
  }
  return SpectralDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace detail

SpectralDecomposition spectral_decompose(const SymMatrix& m) {
  return detail::decompose_raw(m.matrix());
}

SpdMatrix matrix_exp(const SymMatrix& m) {
  return SpdMatrix(exp_of_sym(m.matrix(), "matrix_exp"));
}

SymMatrix matrix_log(const SpdMatrix& m) {
  return sym_from_symmetrized(log_of_whitened(m.matrix(), "matrix_log"));
}

std::pair<SpdMatrix, SpdMatrix> spd_sqrt_pair(const SpdMatrix& x) {
  SqrtPairRaw p = sqrt_pair_raw(x.matrix(), "spd_sqrt_pair");
  return {SpdMatrix(p.sqrt), SpdMatrix(p.inv_sqrt)};
}

SpdMatrix exp_map(const SpdMatrix& pole, const SymMatrix& y) {
  check_same_dim(pole.dim(), y.dim(), "exp_map");
  const SqrtPairRaw p = sqrt_pair_raw(pole.matrix(), "exp_map");
  const Eigen::MatrixXd inner =
      exp_of_sym(symmetrized(p.inv_sqrt * y.matrix() * p.inv_sqrt), "exp_map");
  return SpdMatrix(symmetrized(p.sqrt * inner * p.sqrt));
}

SymMatrix log_map(const SpdMatrix& pole, const SpdMatrix& y) {
  check_same_dim(pole.dim(), y.dim(), "log_map");
  g_log_map_calls.fetch_add(1, std::memory_order_relaxed);
  const SqrtPairRaw p = sqrt_pair_raw(pole.matrix(), "log_map");
  const Eigen::MatrixXd inner = log_of_whitened(p.inv_sqrt * y.matrix() * p.inv_sqrt, "log_map");
  return sym_from_symmetrized(symmetrized(p.sqrt * inner * p.sqrt));
}

double geodesic_distance(const SpdMatrix& x, const SpdMatrix& y) {
  check_same_dim(x.dim(), y.dim(), "geodesic_distance");
  const SqrtPairRaw p = sqrt_pair_raw(x.matrix(), "geodesic_distance");
  const Eigen::MatrixXd l =
      log_of_whitened(p.inv_sqrt * y.matrix() * p.inv_sqrt, "geodesic_distance");
  return l.norm();
}

SpdMatrix karcher_mean(const std::vector<SpdMatrix>& points, double tol, int max_iter) {
  if (points.empty()) throw EmptyInput("karcher_mean: empty point set");
  if (!(tol > 0.0)) throw Error("E_BAD_ARGUMENT", "karcher_mean: tol must be positive");
  const int d = points[0].dim();
  for (const SpdMatrix& x : points) check_same_dim(d, x.dim(), "karcher_mean");

  // Arithmetic mean is SPD and a serviceable starting point.
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
  for (const SpdMatrix& x : points) acc += x.matrix();
  Eigen::MatrixXd mu = symmetrized(acc / static_cast<double>(points.size()));

  double update_norm = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    const SqrtPairRaw p = sqrt_pair_raw(mu, "karcher_mean");
    Eigen::MatrixXd tangent_sum = Eigen::MatrixXd::Zero(d, d);
    for (const SpdMatrix& x : points) {
      tangent_sum += log_of_whitened(p.inv_sqrt * x.matrix() * p.inv_sqrt, "karcher_mean");
    }
    const Eigen::MatrixXd avg = tangent_sum / static_cast<double>(points.size());
    // Norm of the averaged tangent update in the ambient space.
    update_norm = (p.sqrt * avg * p.sqrt).norm();
    if (update_norm < tol) return SpdMatrix(mu);
    mu = symmetrized(p.sqrt * exp_of_sym(symmetrized(avg), "karcher_mean") * p.sqrt);
  }
  if (update_norm > 100.0 * tol) {
    throw NonConvergence("karcher_mean: update norm " + std::to_string(update_norm) + " after " +
                         std::to_string(max_iter) + " iterations (pathological spread)");
  }
  return SpdMatrix(mu);
}

TangentVector vectorize(const SymMatrix& m) {
  const int d = m.dim();
  Eigen::VectorXd v(d * (d + 1) / 2);
  const double root2 = std::sqrt(2.0);
  int idx = 0;
  for (int i = 0; i < d; ++i) {
    v(idx++) = m(i, i);
    for (int j = i + 1; j < d; ++j) v(idx++) = root2 * m(i, j);
  }
  return TangentVector(v);
}

SymMatrix unvectorize(const TangentVector& v) {
  const int d = v.dim();
  Eigen::MatrixXd m(d, d);
  const double inv_root2 = 1.0 / std::sqrt(2.0);
  int idx = 0;
  for (int i = 0; i < d; ++i) {
    m(i, i) = v.coords()(idx++);
    for (int j = i + 1; j < d; ++j) {
      const double off = inv_root2 * v.coords()(idx++);
      m(i, j) = off;
      m(j, i) = off;
    }
  }
  return sym_from_symmetrized(std::move(m));
}

std::uint64_t log_map_call_count() { return g_log_map_calls.load(std::memory_order_relaxed); }

PoleCache::PoleCache(const SpdMatrix& pole) : pole_(pole) {
  SqrtPairRaw p = sqrt_pair_raw(pole.matrix(), "PoleCache");
  sqrt_ = std::move(p.sqrt);
  inv_sqrt_ = std::move(p.inv_sqrt);
}

SymMatrix PoleCache::log_map(const SpdMatrix& y) const {
  check_same_dim(dim(), y.dim(), "PoleCache::log_map");
  g_log_map_calls.fetch_add(1, std::memory_order_relaxed);
  const Eigen::MatrixXd inner =
      log_of_whitened(inv_sqrt_ * y.matrix() * inv_sqrt_, "PoleCache::log_map");
  return sym_from_symmetrized(symmetrized(sqrt_ * inner * sqrt_));
}

SpdMatrix PoleCache::exp_map(const SymMatrix& y) const {
  check_same_dim(dim(), y.dim(), "PoleCache::exp_map");
  const Eigen::MatrixXd inner =
      exp_of_sym(symmetrized(inv_sqrt_ * y.matrix() * inv_sqrt_), "PoleCache::exp_map");
  return SpdMatrix(symmetrized(sqrt_ * inner * sqrt_));
}

double PoleCache::distance(const SpdMatrix& y) const {
  check_same_dim(dim(), y.dim(), "PoleCache::distance");
  const Eigen::MatrixXd l =
      log_of_whitened(inv_sqrt_ * y.matrix() * inv_sqrt_, "PoleCache::distance");
  return l.norm();
}

}  // namespace kts
