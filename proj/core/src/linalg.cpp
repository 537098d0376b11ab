#include "chanres/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace chanres {

bool is_hermitian(const Matrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix partial_trace_first(const Matrix& m, int da, int db) {
  if (m.rows() != Eigen::Index(da) * db || m.cols() != m.rows())
    throw DimensionMismatch("partial_trace_first: bad dimensions");
  Matrix out = Matrix::Zero(db, db);
  for (int a = 0; a < da; ++a)
    out += m.block(a * db, a * db, db, db);
  return out;
}

Matrix partial_trace_second(const Matrix& m, int da, int db) {
  if (m.rows() != Eigen::Index(da) * db || m.cols() != m.rows())
    throw DimensionMismatch("partial_trace_second: bad dimensions");
  Matrix out = Matrix::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) {
      Complex s = 0.0;
      for (int b = 0; b < db; ++b) s += m(i * db + b, j * db + b);
      out(i, j) = s;
    }
  return out;
}

namespace {

// Maps a multi-index over dims to a flat row-major index.
int flatten(const std::vector<int>& idx, const std::vector<int>& dims) {
  int flat = 0;
  for (size_t k = 0; k < dims.size(); ++k) flat = flat * dims[k] + idx[k];
  return flat;
}

}  // namespace

namespace {

// new flat index -> old flat index for the factor reordering where
// result factor p is source factor perm[p].
std::vector<int> factor_index_map(const std::vector<int>& dims,
                                  const std::vector<int>& perm) {
  const size_t k = dims.size();
  if (perm.size() != k) throw DimensionMismatch("permute_factors: perm size");
  Eigen::Index total = 1;
  for (int d : dims) total *= d;

  std::vector<int> new_dims(k);
  for (size_t p = 0; p < k; ++p) new_dims[p] = dims[perm[p]];

  std::vector<int> map(total);
  std::vector<int> idx(k, 0);
  for (Eigen::Index flat_new = 0; flat_new < total; ++flat_new) {
    int rem = int(flat_new);
    for (size_t p = k; p-- > 0;) {
      idx[p] = rem % new_dims[p];
      rem /= new_dims[p];
    }
    std::vector<int> old_idx(k);
    for (size_t p = 0; p < k; ++p) old_idx[perm[p]] = idx[p];
    map[flat_new] = flatten(old_idx, dims);
  }
  return map;
}

}  // namespace

Matrix permute_factors(const Matrix& m, const std::vector<int>& dims,
                       const std::vector<int>& perm) {
  std::vector<int> map = factor_index_map(dims, perm);
  const Eigen::Index total = Eigen::Index(map.size());
  if (m.rows() != total || m.cols() != total)
    throw DimensionMismatch("permute_factors: matrix size");
  Matrix out(total, total);
  for (Eigen::Index i = 0; i < total; ++i)
    for (Eigen::Index j = 0; j < total; ++j)
      out(i, j) = m(map[i], map[j]);
  return out;
}

Matrix factor_permutation_unitary(const std::vector<int>& dims,
                                  const std::vector<int>& perm) {
  std::vector<int> map = factor_index_map(dims, perm);
  const Eigen::Index total = Eigen::Index(map.size());
  Matrix p = Matrix::Zero(total, total);
  // Conjugation by this matrix equals permute_factors on operators.
  for (Eigen::Index i = 0; i < total; ++i) p(i, map[i]) = 1.0;
  return p;
}

double trace_norm_hermitian(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double operator_norm_hermitian(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix inverse_sqrt_on_support(const Matrix& psd, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(psd);
  Vector inv = Vector::Zero(psd.rows());
  for (Eigen::Index i = 0; i < psd.rows(); ++i) {
    double lam = es.eigenvalues()(i);
    if (lam >= cutoff) inv(i) = 1.0 / std::sqrt(lam);
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix support_projector(const Matrix& psd, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(psd);
  Vector ind = Vector::Zero(psd.rows());
  for (Eigen::Index i = 0; i < psd.rows(); ++i)
    if (es.eigenvalues()(i) >= cutoff) ind(i) = 1.0;
  return es.eigenvectors() * ind.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix hermitian_matrix_log(const Matrix& psd_full_rank) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(psd_full_rank);
  Vector lg(psd_full_rank.rows());
  for (Eigen::Index i = 0; i < psd_full_rank.rows(); ++i) {
    double lam = es.eigenvalues()(i);
    if (lam <= 0.0)
      throw std::domain_error("hermitian_matrix_log: non-positive eigenvalue");
    lg(i) = std::log(lam);
  }
  return es.eigenvectors() * lg.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix hermitian_matrix_exp(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector ex(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    ex(i) = std::exp(es.eigenvalues()(i));
  return es.eigenvectors() * ex.asDiagonal() * es.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------

double Rng::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(engine_);
}

double Rng::gaussian() {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(engine_);
}

Complex Rng::complex_gaussian() {
  double re = gaussian();
  double im = gaussian();
  return Complex(re, im) / std::sqrt(2.0);
}

int Rng::uniform_int(int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  return dist(engine_);
}

Matrix Rng::ginibre(int rows, int cols) {
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = complex_gaussian();
  return g;
}

Matrix Rng::haar_unitary(int d) {
  Matrix g = ginibre(d, d);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases so the distribution is Haar.
  for (int j = 0; j < d; ++j) {
    Complex rjj = r(j, j);
    double a = std::abs(rjj);
    q.col(j) *= (a > 0) ? rjj / a : Complex(1.0, 0.0);
  }
  return q;
}

Matrix Rng::random_density(int d) {
  Matrix g = ginibre(d, d);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

Vector Rng::random_pure_state(int d) {
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = complex_gaussian();
  return v / v.norm();
}

RealVector Rng::random_distribution(int n) {
  std::exponential_distribution<double> dist(1.0);
  RealVector p(n);
  for (int i = 0; i < n; ++i) p(i) = dist(engine_);
  return p / p.sum();
}

}  // namespace chanres
