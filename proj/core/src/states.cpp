#include "chanres/states.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace chanres {

namespace {

constexpr double kLog2 = 0.6931471805599453;  // ln 2

double clip_eig(double lam) {
  if (lam < -tol::eig_clip)
    throw NonCompletelyPositive("density matrix has negative eigenvalue");
  return std::max(lam, 0.0);
}

// Shannon entropy in bits of clipped eigenvalues.
double entropy_bits(const RealVector& eigs) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    double lam = std::max(eigs(i), 0.0);
    if (lam > 0.0) s -= lam * std::log2(lam);
  }
  return s;
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() == 0)
    throw DimensionMismatch("density matrix must be square and nonempty");
  if (!is_hermitian(mat_))
    throw std::invalid_argument("density matrix is not Hermitian");
  mat_ = hermitize(mat_);
  if (min_eigenvalue(mat_) < -tol::psd)
    throw NonCompletelyPositive("density matrix is not PSD");
  if (std::abs(mat_.trace().real() - 1.0) > tol::trace ||
      std::abs(mat_.trace().imag()) > tol::trace)
    throw NonTracePreserving("density matrix trace differs from 1");
}

DensityMatrix DensityMatrix::pure(const Vector& ket) {
  Vector v = ket / ket.norm();
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  return DensityMatrix(Matrix::Identity(d, d) / double(d));
}

DensityMatrix DensityMatrix::basis_state(int d, int index) {
  Matrix m = Matrix::Zero(d, d);
  m(index, index) = 1.0;
  return DensityMatrix(m);
}

DensityMatrix gibbs_state(const Matrix& hamiltonian, double beta) {
  if (!is_hermitian(hamiltonian))
    throw std::invalid_argument("Hamiltonian must be Hermitian");
  Matrix g = hermitian_matrix_exp(-beta * hermitize(hamiltonian));
  return DensityMatrix(g / g.trace().real());
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(),
                                           Eigen::EigenvaluesOnly);
  RealVector eigs = es.eigenvalues();
  for (Eigen::Index i = 0; i < eigs.size(); ++i) eigs(i) = clip_eig(eigs(i));
  return entropy_bits(eigs);
}

ExtReal relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatch("relative_entropy: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma.matrix());
  // Support check: mass of rho outside sigma's support.
  Matrix proj_out = Matrix::Zero(rho.dim(), rho.dim());
  bool has_kernel = false;
  for (Eigen::Index i = 0; i < rho.dim(); ++i) {
    if (es.eigenvalues()(i) < tol::support) {
      proj_out += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
      has_kernel = true;
    }
  }
  if (has_kernel &&
      (proj_out * rho.matrix()).trace().real() > tol::support)
    return ExtReal::infinity();

  // -S(rho) - tr rho log2 sigma, restricted to sigma's support.
  double value = -von_neumann_entropy(rho);
  Matrix rho_in_sigma_basis =
      es.eigenvectors().adjoint() * rho.matrix() * es.eigenvectors();
  for (Eigen::Index i = 0; i < rho.dim(); ++i) {
    double lam = es.eigenvalues()(i);
    if (lam >= tol::support)
      value -= rho_in_sigma_basis(i, i).real() * std::log2(lam);
  }
  return ExtReal::finite(std::max(value, 0.0));
}

ExtReal state_dmax(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatch("state_dmax: dimension mismatch");
  Matrix proj = support_projector(sigma.matrix());
  Matrix complement = Matrix::Identity(rho.dim(), rho.dim()) - proj;
  double outside_mass =
      (complement * rho.matrix() * complement).trace().real();
  if (outside_mass > tol::support) return ExtReal::infinity();

  Matrix isq = inverse_sqrt_on_support(sigma.matrix());
  Matrix ratio = isq * rho.matrix() * isq;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(ratio),
                                           Eigen::EigenvaluesOnly);
  double lam = std::max(es.eigenvalues().maxCoeff(), 0.0);
  if (lam <= 0.0) return ExtReal::finite(0.0);
  return ExtReal::finite(std::log2(lam));
}

double coherence_rel_ent(const DensityMatrix& rho) {
  RealVector diag(rho.dim());
  for (int i = 0; i < rho.dim(); ++i) diag(i) = rho.matrix()(i, i).real();
  return entropy_bits(diag) - von_neumann_entropy(rho);
}

double coherence_rel_ent(const DensityMatrix& rho, const Matrix& basis) {
  Matrix rotated = basis.adjoint() * rho.matrix() * basis;
  return coherence_rel_ent(DensityMatrix(hermitize(rotated)));
}

double free_energy(const DensityMatrix& rho, const Matrix& hamiltonian,
                   double beta) {
  if (hamiltonian.rows() != rho.dim())
    throw DimensionMismatch("free_energy: dimension mismatch");
  if (beta <= 0.0) throw std::invalid_argument("free_energy: beta must be > 0");
  double energy = (rho.matrix() * hermitize(hamiltonian)).trace().real();
  return energy - von_neumann_entropy(rho) * kLog2 / beta;
}

namespace {

RealVector validated_distribution(const RealVector& p) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) < -tol::trace)
      throw NotADistribution("negative probability entry");
    sum += p(i);
  }
  if (std::abs(sum - 1.0) > tol::trace)
    throw NotADistribution("probabilities do not sum to 1");
  return p;
}

}  // namespace

bool majorizes(const RealVector& p, const RealVector& q) {
  RealVector pv = validated_distribution(p);
  RealVector qv = validated_distribution(q);
  size_t n = std::max(pv.size(), qv.size());
  std::vector<double> ps(n, 0.0), qs(n, 0.0);
  for (Eigen::Index i = 0; i < pv.size(); ++i) ps[i] = pv(i);
  for (Eigen::Index i = 0; i < qv.size(); ++i) qs[i] = qv(i);
  std::sort(ps.begin(), ps.end(), std::greater<double>());
  std::sort(qs.begin(), qs.end(), std::greater<double>());
  double cp = 0.0, cq = 0.0;
  for (size_t i = 0; i < n; ++i) {
    cp += ps[i];
    cq += qs[i];
    if (cp < cq - tol::trace) return false;
  }
  return true;
}

bool io_unitary_necessary_condition(const Matrix& u, const Matrix& v) {
  if (u.rows() != u.cols() || v.rows() != v.cols() || u.rows() != v.rows())
    throw DimensionMismatch("io_unitary_necessary_condition: dimensions");
  const int k = int(u.rows());
  for (int i = 0; i < k; ++i) {
    RealVector pu(k), pv(k);
    for (int j = 0; j < k; ++j) {
      pu(j) = std::norm(u(i, j));
      pv(j) = std::norm(v(i, j));
    }
    if (!majorizes(pu, pv)) return false;
  }
  return true;
}

}  // namespace chanres
