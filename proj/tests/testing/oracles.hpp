// Independent oracles for the test suites. These deliberately avoid the
// library code paths they are used to check.

#ifndef CHANRES_TESTING_ORACLES_HPP
#define CHANRES_TESTING_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace oracles {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline double trace_norm(const Matrix& herm) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

inline double trace_distance(const Matrix& a, const Matrix& b) {
  return 0.5 * trace_norm(a - b);
}

// distance from the origin to the segment [a, b] in the complex plane
inline double point_segment_distance(Complex a, Complex b) {
  Complex ab = b - a;
  double denom = std::norm(ab);
  if (denom < 1e-30) return std::abs(a);
  double t = std::clamp(-(a.real() * ab.real() + a.imag() * ab.imag()) / denom,
                        0.0, 1.0);
  return std::abs(a + t * ab);
}

// Closed form for unitary pairs: (1/2)||U - V||_diamond = sqrt(1 - nu^2)
// with nu the distance from 0 to the convex hull of the eigenvalues of
// U^dag V (all on the unit circle).
inline double unitary_pair_half_diamond(const Matrix& u, const Matrix& v) {
  Eigen::ComplexEigenSolver<Matrix> es(u.adjoint() * v);
  std::vector<double> angles;
  std::vector<Complex> pts;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    Complex z = es.eigenvalues()(i);
    pts.push_back(z);
    angles.push_back(std::arg(z));
  }
  std::vector<size_t> order(pts.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return angles[a] < angles[b]; });
  // the origin lies inside the hull iff no angular gap reaches pi
  double max_gap = 0.0;
  for (size_t i = 0; i < order.size(); ++i) {
    double a0 = angles[order[i]];
    double a1 = i + 1 < order.size() ? angles[order[i + 1]]
                                     : angles[order[0]] + 2 * M_PI;
    max_gap = std::max(max_gap, a1 - a0);
  }
  double nu = 0.0;
  if (max_gap >= M_PI - 1e-12) {
    nu = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < order.size(); ++i) {
      Complex a = pts[order[i]];
      Complex b = pts[order[(i + 1) % order.size()]];
      nu = std::min(nu, point_segment_distance(a, b));
    }
    if (order.size() == 1) nu = std::abs(pts[0]);
  }
  return std::sqrt(std::max(0.0, 1.0 - nu * nu));
}

// Prefix-sum majorization, reimplemented independently of the library.
inline bool majorizes(RealVector p, RealVector q, double slack = 1e-9) {
  std::vector<double> a(p.data(), p.data() + p.size());
  std::vector<double> b(q.data(), q.data() + q.size());
  size_t n = std::max(a.size(), b.size());
  a.resize(n, 0.0);
  b.resize(n, 0.0);
  std::sort(a.rbegin(), a.rend());
  std::sort(b.rbegin(), b.rend());
  double ca = 0, cb = 0;
  for (size_t i = 0; i < n; ++i) {
    ca += a[i];
    cb += b[i];
    if (ca + slack < cb) return false;
  }
  return true;
}

// Direct Kraus evaluation.
inline Matrix apply_kraus(const std::vector<Matrix>& ops, const Matrix& rho) {
  Matrix out = Matrix::Zero(ops.front().rows(), ops.front().rows());
  for (const Matrix& k : ops) out += k * rho * k.adjoint();
  return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Exact half-diamond distance between the qubit identity and the replacer to
// the maximally mixed state, via a Schmidt-angle grid: by covariance the
// optimal input is determined by its Schmidt coefficients.
inline double id_vs_flat_replacer_half_diamond_grid(int grid_points) {
  double best = 0.0;
  for (int g = 0; g <= grid_points; ++g) {
    double theta = 0.5 * M_PI * g / grid_points;
    Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
    psi(0) = std::cos(theta);
    psi(3) = std::sin(theta);
    Matrix rho = psi * psi.adjoint();
    Matrix marg(2, 2);  // Tr_A of psi
    marg.setZero();
    marg(0, 0) = std::norm(psi(0));
    marg(1, 1) = std::norm(psi(3));
    Matrix replaced = kron(Matrix::Identity(2, 2) / 2.0, marg);
    best = std::max(best, trace_distance(rho, replaced));
  }
  return best;
}

}  // namespace oracles

#endif  // CHANRES_TESTING_ORACLES_HPP
