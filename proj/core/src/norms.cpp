#include "chanres/norms.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "chanres/sdp_build.hpp"

namespace chanres {

HermitianPreservingMap::HermitianPreservingMap(int din, int dout, Matrix j)
    : dim_in(din), dim_out(dout), choi(std::move(j)) {
  if (choi.rows() != Eigen::Index(din) * dout || choi.cols() != choi.rows())
    throw DimensionMismatch("HermitianPreservingMap: Choi size mismatch");
  if (!is_hermitian(choi))
    throw std::invalid_argument("HermitianPreservingMap: Choi not Hermitian");
  choi = hermitize(choi);
}

HermitianPreservingMap HermitianPreservingMap::difference(const Channel& a,
                                                          const Channel& b) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out())
    throw DimensionMismatch("difference: channel signatures differ");
  return HermitianPreservingMap(a.dim_in(), a.dim_out(), a.choi() - b.choi());
}

namespace {

void throw_on_failure(const SolveResult& r, const char* what) {
  if (r.status != SolveStatus::Optimal)
    throw SolverFailure(std::string(what) + ": solver status " +
                        to_string(r.status) +
                        (r.detail.empty() ? "" : " (" + r.detail + ")"));
}

}  // namespace

double diamond_norm(const HermitianPreservingMap& map,
                    const SolveOptions& options) {
  const int d = map.dim_in * map.dim_out;
  // Shortcut: the zero map.
  if (map.choi.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  SdpBuilder sb;
  int t = sb.add_scalar();
  HermVar y = sb.add_hermitian(d);
  sb.set_objective(t, 1.0);
  int b1 = sb.add_block(d);  // Y - J >= 0
  sb.block_herm(b1, y, 1.0);
  sb.block_const(b1, map.choi, -1.0);
  int b2 = sb.add_block(d);  // Y + J >= 0
  sb.block_herm(b2, y, 1.0);
  sb.block_const(b2, map.choi, 1.0);
  int b3 = sb.add_block(map.dim_in);  // t I - Tr_out Y >= 0
  sb.block_scalar_identity(b3, t, 1.0);
  sb.block_ptrace_second(b3, y, map.dim_in, map.dim_out, -1.0);

  SolveResult r = solve(sb.program(), options);
  throw_on_failure(r, "diamond_norm");
  return std::max(0.0, r.objective_value);
}

double diamond_distance(const Channel& a, const Channel& b,
                        const SolveOptions& options) {
  double v = 0.5 * diamond_norm(HermitianPreservingMap::difference(a, b),
                                options);
  return std::clamp(v, 0.0, 1.0);
}

Channel project_to_channel(Matrix choi, int dim_in, int dim_out,
                           std::string label) {
  Matrix j = hermitize(std::move(choi));
  for (int pass = 0; pass < 8; ++pass) {
    // Restore the marginal: Tr_out J = I.
    Matrix defect = Matrix::Identity(dim_in, dim_in) -
                    partial_trace_second(j, dim_in, dim_out);
    j += kron(defect, Matrix::Identity(dim_out, dim_out) / double(dim_out));
    double min_eig = min_eigenvalue(j);
    if (min_eig >= -0.5 * tol::psd)
      return Channel(dim_in, dim_out, std::move(j), std::move(label));
    Eigen::SelfAdjointEigenSolver<Matrix> es(j);
    Vector clipped = es.eigenvalues().cwiseMax(0.0);
    j = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
    j = hermitize(j);
  }
  // Let the constructor report what is still violated.
  return Channel(dim_in, dim_out, std::move(j), std::move(label));
}

DistanceToFreeResult diamond_distance_to_free(const Channel& n,
                                              const FreeSetSpec& spec,
                                              const SolveOptions& options) {
  if (n.dim_in() != spec.dim_in() || n.dim_out() != spec.dim_out())
    throw DimensionMismatch("diamond_distance_to_free: dimension mismatch");
  const int din = n.dim_in();
  const int dout = n.dim_out();
  const int d = din * dout;
  ConeConstraints cc = compile(spec, /*include_tp=*/true);

  SdpBuilder sb;
  int t = sb.add_scalar();
  HermVar l = sb.add_hermitian(d);  // the free channel
  HermVar z = sb.add_hermitian(d);  // diamond-norm witness
  sb.set_objective(t, 1.0);

  int bl = sb.add_block(d);  // L >= 0
  sb.block_herm(bl, l, 1.0);
  int bz = sb.add_block(d);  // Z >= 0
  sb.block_herm(bz, z, 1.0);
  int bzl = sb.add_block(d);  // Z - (J_N - L) >= 0
  sb.block_herm(bzl, z, 1.0);
  sb.block_herm(bzl, l, 1.0);
  sb.block_const(bzl, n.choi(), -1.0);
  int bt = sb.add_block(din);  // t I - Tr_out Z >= 0
  sb.block_scalar_identity(bt, t, 1.0);
  sb.block_ptrace_second(bt, z, din, dout, -1.0);

  for (const LinearFunctional& f : cc.conic_equalities) {
    int eq = sb.add_equality(f.rhs);
    sb.eq_herm_inner(eq, l, f.k);
  }
  for (const LinearFunctional& f : cc.tp_rows) {
    int eq = sb.add_equality(f.rhs);
    sb.eq_herm_inner(eq, l, f.k);
  }
  for (const LinearFunctional& f : cc.inequalities) {
    int blk = sb.add_block(1);
    sb.block_scalar_functional(blk, l, f.k, 1.0);
    sb.block_const(blk, -f.rhs * Matrix::Identity(1, 1), 1.0);
  }

  SolveResult r = solve(sb.program(), options);
  if (r.status == SolveStatus::Infeasible) {
    throw SolverFailure(
        "diamond_distance_to_free: the free set is empty at these dimensions");
  }
  throw_on_failure(r, "diamond_distance_to_free");

  DistanceToFreeResult out{
      std::clamp(r.objective_value, 0.0, 1.0),
      project_to_channel(SdpBuilder::herm_value(l, r.variable_values), din,
                         dout, "closest_free"),
      r.status};
  return out;
}

}  // namespace chanres
