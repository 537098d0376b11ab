#include "chanres/channel.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace chanres {

Channel::Channel(int dim_in, int dim_out, Matrix choi, std::string label)
    : dim_in_(dim_in), dim_out_(dim_out), choi_(std::move(choi)),
      label_(std::move(label)) {
  if (dim_in_ <= 0 || dim_out_ <= 0)
    throw DimensionMismatch("channel dimensions must be positive");
  if (choi_.rows() != Eigen::Index(dim_in_) * dim_out_ ||
      choi_.cols() != choi_.rows())
    throw DimensionMismatch("Choi matrix size does not match dimensions");
  if (!is_hermitian(choi_))
    throw NonCompletelyPositive("Choi matrix is not Hermitian");
  choi_ = hermitize(choi_);
  if (min_eigenvalue(choi_) < -tol::psd)
    throw NonCompletelyPositive("Choi matrix is not PSD");
  Matrix tr_out = partial_trace_second(choi_, dim_in_, dim_out_);
  if ((tr_out - Matrix::Identity(dim_in_, dim_in_)).cwiseAbs().maxCoeff() >
      tol::trace)
    throw NonTracePreserving("partial trace of Choi is not the identity");
}

Channel Channel::from_kraus(const std::vector<Matrix>& kraus_ops,
                            std::string label) {
  if (kraus_ops.empty())
    throw DimensionMismatch("Kraus representation needs >= 1 operator");
  const int dout = int(kraus_ops.front().rows());
  const int din = int(kraus_ops.front().cols());
  Matrix completeness = Matrix::Zero(din, din);
  for (const Matrix& k : kraus_ops) {
    if (k.rows() != dout || k.cols() != din)
      throw DimensionMismatch("inconsistent Kraus operator shapes");
    completeness += k.adjoint() * k;
  }
  if ((completeness - Matrix::Identity(din, din)).cwiseAbs().maxCoeff() >
      tol::kraus)
    throw NonTracePreserving("Kraus operators are not complete");

  // J = sum_k vec(K_k) vec(K_k)^dag in the |i>_in (x) K|i>_out layout.
  Matrix choi = Matrix::Zero(Eigen::Index(din) * dout, Eigen::Index(din) * dout);
  for (const Matrix& k : kraus_ops) {
    Vector v(Eigen::Index(din) * dout);
    for (int i = 0; i < din; ++i)
      for (int a = 0; a < dout; ++a) v(Eigen::Index(i) * dout + a) = k(a, i);
    choi += v * v.adjoint();
  }
  return Channel(din, dout, std::move(choi), std::move(label));
}

Channel Channel::from_unitary(const Matrix& u, std::string label) {
  if (u.rows() != u.cols())
    throw DimensionMismatch("unitary must be square");
  const int d = int(u.rows());
  if ((u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() >
      tol::kraus)
    throw std::invalid_argument("matrix is not unitary");
  return from_kraus({u}, std::move(label));
}

Channel Channel::from_cq(const std::vector<Matrix>& outputs,
                         std::string label) {
  if (outputs.empty()) throw DimensionMismatch("cq channel needs >= 1 output");
  const int din = int(outputs.size());
  const int dout = int(outputs.front().rows());
  Matrix choi = Matrix::Zero(Eigen::Index(din) * dout, Eigen::Index(din) * dout);
  for (int i = 0; i < din; ++i) {
    DensityMatrix check{outputs[i]};  // validates each sigma_i
    choi.block(Eigen::Index(i) * dout, Eigen::Index(i) * dout, dout, dout) =
        check.matrix();
  }
  return Channel(din, dout, std::move(choi), std::move(label));
}

Channel Channel::from_repr(const ChannelRepr& repr, std::string label) {
  if (const auto* k = std::get_if<KrausRepr>(&repr))
    return from_kraus(k->operators, std::move(label));
  if (const auto* u = std::get_if<UnitaryRepr>(&repr))
    return from_unitary(u->u, std::move(label));
  if (const auto* c = std::get_if<CqRepr>(&repr))
    return from_cq(c->outputs, std::move(label));
  const auto& ch = std::get<ChoiRepr>(repr);
  return Channel(ch.dim_in, ch.dim_out, ch.choi, std::move(label));
}

Channel to_choi(const ChannelRepr& repr) { return Channel::from_repr(repr); }

Channel Channel::identity(int d) {
  return from_unitary(Matrix::Identity(d, d), "id" + std::to_string(d));
}

Channel Channel::constant(const DensityMatrix& target, int dim_in) {
  Matrix choi = kron(Matrix::Identity(dim_in, dim_in), target.matrix());
  return Channel(dim_in, target.dim(), std::move(choi), "const");
}

Channel Channel::completely_dephasing(int d) {
  std::vector<Matrix> kraus;
  for (int i = 0; i < d; ++i) {
    Matrix k = Matrix::Zero(d, d);
    k(i, i) = 1.0;
    kraus.push_back(k);
  }
  return from_kraus(kraus, "dephase" + std::to_string(d));
}

Channel Channel::depolarizing(int d, double p) {
  Channel id = identity(d);
  Channel noise = constant(DensityMatrix::maximally_mixed(d), d);
  return mix({id, noise}, {1.0 - p, p});
}

Channel Channel::random(int dim_in, int dim_out, int kraus_rank, Rng& rng) {
  // Stinespring: isometry dim_in -> dim_out * kraus_rank from a Haar unitary.
  const int big = dim_out * kraus_rank;
  Matrix u = rng.haar_unitary(big < dim_in ? dim_in : big);
  Matrix v = u.leftCols(dim_in).topRows(big);
  // Re-orthonormalize in case big < dim_in was padded away.
  if (big < dim_in)
    throw DimensionMismatch("random channel: dim_out*rank must be >= dim_in");
  std::vector<Matrix> kraus;
  for (int e = 0; e < kraus_rank; ++e) {
    Matrix k(dim_out, dim_in);
    for (int a = 0; a < dim_out; ++a)
      for (int i = 0; i < dim_in; ++i) k(a, i) = v(a * kraus_rank + e, i);
    kraus.push_back(k);
  }
  return from_kraus(kraus, "random");
}

DensityMatrix Channel::apply(const DensityMatrix& state) const {
  if (state.dim() != dim_in_)
    throw DimensionMismatch("apply: state dimension mismatch");
  return DensityMatrix(apply_matrix(state.matrix()));
}

Matrix Channel::apply_matrix(const Matrix& operand) const {
  if (operand.rows() != dim_in_ || operand.cols() != dim_in_)
    throw DimensionMismatch("apply_matrix: operand dimension mismatch");
  // N(X) = Tr_in[ J (X^T (x) I) ]
  Matrix out = Matrix::Zero(dim_out_, dim_out_);
  for (int i = 0; i < dim_in_; ++i)
    for (int j = 0; j < dim_in_; ++j)
      out += operand(i, j) *
             choi_.block(Eigen::Index(i) * dim_out_, Eigen::Index(j) * dim_out_,
                         dim_out_, dim_out_);
  return out;
}

std::vector<Matrix> Channel::kraus_operators(double rank_cutoff) const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(choi_);
  std::vector<Matrix> kraus;
  for (Eigen::Index e = 0; e < es.eigenvalues().size(); ++e) {
    double lam = es.eigenvalues()(e);
    if (lam <= rank_cutoff) continue;
    Vector v = std::sqrt(lam) * es.eigenvectors().col(e);
    Matrix k(dim_out_, dim_in_);
    for (int i = 0; i < dim_in_; ++i)
      for (int a = 0; a < dim_out_; ++a) k(a, i) = v(Eigen::Index(i) * dim_out_ + a);
    kraus.push_back(std::move(k));
  }
  return kraus;
}

bool Channel::is_constant(double tolerance) const {
  // Constant iff J = I_in/d_in (x) Tr_in J.
  Matrix avg = partial_trace_first(choi_, dim_in_, dim_out_) / double(dim_in_);
  Matrix expected = kron(Matrix::Identity(dim_in_, dim_in_), avg);
  return (choi_ - expected).cwiseAbs().maxCoeff() <= tolerance;
}

DensityMatrix Channel::constant_output() const {
  if (!is_constant())
    throw std::logic_error("constant_output: channel is not constant");
  return DensityMatrix(
      hermitize(partial_trace_first(choi_, dim_in_, dim_out_) /
                double(dim_in_)));
}

Channel compose(const Channel& second, const Channel& first) {
  if (first.dim_out() != second.dim_in())
    throw DimensionMismatch("compose: inner dimensions do not match");
  const int din = first.dim_in();
  const int dout = second.dim_out();
  Matrix choi = Matrix::Zero(Eigen::Index(din) * dout, Eigen::Index(din) * dout);
  // J_{S.F} block (i,j) = S(F(|i><j|)).
  for (int i = 0; i < din; ++i)
    for (int j = 0; j < din; ++j) {
      Matrix fij = first.choi().block(Eigen::Index(i) * first.dim_out(),
                                      Eigen::Index(j) * first.dim_out(),
                                      first.dim_out(), first.dim_out());
      choi.block(Eigen::Index(i) * dout, Eigen::Index(j) * dout, dout, dout) =
          second.apply_matrix(fij);
    }
  return Channel(din, dout, std::move(choi));
}

Channel tensor(const Channel& a, const Channel& b) {
  Matrix big = kron(a.choi(), b.choi());
  // kron layout: (in_a, out_a, in_b, out_b) -> canonical (in_a, in_b, out_a, out_b)
  Matrix choi = permute_factors(
      big, {a.dim_in(), a.dim_out(), b.dim_in(), b.dim_out()}, {0, 2, 1, 3});
  return Channel(a.dim_in() * b.dim_in(), a.dim_out() * b.dim_out(),
                 std::move(choi));
}

Channel tensor_power(const Channel& a, int n) {
  if (n < 1) throw DimensionMismatch("tensor_power: n must be >= 1");
  Channel out = a;
  for (int i = 1; i < n; ++i) out = tensor(out, a);
  return out;
}

Channel permute_systems(const Channel& channel, const std::vector<int>& dims_in,
                        const std::vector<int>& dims_out,
                        const std::vector<int>& perm) {
  int prod_in = 1, prod_out = 1;
  for (int d : dims_in) prod_in *= d;
  for (int d : dims_out) prod_out *= d;
  if (prod_in != channel.dim_in() || prod_out != channel.dim_out())
    throw DimensionMismatch("permute_systems: factor dimensions do not match");
  if (dims_in.size() != dims_out.size() || perm.size() != dims_in.size())
    throw DimensionMismatch("permute_systems: factor count mismatch");

  const size_t k = perm.size();
  std::vector<int> dims;
  for (int d : dims_in) dims.push_back(d);
  for (int d : dims_out) dims.push_back(d);
  std::vector<int> combined(2 * k);
  for (size_t p = 0; p < k; ++p) {
    combined[p] = perm[p];
    combined[k + p] = int(k) + perm[p];
  }
  Matrix choi = permute_factors(channel.choi(), dims, combined);
  return Channel(prod_in, prod_out, std::move(choi), channel.label());
}

Channel mix(const std::vector<Channel>& channels,
            const std::vector<double>& weights) {
  if (channels.empty() || channels.size() != weights.size())
    throw DimensionMismatch("mix: need matching channels and weights");
  Matrix choi = Matrix::Zero(channels.front().choi().rows(),
                             channels.front().choi().cols());
  double total = 0.0;
  for (size_t i = 0; i < channels.size(); ++i) {
    if (channels[i].dim_in() != channels.front().dim_in() ||
        channels[i].dim_out() != channels.front().dim_out())
      throw DimensionMismatch("mix: channel signatures differ");
    if (weights[i] < -1e-12)
      throw std::invalid_argument("mix: negative weight");
    choi += weights[i] * channels[i].choi();
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("mix: weights must sum to 1");
  return Channel(channels.front().dim_in(), channels.front().dim_out(),
                 std::move(choi));
}

Channel partial_trace_channel(int da, int db, bool keep_first) {
  const int din = da * db;
  const int dout = keep_first ? da : db;
  Matrix choi = Matrix::Zero(Eigen::Index(din) * dout, Eigen::Index(din) * dout);
  for (int i = 0; i < din; ++i)
    for (int j = 0; j < din; ++j) {
      Matrix e = Matrix::Zero(din, din);
      e(i, j) = 1.0;
      Matrix blk = keep_first ? partial_trace_second(e, da, db)
                              : partial_trace_first(e, da, db);
      choi.block(Eigen::Index(i) * dout, Eigen::Index(j) * dout, dout, dout) = blk;
    }
  return Channel(din, dout, std::move(choi), "trace_out");
}

ExtReal channel_dmax(const Channel& n, const Channel& m) {
  if (n.dim_in() != m.dim_in() || n.dim_out() != m.dim_out())
    throw DimensionMismatch("channel_dmax: signature mismatch");
  // Normalize the Chois to states; D_max is invariant under the common scale.
  const double d = double(n.dim_in());
  DensityMatrix jn{n.choi() / d};
  DensityMatrix jm{m.choi() / d};
  return state_dmax(jn, jm);
}

}  // namespace chanres
