#include "chanres/sdp_build.hpp"

#include <cmath>

namespace chanres {

int herm_diag_index(const HermVar& v, int i) { return v.base + i; }

namespace {

int pair_offset(int dim, int i, int j) {
  // lexicographic index of (i, j), i < j, in the strict upper triangle
  return i * (2 * dim - i - 1) / 2 + (j - i - 1);
}

}  // namespace

int herm_re_index(const HermVar& v, int i, int j) {
  return v.base + v.dim + 2 * pair_offset(v.dim, i, j);
}

int herm_im_index(const HermVar& v, int i, int j) {
  return v.base + v.dim + 2 * pair_offset(v.dim, i, j) + 1;
}

int SdpBuilder::add_scalar() {
  if (built_) throw std::logic_error("SdpBuilder: allocation after build");
  return next_var_++;
}

HermVar SdpBuilder::add_hermitian(int dim) {
  if (built_) throw std::logic_error("SdpBuilder: allocation after build");
  HermVar v{dim, next_var_};
  next_var_ += herm_var_count(dim);
  return v;
}

ConicProgram& SdpBuilder::program() {
  if (!built_) {
    storage_.emplace_back(next_var_ == 0 ? 1 : next_var_);
    built_ = true;
  }
  return storage_.front();
}

void SdpBuilder::ensure_built() {
  if (!built_) throw std::logic_error("SdpBuilder: call program() first");
}

int SdpBuilder::add_block(int dim) { return program().add_psd_block(dim); }

void SdpBuilder::block_const(int block, const Matrix& m, double coeff) {
  ensure_built();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i; j < m.cols(); ++j) {
      Complex v = coeff * m(i, j);
      if (i == j) v = Complex(v.real(), 0.0);
      if (std::abs(v) > 0.0)
        storage_.front().block_add_constant(block, i, j, v);
    }
}

void SdpBuilder::block_const_identity(int block, double coeff) {
  ensure_built();
  int dim = storage_.front().blocks()[block].dim;
  for (int i = 0; i < dim; ++i)
    storage_.front().block_add_constant(block, i, i, coeff);
}

void SdpBuilder::block_scalar_identity(int block, int scalar_var, double coeff) {
  ensure_built();
  int dim = storage_.front().blocks()[block].dim;
  for (int i = 0; i < dim; ++i)
    storage_.front().block_add_term(block, scalar_var, i, i, coeff);
}

void SdpBuilder::block_herm(int block, const HermVar& v, double coeff,
                            int offset) {
  ensure_built();
  ConicProgram& p = storage_.front();
  for (int i = 0; i < v.dim; ++i)
    p.block_add_term(block, herm_diag_index(v, i), offset + i, offset + i,
                     coeff);
  for (int i = 0; i < v.dim; ++i)
    for (int j = i + 1; j < v.dim; ++j) {
      p.block_add_term(block, herm_re_index(v, i, j), offset + i, offset + j,
                       coeff);
      p.block_add_term(block, herm_im_index(v, i, j), offset + i, offset + j,
                       Complex(0.0, coeff));
    }
}

void SdpBuilder::block_kron_identity_herm(int block, const HermVar& v, int din,
                                          double coeff) {
  for (int a = 0; a < din; ++a) block_herm(block, v, coeff, a * v.dim);
}

void SdpBuilder::block_scalar_matrix(int block, int scalar_var, const Matrix& m,
                                     double coeff) {
  ensure_built();
  ConicProgram& p = storage_.front();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i; j < m.cols(); ++j) {
      Complex val = coeff * m(i, j);
      if (i == j) val = Complex(val.real(), 0.0);
      if (std::abs(val) > 0.0) p.block_add_term(block, scalar_var, i, j, val);
    }
}

void SdpBuilder::block_scalar_functional(int block, const HermVar& v,
                                         const std::vector<HermTriplet>& k,
                                         double coeff) {
  ensure_built();
  ConicProgram& p = storage_.front();
  for (const HermTriplet& t : k) {
    if (t.row == t.col) {
      p.block_add_term(block, herm_diag_index(v, t.row), 0, 0,
                       coeff * t.value.real());
    } else {
      p.block_add_term(block, herm_re_index(v, t.row, t.col), 0, 0,
                       2.0 * coeff * t.value.real());
      p.block_add_term(block, herm_im_index(v, t.row, t.col), 0, 0,
                       2.0 * coeff * t.value.imag());
    }
  }
}

void SdpBuilder::block_ptrace_second(int block, const HermVar& v, int da,
                                     int db, double coeff) {
  ensure_built();
  ConicProgram& p = storage_.front();
  // entry (a, b) of the trace-out = sum_beta V_{(a beta), (b beta)}
  for (int a = 0; a < da; ++a)
    for (int b = a; b < da; ++b)
      for (int beta = 0; beta < db; ++beta) {
        int r = a * db + beta;
        int c = b * db + beta;
        if (a == b) {
          p.block_add_term(block, herm_diag_index(v, r), a, a, coeff);
        } else {
          p.block_add_term(block, herm_re_index(v, r, c), a, b, coeff);
          p.block_add_term(block, herm_im_index(v, r, c), a, b,
                           Complex(0.0, coeff));
        }
      }
}

void SdpBuilder::block_ptrace_first(int block, const HermVar& v, int da,
                                    int db, double coeff) {
  ensure_built();
  ConicProgram& p = storage_.front();
  for (int al = 0; al < db; ++al)
    for (int be = al; be < db; ++be)
      for (int a = 0; a < da; ++a) {
        int r = a * db + al;
        int c = a * db + be;
        if (al == be) {
          p.block_add_term(block, herm_diag_index(v, r), al, al, coeff);
        } else {
          p.block_add_term(block, herm_re_index(v, r, c), al, be, coeff);
          p.block_add_term(block, herm_im_index(v, r, c), al, be,
                           Complex(0.0, coeff));
        }
      }
}

int SdpBuilder::add_equality(double rhs) { return program().add_equality(rhs); }

void SdpBuilder::eq_scalar(int eq, int var, double coeff) {
  ensure_built();
  storage_.front().equality_add_term(eq, var, coeff);
}

void SdpBuilder::eq_herm_inner(int eq, const HermVar& v,
                               const std::vector<HermTriplet>& k, double coeff) {
  ensure_built();
  ConicProgram& p = storage_.front();
  // <K, V> = sum_{i<j} (2 Re K_ij re_ij + 2 Im K_ij im_ij) + sum_i K_ii d_i
  for (const HermTriplet& t : k) {
    if (t.row == t.col) {
      p.equality_add_term(eq, herm_diag_index(v, t.row),
                          coeff * t.value.real());
    } else {
      p.equality_add_term(eq, herm_re_index(v, t.row, t.col),
                          2.0 * coeff * t.value.real());
      p.equality_add_term(eq, herm_im_index(v, t.row, t.col),
                          2.0 * coeff * t.value.imag());
    }
  }
}

void SdpBuilder::eq_fix_entry(const HermVar& v, int i, int j, double re,
                              double im) {
  ensure_built();
  ConicProgram& p = storage_.front();
  if (i == j) {
    int eq = p.add_equality(re);
    p.equality_add_term(eq, herm_diag_index(v, i), 1.0);
    return;
  }
  int eq_re = p.add_equality(re);
  p.equality_add_term(eq_re, herm_re_index(v, i, j), 1.0);
  int eq_im = p.add_equality(im);
  p.equality_add_term(eq_im, herm_im_index(v, i, j), 1.0);
}

void SdpBuilder::eq_ptrace_second_identity(const HermVar& v, int da, int db,
                                           double coeff_id, int scalar_var,
                                           double scalar_coeff) {
  ensure_built();
  ConicProgram& p = storage_.front();
  for (int a = 0; a < da; ++a)
    for (int b = a; b < da; ++b) {
      if (a == b) {
        int eq = p.add_equality(coeff_id);
        for (int beta = 0; beta < db; ++beta)
          p.equality_add_term(eq, herm_diag_index(v, a * db + beta), 1.0);
        if (scalar_var >= 0)
          p.equality_add_term(eq, scalar_var, -scalar_coeff);
      } else {
        int eq_re = p.add_equality(0.0);
        int eq_im = p.add_equality(0.0);
        for (int beta = 0; beta < db; ++beta) {
          p.equality_add_term(eq_re, herm_re_index(v, a * db + beta, b * db + beta), 1.0);
          p.equality_add_term(eq_im, herm_im_index(v, a * db + beta, b * db + beta), 1.0);
        }
      }
    }
}

void SdpBuilder::set_objective(int var, double coeff) {
  program().set_objective(var, coeff);
}

Matrix SdpBuilder::herm_value(const HermVar& v, const RealVector& x) {
  Matrix m = Matrix::Zero(v.dim, v.dim);
  for (int i = 0; i < v.dim; ++i) m(i, i) = x(herm_diag_index(v, i));
  for (int i = 0; i < v.dim; ++i)
    for (int j = i + 1; j < v.dim; ++j) {
      Complex val(x(herm_re_index(v, i, j)), x(herm_im_index(v, i, j)));
      m(i, j) = val;
      m(j, i) = std::conj(val);
    }
  return m;
}

std::vector<HermTriplet> herm_triplets(const Matrix& k, double drop_tol) {
  std::vector<HermTriplet> out;
  for (int i = 0; i < k.rows(); ++i)
    for (int j = i; j < k.cols(); ++j) {
      Complex v = k(i, j);
      if (i == j) v = Complex(v.real(), 0.0);
      if (std::abs(v) > drop_tol) out.push_back({i, j, v});
    }
  return out;
}

}  // namespace chanres
