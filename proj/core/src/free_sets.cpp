#include "chanres/free_sets.hpp"

#include <cmath>

#include "chanres/sdp_build.hpp"

namespace chanres {

const char* to_string(FreeSetKind k) {
  switch (k) {
    case FreeSetKind::Constant: return "constant";
    case FreeSetKind::ConstantFixed: return "constant-to";
    case FreeSetKind::Mio: return "mio";
    case FreeSetKind::GibbsPreserving: return "gibbs";
    case FreeSetKind::MaxMixedPreserving: return "maxmixed";
    case FreeSetKind::Custom: return "custom";
  }
  return "unknown";
}

double evaluate_functional(const LinearFunctional& f, const Matrix& j) {
  double acc = 0.0;
  for (const HermTriplet& t : f.k) {
    if (t.row == t.col) {
      acc += t.value.real() * j(t.row, t.row).real();
    } else {
      acc += 2.0 * (t.value.real() * j(t.row, t.col).real() +
                    t.value.imag() * j(t.row, t.col).imag());
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// FreeSetSpec constructors
// ---------------------------------------------------------------------------

FreeSetSpec FreeSetSpec::constant(int dim_in, int dim_out) {
  if (dim_in < 1 || dim_out < 1)
    throw DimensionMismatch("free set dimensions must be positive");
  FreeSetSpec s;
  s.kind_ = FreeSetKind::Constant;
  s.dim_in_ = dim_in;
  s.dim_out_ = dim_out;
  return s;
}

FreeSetSpec FreeSetSpec::constant_to(const DensityMatrix& target, int dim_in) {
  FreeSetSpec s;
  s.kind_ = FreeSetKind::ConstantFixed;
  s.dim_in_ = dim_in;
  s.dim_out_ = target.dim();
  s.target_ = target.matrix();
  return s;
}

FreeSetSpec FreeSetSpec::mio(int dim_in, int dim_out) {
  FreeSetSpec s;
  s.kind_ = FreeSetKind::Mio;
  s.dim_in_ = dim_in;
  s.dim_out_ = dim_out;
  return s;
}

FreeSetSpec FreeSetSpec::gibbs(const Matrix& hamiltonian, double beta) {
  return gibbs(hamiltonian, hamiltonian, beta);
}

FreeSetSpec FreeSetSpec::gibbs(const Matrix& hamiltonian_in,
                               const Matrix& hamiltonian_out, double beta) {
  if (!is_hermitian(hamiltonian_in) || !is_hermitian(hamiltonian_out))
    throw std::invalid_argument("Gibbs Hamiltonians must be Hermitian");
  FreeSetSpec s;
  s.kind_ = FreeSetKind::GibbsPreserving;
  s.dim_in_ = int(hamiltonian_in.rows());
  s.dim_out_ = int(hamiltonian_out.rows());
  s.ham_in_ = hermitize(hamiltonian_in);
  s.ham_out_ = hermitize(hamiltonian_out);
  s.beta_ = beta;
  return s;
}

FreeSetSpec FreeSetSpec::max_mixed_preserving(int dim_in, int dim_out) {
  FreeSetSpec s;
  s.kind_ = FreeSetKind::MaxMixedPreserving;
  s.dim_in_ = dim_in;
  s.dim_out_ = dim_out;
  return s;
}

FreeSetSpec FreeSetSpec::custom(int dim_in, int dim_out,
                                std::vector<LinearFunctional> equalities,
                                std::vector<LinearFunctional> inequalities) {
  FreeSetSpec s;
  s.kind_ = FreeSetKind::Custom;
  s.dim_in_ = dim_in;
  s.dim_out_ = dim_out;
  s.custom_eq_ = std::move(equalities);
  s.custom_ineq_ = std::move(inequalities);
  return s;
}

namespace {

// H_total = sum_k I (x) ... (x) H (x) ... (x) I on d^copies dimensions.
Matrix kron_sum_hamiltonian(const Matrix& h, int copies) {
  const int d = int(h.rows());
  int total = 1;
  for (int i = 0; i < copies; ++i) total *= d;
  Matrix out = Matrix::Zero(total, total);
  for (int k = 0; k < copies; ++k) {
    Matrix term = Matrix::Identity(1, 1);
    for (int i = 0; i < copies; ++i)
      term = kron(term, i == k ? h : Matrix::Identity(d, d));
    out += term;
  }
  return out;
}

// is target_dim a power of base? returns the exponent or nullopt.
std::optional<int> power_of(int base, int target) {
  if (target == 1) return 0;
  if (base <= 1) return std::nullopt;
  int k = 0, cur = 1;
  while (cur < target) {
    cur *= base;
    ++k;
  }
  return cur == target ? std::optional<int>(k) : std::nullopt;
}

}  // namespace

std::optional<FreeSetSpec> FreeSetSpec::at_dims(int dim_in, int dim_out) const {
  switch (kind_) {
    case FreeSetKind::Constant:
      return constant(dim_in, dim_out);
    case FreeSetKind::Mio:
      return mio(dim_in, dim_out);
    case FreeSetKind::MaxMixedPreserving:
      return max_mixed_preserving(dim_in, dim_out);
    case FreeSetKind::GibbsPreserving: {
      auto k_in = power_of(dim_in_, dim_in);
      auto k_out = power_of(dim_out_, dim_out);
      if (!k_in || !k_out) return std::nullopt;
      Matrix hi = *k_in == 0 ? Matrix::Zero(1, 1)
                             : kron_sum_hamiltonian(ham_in_, *k_in);
      Matrix ho = *k_out == 0 ? Matrix::Zero(1, 1)
                              : kron_sum_hamiltonian(ham_out_, *k_out);
      return gibbs(hi, ho, beta_);
    }
    case FreeSetKind::ConstantFixed: {
      auto k_out = power_of(dim_out_, dim_out);
      if (!k_out || *k_out < 1) return std::nullopt;
      Matrix t = Matrix::Identity(1, 1);
      for (int i = 0; i < *k_out; ++i) t = kron(t, target_);
      return constant_to(DensityMatrix(t), dim_in);
    }
    case FreeSetKind::Custom:
      if (dim_in == dim_in_ && dim_out == dim_out_) return *this;
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// compile
// ---------------------------------------------------------------------------

namespace {

void push_entry_zero_rows(std::vector<LinearFunctional>& rows, int r, int c) {
  // J_rc = 0 (both real and imaginary part); r < c.
  rows.push_back({{{r, c, Complex(1.0, 0.0)}}, 0.0});
  rows.push_back({{{r, c, Complex(0.0, 1.0)}}, 0.0});
}

// Rows expressing Re/Im of  sum_t coeff_t J_{r_t c_t}  =  factor * (tr J)
// with positions given as full complex matrix K0 (constraint is tr(K0 J)).
void push_complex_functional_rows(std::vector<LinearFunctional>& rows,
                                  const Matrix& k0, Complex trace_factor) {
  Matrix k_re = 0.5 * (k0 + k0.adjoint());
  Matrix k_im = (k0 - k0.adjoint()) / Complex(0.0, 2.0);
  k_re.diagonal().array() -= trace_factor.real();
  k_im.diagonal().array() -= trace_factor.imag();
  const double drop = 1e-14;
  std::vector<HermTriplet> t_re = herm_triplets(k_re, drop);
  std::vector<HermTriplet> t_im = herm_triplets(k_im, drop);
  if (!t_re.empty()) rows.push_back({t_re, 0.0});
  if (!t_im.empty()) rows.push_back({t_im, 0.0});
}

}  // namespace

ConeConstraints compile(const FreeSetSpec& spec, bool include_tp) {
  const int din = spec.dim_in();
  const int dout = spec.dim_out();
  const int d = din * dout;
  ConeConstraints cc;
  cc.dim_in = din;
  cc.dim_out = dout;

  auto idx = [dout](int i, int a) { return i * dout + a; };

  switch (spec.kind()) {
    case FreeSetKind::Constant: {
      // J = I_din/din (x) Tr_in J: off-diagonal input blocks vanish,
      // diagonal input blocks are all equal.
      for (int a = 0; a < din; ++a)
        for (int b = a + 1; b < din; ++b)
          for (int al = 0; al < dout; ++al)
            for (int be = 0; be < dout; ++be)
              push_entry_zero_rows(cc.conic_equalities, idx(a, al), idx(b, be));
      for (int a = 1; a < din; ++a)
        for (int al = 0; al < dout; ++al)
          for (int be = al; be < dout; ++be) {
            LinearFunctional re{{{idx(0, al), idx(0, be), Complex(1.0, 0.0)},
                                 {idx(a, al), idx(a, be), Complex(-1.0, 0.0)}},
                                0.0};
            cc.conic_equalities.push_back(re);
            if (al != be) {
              LinearFunctional im{{{idx(0, al), idx(0, be), Complex(0.0, 1.0)},
                                   {idx(a, al), idx(a, be), Complex(0.0, -1.0)}},
                                  0.0};
              cc.conic_equalities.push_back(im);
            }
          }
      break;
    }
    case FreeSetKind::ConstantFixed: {
      // J = (tr J / din) * I_din/1 (x) target: every entry is pinned to a
      // multiple of the total trace.
      const Matrix& t = spec.target();
      for (int a = 0; a < din; ++a)
        for (int b = a; b < din; ++b)
          for (int al = 0; al < dout; ++al)
            for (int be = 0; be < dout; ++be) {
              int r = idx(a, al), c = idx(b, be);
              if (c < r || (r == c && !(al == be && a == b))) continue;
              Complex target_val =
                  (a == b) ? t(al, be) / double(din) : Complex(0.0, 0.0);
              // Re row: Re J_rc - Re(target_val) tr J = 0
              LinearFunctional re;
              re.k.push_back({r, c, Complex(r == c ? 1.0 : 0.5, 0.0)});
              if (target_val.real() != 0.0)
                for (int q = 0; q < d; ++q)
                  re.k.push_back({q, q, Complex(-target_val.real(), 0.0)});
              cc.conic_equalities.push_back(std::move(re));
              if (r != c) {
                LinearFunctional im;
                im.k.push_back({r, c, Complex(0.0, 0.5)});
                if (target_val.imag() != 0.0)
                  for (int q = 0; q < d; ++q)
                    im.k.push_back({q, q, Complex(-target_val.imag(), 0.0)});
                cc.conic_equalities.push_back(std::move(im));
              }
            }
      break;
    }
    case FreeSetKind::Mio: {
      // <i| J |i> diagonal in the incoherent output basis for every i.
      for (int i = 0; i < din; ++i)
        for (int al = 0; al < dout; ++al)
          for (int be = al + 1; be < dout; ++be)
            push_entry_zero_rows(cc.conic_equalities, idx(i, al), idx(i, be));
      break;
    }
    case FreeSetKind::GibbsPreserving: {
      Matrix tau_in = gibbs_state(spec.hamiltonian_in(), spec.beta()).matrix();
      Matrix tau_out =
          gibbs_state(spec.hamiltonian_out(), spec.beta()).matrix();
      // apply(J, tau_in) = (tr J / din) tau_out, entrywise over al <= be.
      for (int al = 0; al < dout; ++al)
        for (int be = al; be < dout; ++be) {
          Matrix k0 = Matrix::Zero(d, d);
          for (int i = 0; i < din; ++i)
            for (int j = 0; j < din; ++j)
              k0(idx(j, be), idx(i, al)) += tau_in(i, j);
          push_complex_functional_rows(cc.conic_equalities, k0,
                                       tau_out(al, be) / double(din));
        }
      break;
    }
    case FreeSetKind::MaxMixedPreserving: {
      // Tr_in J = (tr J / dout) I_out.
      for (int al = 0; al < dout; ++al)
        for (int be = al; be < dout; ++be) {
          Matrix k0 = Matrix::Zero(d, d);
          for (int a = 0; a < din; ++a) k0(idx(a, be), idx(a, al)) = 1.0;
          Complex factor = (al == be) ? Complex(1.0 / dout, 0.0) : Complex(0.0);
          push_complex_functional_rows(cc.conic_equalities, k0, factor);
        }
      break;
    }
    case FreeSetKind::Custom: {
      cc.conic_equalities = spec.custom_equalities();
      cc.inequalities = spec.custom_inequalities();
      break;
    }
  }

  if (include_tp) {
    for (int a = 0; a < din; ++a)
      for (int b = a; b < din; ++b) {
        if (a == b) {
          LinearFunctional row;
          for (int be = 0; be < dout; ++be)
            row.k.push_back({idx(a, be), idx(a, be), Complex(1.0, 0.0)});
          row.rhs = 1.0;
          cc.tp_rows.push_back(std::move(row));
        } else {
          LinearFunctional re, im;
          for (int be = 0; be < dout; ++be) {
            re.k.push_back({idx(a, be), idx(b, be), Complex(0.5, 0.0)});
            im.k.push_back({idx(a, be), idx(b, be), Complex(0.0, 0.5)});
          }
          cc.tp_rows.push_back(std::move(re));
          cc.tp_rows.push_back(std::move(im));
        }
      }
  }
  return cc;
}

// ---------------------------------------------------------------------------
// is_free
// ---------------------------------------------------------------------------

bool is_free(const Channel& channel, const FreeSetSpec& spec,
             double tolerance) {
  if (channel.dim_in() != spec.dim_in() ||
      channel.dim_out() != spec.dim_out())
    throw DimensionMismatch("is_free: channel and spec dimension mismatch");
  ConeConstraints cc = compile(spec, /*include_tp=*/false);
  const Matrix& j = channel.choi();
  for (const LinearFunctional& f : cc.conic_equalities)
    if (std::abs(evaluate_functional(f, j) - f.rhs) > tolerance) return false;
  for (const LinearFunctional& f : cc.inequalities)
    if (evaluate_functional(f, j) < f.rhs - tolerance) return false;
  // PSD holds by the Channel invariant; re-check at the caller tolerance.
  return min_eigenvalue(j) >= -tolerance;
}

// ---------------------------------------------------------------------------
// sample_free
// ---------------------------------------------------------------------------

namespace {

Channel incoherent_unitary(int d, Rng& rng) {
  // permutation combined with diagonal phases
  std::vector<int> perm(d);
  for (int i = 0; i < d; ++i) perm[i] = i;
  for (int i = d - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
  Matrix u = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    double th = rng.uniform(0.0, 2.0 * M_PI);
    u(perm[i], i) = Complex(std::cos(th), std::sin(th));
  }
  return Channel::from_unitary(u);
}

DensityMatrix random_diagonal_state(int d, Rng& rng) {
  RealVector p = rng.random_distribution(d);
  Matrix m = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = p(i);
  return DensityMatrix(m);
}

Channel sample_mio(int din, int dout, Rng& rng) {
  std::vector<Channel> parts;
  // measure-and-prepare with incoherent outputs (always MIO)
  {
    std::vector<Matrix> outs;
    for (int i = 0; i < din; ++i)
      outs.push_back(random_diagonal_state(dout, rng).matrix());
    parts.push_back(Channel::from_cq(outs));
  }
  if (din == dout) {
    parts.push_back(incoherent_unitary(din, rng));
    Channel deph = Channel::completely_dephasing(din);
    parts.push_back(compose(deph, incoherent_unitary(din, rng)));
  }
  parts.push_back(
      Channel::constant(random_diagonal_state(dout, rng), din));
  std::vector<double> w(parts.size());
  double total = 0.0;
  for (double& x : w) total += (x = rng.uniform(0.05, 1.0));
  for (double& x : w) x /= total;
  return mix(parts, w);
}

Channel sample_gibbs(const FreeSetSpec& spec, Rng& rng) {
  const int din = spec.dim_in();
  const int dout = spec.dim_out();
  DensityMatrix tau_out = gibbs_state(spec.hamiltonian_out(), spec.beta());
  std::vector<Channel> parts;
  parts.push_back(Channel::constant(tau_out, din));
  if (din == dout &&
      (spec.hamiltonian_in() - spec.hamiltonian_out()).norm() < 1e-12) {
    parts.push_back(Channel::identity(din));
    // phases in the energy eigenbasis commute with the Hamiltonian
    Eigen::SelfAdjointEigenSolver<Matrix> es(spec.hamiltonian_in());
    Vector phases(din);
    for (int i = 0; i < din; ++i) {
      double th = rng.uniform(0.0, 2.0 * M_PI);
      phases(i) = Complex(std::cos(th), std::sin(th));
    }
    Matrix u = es.eigenvectors() * phases.asDiagonal() *
               es.eigenvectors().adjoint();
    parts.push_back(Channel::from_unitary(u));
  }
  std::vector<double> w(parts.size());
  double total = 0.0;
  for (double& x : w) total += (x = rng.uniform(0.05, 1.0));
  for (double& x : w) x /= total;
  return mix(parts, w);
}

Channel sample_max_mixed(int din, int dout, Rng& rng) {
  if (din == dout) {
    std::vector<Channel> parts;
    int k = 2 + rng.uniform_int(0, 2);
    for (int i = 0; i < k; ++i)
      parts.push_back(Channel::from_unitary(rng.haar_unitary(din)));
    std::vector<double> w(parts.size());
    double total = 0.0;
    for (double& x : w) total += (x = rng.uniform(0.05, 1.0));
    for (double& x : w) x /= total;
    return mix(parts, w);
  }
  if (din % dout == 0) {
    // unitary followed by a partial trace keeps the flat state flat
    Channel u = Channel::from_unitary(rng.haar_unitary(din));
    Channel tr = partial_trace_channel(dout, din / dout, /*keep_first=*/true);
    return compose(tr, u);
  }
  if (dout % din == 0) {
    // attach a maximally mixed ancilla, then a mixing unitary
    int k = dout / din;
    Channel attach =
        tensor(Channel::identity(din),
               Channel::constant(DensityMatrix::maximally_mixed(k), 1));
    Channel u = Channel::from_unitary(rng.haar_unitary(dout));
    return compose(u, attach);
  }
  return Channel::constant(DensityMatrix::maximally_mixed(dout), din);
}

}  // namespace

Channel sample_free(const FreeSetSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  Channel out = [&]() -> Channel {
    switch (spec.kind()) {
      case FreeSetKind::Constant:
        return Channel::constant(
            DensityMatrix(rng.random_density(spec.dim_out())), spec.dim_in());
      case FreeSetKind::ConstantFixed:
        return Channel::constant(DensityMatrix(spec.target()), spec.dim_in());
      case FreeSetKind::Mio:
        return sample_mio(spec.dim_in(), spec.dim_out(), rng);
      case FreeSetKind::GibbsPreserving:
        return sample_gibbs(spec, rng);
      case FreeSetKind::MaxMixedPreserving:
        return sample_max_mixed(spec.dim_in(), spec.dim_out(), rng);
      case FreeSetKind::Custom:
        throw UnsupportedKind("sample_free: custom cones are not samplable");
    }
    throw UnsupportedKind("sample_free: unknown kind");
  }();
  if (!is_free(out, spec, 1e-8))
    throw std::logic_error("sample_free produced a non-free channel");
  return out;
}

// ---------------------------------------------------------------------------
// axiom_check
// ---------------------------------------------------------------------------

bool AxiomReport::all_applicable_hold() const {
  for (const AxiomFinding& f : findings)
    if (f.applicable && !f.holds) return false;
  return true;
}

AxiomReport axiom_check(const FreeSetSpec& spec, int trials,
                        std::uint64_t seed) {
  AxiomReport rep;
  rep.cone = to_string(spec.kind());
  rep.trials = trials;
  const int din = spec.dim_in();
  const int dout = spec.dim_out();
  const double tol = 1e-8;

  auto add = [&](std::string axiom, bool applicable, bool holds,
                 std::string note) {
    rep.findings.push_back(
        {std::move(axiom), applicable, holds, std::move(note)});
  };

  bool samplable = spec.kind() != FreeSetKind::Custom;
  if (!samplable) {
    add("sampling", false, false, "custom cones are not samplable");
    return rep;
  }

  // 1a. closure under composition (needs composable signatures)
  if (din == dout) {
    bool ok = true;
    std::string note;
    for (int t = 0; t < trials && ok; ++t) {
      Channel m1 = sample_free(spec, seed + 2 * t);
      Channel m2 = sample_free(spec, seed + 2 * t + 1);
      if (!is_free(compose(m2, m1), spec, tol)) {
        ok = false;
        note = "violated at trial " + std::to_string(t);
      }
    }
    add("closure_composition", true, ok, note);
  } else {
    add("closure_composition", false, false, "needs dim_in == dim_out");
  }

  // 1b. closure under tensor product
  if (auto sq = spec.at_dims(din * din, dout * dout)) {
    bool ok = true;
    std::string note;
    for (int t = 0; t < trials && ok; ++t) {
      Channel m1 = sample_free(spec, seed + 1000 + 2 * t);
      Channel m2 = sample_free(spec, seed + 1000 + 2 * t + 1);
      if (!is_free(tensor(m1, m2), *sq, tol)) {
        ok = false;
        note = "violated at trial " + std::to_string(t);
      }
    }
    add("closure_tensor", true, ok, note);
  } else {
    add("closure_tensor", false, false, "no canonical tensor extension");
  }

  // 3. identity membership
  if (din == dout) {
    bool ok = is_free(Channel::identity(din), spec, tol);
    add("identity_free", true, ok,
        ok ? "" : "identity channel is not in this cone");
  } else {
    add("identity_free", false, false, "needs dim_in == dim_out");
  }

  // 4. (partial) trace availability
  if (auto tr_spec = spec.at_dims(din, 1)) {
    bool ok = is_free(partial_trace_channel(1, din, /*keep_first=*/true)
                      , *tr_spec, tol);
    add("trace_free", true, ok, ok ? "" : "full trace is not free");
  } else {
    add("trace_free", false, false, "no extension to trivial output");
  }

  // 5. free states exist
  if (auto st_spec = spec.at_dims(1, dout)) {
    bool ok = false;
    std::string note = "no free state found";
    try {
      Channel prep = sample_free(*st_spec, seed + 3000);
      ok = is_free(prep, *st_spec, tol);
      if (ok) note.clear();
    } catch (const std::exception& e) {
      note = e.what();
    }
    add("free_states", true, ok, note);
  } else {
    add("free_states", false, false, "no extension to trivial input");
  }

  // 6. convexity
  {
    bool ok = true;
    std::string note;
    for (int t = 0; t < trials && ok; ++t) {
      Rng r(seed + 4000 + t);
      double p = r.uniform(0.1, 0.9);
      Channel m1 = sample_free(spec, seed + 5000 + 2 * t);
      Channel m2 = sample_free(spec, seed + 5000 + 2 * t + 1);
      if (!is_free(mix({m1, m2}, {p, 1 - p}), spec, tol)) {
        ok = false;
        note = "violated at trial " + std::to_string(t);
      }
    }
    add("convexity", true, ok, note);
  }

  // 7. permutations are free on doubled systems
  if (din == dout) {
    if (auto sq = spec.at_dims(din * din, dout * dout)) {
      Channel swap_ch = permute_systems(tensor(Channel::identity(din),
                                               Channel::identity(din)),
                                        {din, din}, {din, din}, {1, 0});
      bool ok = is_free(swap_ch, *sq, tol);
      add("permutation_free", true, ok,
          ok ? "" : "swap is not free in the doubled cone");
    } else {
      add("permutation_free", false, false, "no tensor extension");
    }
  } else {
    add("permutation_free", false, false, "needs dim_in == dim_out");
  }

  return rep;
}

}  // namespace chanres
