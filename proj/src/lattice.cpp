#include "affinekit/lattice.hpp"

#include <algorithm>
#include <random>

namespace affinekit {

namespace {

BasisPtr common_basis(const std::vector<ExactVector>& vs) {
  BasisPtr b = PeriodBasis::rational_only();
  for (const auto& v : vs) b = merge_bases(b, v.basis());
  return b;
}

std::vector<ExactVector> rebased_all(const std::vector<ExactVector>& vs, const BasisPtr& b) {
  std::vector<ExactVector> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(v.basis() == b ? v : v.rebased(b));
  return out;
}

RatMatrix embedding_matrix(const std::vector<ExactVector>& vs, std::size_t width) {
  RatMatrix M(vs.size(), width);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const RatVector e = vs[i].embedding();
    for (std::size_t j = 0; j < width; ++j) M(i, j) = e[j];
  }
  return M;
}

// Values substituted for the symbols in the k-th generic specialization: 1 for the
// unit, exact values for rational symbols, seeded pseudo-random integers otherwise.
RatVector specialization(const PeriodBasis& basis, unsigned k) {
  std::mt19937_64 gen(0x9e3779b97f4a7c15ULL + 7919ULL * k);
  std::uniform_int_distribution<long long> dist(1LL << 20, 1LL << 48);
  RatVector t(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto& s = basis.symbol(j);
    t[j] = s.rational ? s.value : Rational(static_cast<long>(dist(gen)));
  }
  return t;
}

// Columns are the specialized vectors.
RatMatrix specialized_columns(const std::vector<ExactVector>& vs, std::size_t dim,
                              const RatVector& t) {
  RatMatrix M(dim, vs.size());
  for (std::size_t k = 0; k < vs.size(); ++k)
    for (std::size_t i = 0; i < dim; ++i) {
      Rational acc = 0;
      const auto& coeffs = vs[k][i].coeffs();
      for (std::size_t j = 0; j < coeffs.size(); ++j)
        if (coeffs[j] != 0) acc += coeffs[j] * t[j];
      M(i, k) = acc;
    }
  return M;
}

bool uses_irrational(const std::vector<ExactVector>& vs) {
  for (const auto& v : vs)
    if (!v.is_rational()) return true;
  return false;
}

// Indices of a maximal R-independent subfamily, scanning in order.
std::vector<std::size_t> independent_subset(const std::vector<ExactVector>& vs) {
  std::vector<std::size_t> keep;
  std::vector<ExactVector> chosen;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    chosen.push_back(vs[i]);
    if (real_rank(chosen) == chosen.size()) {
      keep.push_back(i);
    } else {
      chosen.pop_back();
    }
  }
  return keep;
}

SubgroupDecomposition decompose(std::size_t dim, const std::vector<ExactVector>& generators) {
  SubgroupDecomposition d;
  const std::vector<ExactVector> h = z_basis(generators, dim);
  d.z_rank = h.size();
  d.used_symbol_assertion = uses_irrational(generators);
  if (h.empty()) return d;
  if (!uses_irrational(h)) {
    d.discrete_basis = h;
    return d;
  }
  const BasisPtr basis = h.front().basis();
  const std::size_t n = h.size();

  // Rational relation space S: spanned by the kernels of generic specializations.
  // The closure's identity component is the real span of { sum_k s_k h_k : s in S }.
  RatMatrix S(0, n);
  unsigned stable = 0;
  for (unsigned k = 0; k < n + 8 && stable < 2; ++k) {
    const RatMatrix M = specialized_columns(h, dim, specialization(*basis, k));
    const RatMatrix K = nullspace(M);
    RatMatrix stacked(S.rows() + K.rows(), n);
    for (std::size_t i = 0; i < S.rows(); ++i)
      for (std::size_t j = 0; j < n; ++j) stacked(i, j) = S(i, j);
    for (std::size_t i = 0; i < K.rows(); ++i)
      for (std::size_t j = 0; j < n; ++j) stacked(S.rows() + i, j) = K(i, j);
    RatMatrix grown = row_space(stacked);
    stable = grown.rows() == S.rows() ? stable + 1 : 0;
    S = std::move(grown);
  }
  if (S.rows() == 0) {
    d.discrete_basis = h;
    return d;
  }

  std::vector<ExactVector> candidates;
  for (std::size_t r = 0; r < S.rows(); ++r) candidates.push_back(combine(S.row(r), h));
  for (auto idx : independent_subset(candidates)) d.cospan_basis.push_back(candidates[idx]);

  // Z^n cap S is saturated; its complement in Z^n maps onto the discrete part.
  const RatMatrix perp = nullspace(S);
  const Integer den = common_denominator(perp);
  IntMatrix A(perp.rows(), n);
  for (std::size_t i = 0; i < perp.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) A(i, j) = Rational(perp(i, j) * den).get_num();
  const IntegerKernel ker = integer_kernel(A);
  std::vector<ExactVector> discrete;
  for (std::size_t c = 0; c < ker.complement.cols(); ++c) {
    RatVector w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = ker.complement(i, c);
    discrete.push_back(combine(w, h));
  }
  d.discrete_basis = z_basis(discrete, dim);
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------

Lattice::Lattice(std::size_t dim, std::vector<ExactVector> basis) : dim_(dim) {
  require(basis.size() <= dim, ErrorKind::InvalidInput, "lattice rank exceeds ambient dimension");
  for (const auto& v : basis)
    require(v.dim() == dim, ErrorKind::DimMismatch, "lattice basis vector dimension");
  const BasisPtr b = common_basis(basis);
  basis_ = rebased_all(basis, b);
  const RatMatrix E = embedding_matrix(basis_, dim * b->size());
  require(affinekit::rank(E) == basis_.size(), ErrorKind::InvalidInput,
          "lattice basis vectors are not linearly independent");
}

Lattice Lattice::standard(std::size_t dim) {
  std::vector<ExactVector> e;
  for (std::size_t i = 0; i < dim; ++i) {
    RatVector v(dim);
    v[i] = 1;
    e.emplace_back(v);
  }
  return Lattice(dim, std::move(e));
}

bool Lattice::is_rational() const {
  return std::all_of(basis_.begin(), basis_.end(), [](const ExactVector& v) { return v.is_rational(); });
}

RatMatrix Lattice::basis_matrix() const {
  require(is_rational(), ErrorKind::NonRationalLattice, "lattice has irrational basis entries");
  RatMatrix M(basis_.size(), dim_);
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const RatVector r = basis_[i].rational_values();
    for (std::size_t j = 0; j < dim_; ++j) M(i, j) = r[j];
  }
  return M;
}

ClosedSubgroup::ClosedSubgroup(std::size_t dim, std::vector<ExactVector> generators)
    : dim_(dim), cache_(std::make_shared<Cache>()) {
  for (const auto& g : generators)
    require(g.dim() == dim, ErrorKind::DimMismatch, "subgroup generator dimension");
  generators_ = rebased_all(generators, common_basis(generators));
}

ClosedSubgroup ClosedSubgroup::from_decomposition(std::size_t dim, std::vector<ExactVector> cospan_vs,
                                                  std::vector<ExactVector> discrete) {
  std::vector<ExactVector> gens = cospan_vs;
  gens.insert(gens.end(), discrete.begin(), discrete.end());
  ClosedSubgroup c(dim, gens);
  std::call_once(c.cache_->once, [&] {
    auto& d = c.cache_->value;
    for (auto idx : independent_subset(cospan_vs)) d.cospan_basis.push_back(cospan_vs[idx]);
    d.discrete_basis = z_basis(discrete, dim);
    d.z_rank = d.discrete_basis.size();
    d.used_symbol_assertion = uses_irrational(gens);
  });
  return c;
}

const SubgroupDecomposition& ClosedSubgroup::decomposition() const {
  std::call_once(cache_->once, [this] { cache_->value = decompose(dim_, generators_); });
  return cache_->value;
}

// ---------------------------------------------------------------------------

std::vector<ExactVector> z_basis(const std::vector<ExactVector>& vectors, std::size_t dim) {
  if (vectors.empty()) return {};
  const BasisPtr b = common_basis(vectors);
  const auto vs = rebased_all(vectors, b);
  const std::size_t width = dim * b->size();
  const RatMatrix E = embedding_matrix(vs, width);
  const Integer den = common_denominator(E);
  IntMatrix Z(E.rows(), width);
  for (std::size_t i = 0; i < E.rows(); ++i)
    for (std::size_t j = 0; j < width; ++j) Z(i, j) = Rational(E(i, j) * den).get_num();
  const IntMatrix H = hermite_normal_form(Z);
  std::vector<ExactVector> out;
  for (std::size_t i = 0; i < H.rows(); ++i) {
    RatVector flat(width);
    for (std::size_t j = 0; j < width; ++j) flat[j] = Rational(H(i, j), den);
    for (auto& q : flat) q.canonicalize();
    out.push_back(ExactVector::from_embedding(b, dim, flat));
  }
  return out;
}

std::size_t real_rank(const std::vector<ExactVector>& vectors) {
  if (vectors.empty()) return 0;
  const std::size_t dim = vectors.front().dim();
  const BasisPtr b = common_basis(vectors);
  const auto vs = rebased_all(vectors, b);
  if (!uses_irrational(vs)) return rank(specialized_columns(vs, dim, specialization(*b, 0)));
  std::size_t r = 0;
  for (unsigned k = 0; k < 3; ++k)
    r = std::max(r, rank(specialized_columns(vs, dim, specialization(*b, k))));
  return r;
}

Lattice dual_lattice(const Lattice& L) {
  require(L.rank() == L.dim(), ErrorKind::NotFullRank, "dual lattice needs a full-rank lattice");
  const RatMatrix B = L.basis_matrix();
  const auto inv = inverse(B);
  require(inv.has_value(), ErrorKind::NotFullRank, "singular lattice basis");
  const RatMatrix D = inv->transpose();
  std::vector<ExactVector> rows;
  for (std::size_t i = 0; i < D.rows(); ++i) rows.emplace_back(D.row(i));
  return Lattice(L.dim(), std::move(rows));
}

std::vector<ExactVector> span(const ClosedSubgroup& C) {
  std::vector<ExactVector> out;
  const auto& g = C.generators();
  for (auto idx : independent_subset(g)) out.push_back(g[idx]);
  return out;
}

std::vector<ExactVector> cospan(const ClosedSubgroup& C) { return C.decomposition().cospan_basis; }

DiscretenessVerdict is_discrete(const ClosedSubgroup& C) {
  const auto& d = C.decomposition();
  DiscretenessVerdict v;
  v.discrete = d.cospan_basis.empty();
  if (v.discrete) {
    v.basis = d.discrete_basis;
  } else {
    v.cospan_witness = d.cospan_basis;
  }
  v.provenance = d.used_symbol_assertion
                     ? "relies on the asserted Q-linear independence of the period symbols"
                     : "exact over Q";
  return v;
}

std::size_t discrete_rank(const ClosedSubgroup& C) { return C.decomposition().discrete_basis.size(); }

FiniteIndex finite_index(const Lattice& sub, const Lattice& sup) {
  require(sub.dim() == sup.dim(), ErrorKind::DimMismatch, "lattices in different ambient spaces");
  const RatMatrix Bs = sub.basis_matrix();
  const RatMatrix Bp = sup.basis_matrix();
  FiniteIndex out;
  const auto X = solve_left(Bp, Bs);
  if (!X) {
    out.failure = IndexFailure::NotContained;
    return out;
  }
  for (const auto& q : X->data())
    if (q.get_den() != 1) {
      out.failure = IndexFailure::NotContained;
      return out;
    }
  if (sub.rank() < sup.rank()) {
    out.failure = IndexFailure::RankDrop;
    return out;
  }
  const SmithForm s = smith_normal_form(to_integer(*X));
  Integer idx = 1;
  for (const auto& d : s.invariant_factors()) idx *= d;
  out.index = idx;
  return out;
}

bool contains(const ClosedSubgroup& C, const ExactVector& v) {
  const auto& d = C.decomposition();
  require(d.cospan_basis.empty(), ErrorKind::InvalidInput, "membership needs a discrete subgroup");
  if (v.is_zero()) return true;
  if (d.discrete_basis.empty()) return false;
  std::vector<ExactVector> all = d.discrete_basis;
  all.push_back(v);
  const BasisPtr b = common_basis(all);
  const auto vs = rebased_all(all, b);
  const std::size_t width = C.dim() * b->size();
  RatMatrix B(vs.size() - 1, width);
  for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
    const auto e = vs[i].embedding();
    for (std::size_t j = 0; j < width; ++j) B(i, j) = e[j];
  }
  RatMatrix target(1, width);
  const auto e = vs.back().embedding();
  for (std::size_t j = 0; j < width; ++j) target(0, j) = e[j];
  const auto X = solve_left(B, target);
  if (!X) return false;
  for (const auto& q : X->data())
    if (q.get_den() != 1) return false;
  return true;
}

ClosedSubgroup dual_group(const ClosedSubgroup& C) {
  const auto& d = C.decomposition();
  for (const auto& g : C.generators())
    require(g.is_rational(), ErrorKind::NonRationalLattice, "dual group needs rational generators");
  const std::vector<ExactVector>& h = d.discrete_basis;
  const std::size_t q = C.dim();
  std::vector<ExactVector> dual_discrete;
  if (!h.empty()) {
    RatMatrix H(h.size(), q);
    for (std::size_t i = 0; i < h.size(); ++i) {
      const RatVector r = h[i].rational_values();
      for (std::size_t j = 0; j < q; ++j) H(i, j) = r[j];
    }
    const RatMatrix gram = H * H.transpose();
    const RatMatrix D = *inverse(gram) * H;
    for (std::size_t i = 0; i < D.rows(); ++i) dual_discrete.emplace_back(D.row(i));
  }
  return ClosedSubgroup::from_decomposition(q, annihilator(h, q), dual_discrete);
}

std::vector<ExactVector> annihilator(const std::vector<ExactVector>& subspace, std::size_t dim) {
  RatMatrix M(subspace.size(), dim);
  for (std::size_t i = 0; i < subspace.size(); ++i) {
    const RatVector r = subspace[i].rational_values();
    for (std::size_t j = 0; j < dim; ++j) M(i, j) = r[j];
  }
  const RatMatrix N = nullspace(M);
  std::vector<ExactVector> out;
  for (std::size_t i = 0; i < N.rows(); ++i) out.emplace_back(N.row(i));
  return out;
}

bool same_subspace(const std::vector<ExactVector>& a, const std::vector<ExactVector>& b,
                   std::size_t dim) {
  auto reduce = [dim](const std::vector<ExactVector>& vs) {
    RatMatrix M(vs.size(), dim);
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const RatVector r = vs[i].rational_values();
      for (std::size_t j = 0; j < dim; ++j) M(i, j) = r[j];
    }
    return row_space(M);
  };
  return reduce(a) == reduce(b);
}

}  // namespace affinekit
