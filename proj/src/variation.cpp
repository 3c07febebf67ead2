#include "affinekit/variation.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "affinekit/parallel.hpp"

namespace affinekit {

void LeafModel::validate() const {
  require(q >= 1, ErrorKind::InvalidInput, "leaf model needs q >= 1");
  require(chern.size() == q, ErrorKind::DimMismatch, "need one Chern vector per transverse direction");
  for (const auto& c : chern)
    require(c.size() == h2_rank, ErrorKind::DimMismatch, "Chern vector length differs from h2 rank");
  require(omega0.dim() == h2_rank, ErrorKind::DimMismatch, "base class length differs from h2 rank");
  for (const auto& h : positive_classes)
    require(h.size() == h2_rank, ErrorKind::DimMismatch, "positive class length differs from h2 rank");
}

namespace {

ExactVector scaled_class(const IntVector& c, const ExactScalar& s, const BasisPtr& basis) {
  std::vector<ExactScalar> e;
  e.reserve(c.size());
  for (const auto& cj : c) e.push_back(s.rebased(basis) * Rational(cj));
  return ExactVector(basis, std::move(e));
}

}  // namespace

ExactVector variation_along(const LeafModel& leaf, const ExactVector& dev) {
  leaf.validate();
  require(dev.dim() == leaf.q, ErrorKind::DimMismatch,
          "developing value has dimension " + std::to_string(dev.dim()) + ", expected " +
              std::to_string(leaf.q));
  const BasisPtr basis = merge_bases(leaf.omega0.basis(), dev.basis());
  ExactVector out = leaf.omega0.rebased(basis);
  for (std::size_t i = 0; i < leaf.q; ++i) out += scaled_class(leaf.chern[i], dev[i], basis);
  return out;
}

LeafModel pi1_action(const LeafModel& leaf, const AffineElement& gamma) {
  leaf.validate();
  require(gamma.dim() == leaf.q, ErrorKind::DimMismatch, "pi1 element dimension differs from q");
  LeafModel out = leaf;
  out.omega0 = variation_along(leaf, gamma.u);
  for (std::size_t i = 0; i < leaf.q; ++i) {
    IntVector c(leaf.h2_rank);
    for (std::size_t k = 0; k < leaf.q; ++k)
      for (std::size_t j = 0; j < leaf.h2_rank; ++j) c[j] += gamma.A(k, i) * leaf.chern[k][j];
    out.chern[i] = std::move(c);
  }
  return out;
}

bool in_symplectic_cone(const LeafModel& leaf, const ExactVector& cls) {
  require(cls.dim() == leaf.h2_rank, ErrorKind::DimMismatch, "class length differs from h2 rank");
  for (const auto& h : leaf.positive_classes) {
    ExactScalar pairing = ExactScalar::zero(cls.basis());
    for (std::size_t j = 0; j < h.size(); ++j) pairing += cls[j] * Rational(h[j]);
    if (pairing.is_rational() ? pairing.rational_value() <= 0 : pairing.to_long_double() <= 0)
      return false;
  }
  return true;
}

VariationResult variation_decomposition(const LeafModel& leaf) {
  leaf.validate();
  // columns are the Chern vectors: v -> sum v^i c_i
  IntMatrix C(leaf.h2_rank, leaf.q);
  bool all_zero = true;
  for (std::size_t i = 0; i < leaf.q; ++i)
    for (std::size_t j = 0; j < leaf.h2_rank; ++j) {
      C(j, i) = leaf.chern[i][j];
      if (C(j, i) != 0) all_zero = false;
    }
  VariationResult r;
  const IntegerKernel ker = integer_kernel(C);
  if (ker.kernel.cols() > 0) {
    const IntMatrix H = hermite_normal_form(ker.kernel.transpose());
    for (std::size_t i = 0; i < H.rows(); ++i) r.kernel_basis.push_back(H.row(i));
  }
  r.full_variation = r.kernel_basis.empty();
  r.zero_variation = all_zero;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<ExactVector> as_line_vectors(const std::vector<ExactScalar>& xs, const BasisPtr& basis) {
  std::vector<ExactVector> out;
  for (const auto& x : xs) out.push_back(ExactVector(basis, {x.rebased(basis)}));
  return out;
}

void require_subset(const std::vector<ExactScalar>& small, const std::vector<ExactScalar>& big,
                    const std::string& what) {
  for (const auto& s : small) {
    bool found = false;
    for (const auto& b : big) found = found || b == s;
    require(found, ErrorKind::SubsetViolation, what + ": period " + s.to_string() + " is missing");
  }
}

// Z-span of discrete generators in symbol-embedding coordinates, which are rational.
Lattice embedded(const std::vector<ExactVector>& basis, std::size_t width) {
  std::vector<ExactVector> rows;
  for (const auto& v : basis) rows.push_back(ExactVector(v.embedding()));
  return Lattice(width, rows);
}

}  // namespace

MonodromyFamily monodromy_product_family(const std::vector<ExactScalar>& spherical,
                                         const std::vector<ExactScalar>& all,
                                         const std::optional<std::vector<ExactScalar>>& intermediate) {
  BasisPtr basis = PeriodBasis::rational_only();
  for (const auto* list : {&spherical, &all})
    for (const auto& x : *list) basis = merge_bases(basis, x.basis());
  if (intermediate)
    for (const auto& x : *intermediate) basis = merge_bases(basis, x.basis());

  std::vector<ExactScalar> sph, tot;
  for (const auto& x : spherical) sph.push_back(x.rebased(basis));
  for (const auto& x : all) tot.push_back(x.rebased(basis));
  require_subset(sph, tot, "spherical periods must be periods");

  MonodromyFamily f;
  f.n_mon = ClosedSubgroup(1, as_line_vectors(sph, basis));
  f.n_hol = ClosedSubgroup(1, as_line_vectors(tot, basis));
  if (intermediate) {
    std::vector<ExactScalar> mid;
    for (const auto& x : *intermediate) mid.push_back(x.rebased(basis));
    require_subset(sph, mid, "spherical periods must lie in the intermediate group");
    require_subset(mid, tot, "intermediate periods must be periods");
    f.n_e = ClosedSubgroup(1, as_line_vectors(mid, basis));
  }
  f.mon_verdict = is_discrete(f.n_mon);
  f.hol_verdict = is_discrete(f.n_hol);
  if (f.mon_verdict.discrete && f.hol_verdict.discrete) {
    const FiniteIndex fi = finite_index(embedded(f.mon_verdict.basis, basis->size()),
                                        embedded(f.hol_verdict.basis, basis->size()));
    f.index = fi.index;
    f.index_failure = fi.failure;
  }
  return f;
}

bool strong_type_test(const ClosedSubgroup& n_mon, std::size_t q) {
  require(n_mon.dim() == q, ErrorKind::DimMismatch, "monodromy group dimension differs from q");
  const DiscretenessVerdict v = is_discrete(n_mon);
  return v.discrete && v.basis.size() == q;
}

// ---------------------------------------------------------------------------

CurvatureSample sample_curvature(const std::function<double(double, double)>& f, double a1,
                                 double p1, double a2, double p2, std::size_t n1, std::size_t n2) {
  CurvatureSample s{a1, a2, p1, p2, n1, n2, {}};
  s.values.resize(n1 * n2);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j)
      s.values[i * n2 + j] = f(a1 + p1 * (static_cast<double>(i) + 0.5) / static_cast<double>(n1),
                               a2 + p2 * (static_cast<double>(j) + 0.5) / static_cast<double>(n2));
  return s;
}

double curvature_pairing(const CurvatureSample& s) {
  require(s.n1 > 0 && s.n2 > 0, ErrorKind::InconsistentGrid, "empty grid");
  require(s.values.size() == s.n1 * s.n2, ErrorKind::InconsistentGrid,
          "grid has " + std::to_string(s.values.size()) + " values, expected " +
              std::to_string(s.n1 * s.n2));
  require(s.period1 > 0 && s.period2 > 0 && std::isfinite(s.period1) && std::isfinite(s.period2),
          ErrorKind::InconsistentGrid, "periods must be positive");
  for (double v : s.values) require(std::isfinite(v), ErrorKind::InconsistentGrid, "non-finite cell value");
  const double cell = (s.period1 / static_cast<double>(s.n1)) * (s.period2 / static_cast<double>(s.n2));
  const auto rows = parallel_map<double>(s.n1, [&](std::size_t i) {
    return pairwise_sum(s.values.data() + i * s.n2, s.n2);
  });
  return cell * pairwise_sum(rows);
}

double coadjoint_su2_area(double r, std::size_t mesh_n) {
  require(r > 0 && std::isfinite(r), ErrorKind::InvalidInput, "radius must be positive");
  require(mesh_n >= 16, ErrorKind::InvalidInput, "mesh must have at least 16 cells per side");
  using V = std::array<double, 3>;
  auto cross = [](const V& a, const V& b) {
    return V{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  };
  auto dot = [](const V& a, const V& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
  const double pi = std::numbers::pi;
  const double dth = pi / static_cast<double>(mesh_n), dph = 2 * pi / static_cast<double>(mesh_n);
  const double r2 = r * r;
  // w(X, Y) = xi([u, v]) with X = u x xi, Y = v x xi; u = xi x X / r^2 solves the first.
  const auto rows = parallel_map<double>(mesh_n, [&](std::size_t i) {
    const double th = (static_cast<double>(i) + 0.5) * dth;
    std::vector<double> cells(mesh_n);
    for (std::size_t j = 0; j < mesh_n; ++j) {
      const double ph = (static_cast<double>(j) + 0.5) * dph;
      const V xi{r * std::sin(th) * std::cos(ph), r * std::sin(th) * std::sin(ph), r * std::cos(th)};
      const V X{r * std::cos(th) * std::cos(ph), r * std::cos(th) * std::sin(ph), -r * std::sin(th)};
      const V Y{-r * std::sin(th) * std::sin(ph), r * std::sin(th) * std::cos(ph), 0.0};
      V u = cross(xi, X), v = cross(xi, Y);
      for (auto& c : u) c /= r2;
      for (auto& c : v) c /= r2;
      cells[j] = dot(xi, cross(u, v)) * dth * dph;
    }
    return pairwise_sum(cells);
  });
  return pairwise_sum(rows);
}

}  // namespace affinekit
