#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <thread>

#include "affinekit/lattice.hpp"
#include "oracles.hpp"

using namespace affinekit;

namespace {

IntMatrix random_int_matrix(std::mt19937_64& rng, std::size_t m, std::size_t n, long lo, long hi) {
  std::uniform_int_distribution<long> d(lo, hi);
  IntMatrix M(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) M(i, j) = d(rng);
  return M;
}

std::vector<std::vector<mpz_class>> as_grid(const IntMatrix& M) {
  std::vector<std::vector<mpz_class>> g(M.rows(), std::vector<mpz_class>(M.cols()));
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) g[i][j] = M(i, j);
  return g;
}

bool is_diagonal_chain(const IntMatrix& D) {
  const std::size_t k = std::min(D.rows(), D.cols());
  for (std::size_t i = 0; i < D.rows(); ++i)
    for (std::size_t j = 0; j < D.cols(); ++j)
      if (i != j && D(i, j) != 0) return false;
  for (std::size_t i = 0; i < k; ++i) {
    if (D(i, i) < 0) return false;
    if (i + 1 < k && D(i + 1, i + 1) != 0 && (D(i, i) == 0 || D(i + 1, i + 1) % D(i, i) != 0))
      return false;
    if (i + 1 < k && D(i, i) == 0 && D(i + 1, i + 1) != 0) return false;
  }
  return true;
}

BasisPtr symbols_ab() {
  return PeriodBasis::make({{"a", "2.718281828459045235360287471352662", false, 0},
                            {"b", "3.141592653589793238462643383279502", false, 0}});
}

BasisPtr symbol_sqrt2() {
  return PeriodBasis::make({{"sqrt2", "1.414213562373095048801688724209698", false, 0}});
}

ExactVector vec(std::initializer_list<const char*> entries) {
  RatVector v;
  for (const char* e : entries) v.push_back(parse_rational(e));
  return ExactVector(v);
}

}  // namespace

TEST_CASE("parse_rational accepts fractions and decimals") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-0.125") == Rational(-1, 8));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational(" 7 ") == Rational(7));
  CHECK_THROWS_AS(parse_rational("x"), Error);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
}

TEST_CASE("smith normal form worked examples") {
  SUBCASE("already diagonal") {
    const auto s = smith_normal_form(IntMatrix{{2, 0}, {0, 2}});
    CHECK(s.D == IntMatrix{{2, 0}, {0, 2}});
  }
  SUBCASE("nilpotent") {
    const auto s = smith_normal_form(IntMatrix{{0, 1}, {0, 0}});
    CHECK(s.D == IntMatrix{{1, 0}, {0, 0}});
  }
  SUBCASE("determinant -2") {
    const IntMatrix M{{1, 2}, {3, 4}};
    // oracle: invariant factors from determinantal divisors
    const auto f = oracle::invariant_factors(as_grid(M));
    REQUIRE(f.size() == 2);
    CHECK(f[0] == 1);
    CHECK(f[1] == 2);
    const auto s = smith_normal_form(M);
    CHECK(s.D == IntMatrix{{1, 0}, {0, 2}});
    CHECK(s.U * M * s.V == s.D);
  }
  SUBCASE("brute-force unimodular search reaches diag(1,2)") {
    const IntMatrix M{{1, 2}, {3, 4}};
    bool found = false;
    std::vector<IntMatrix> unimodular;
    for (long a = -2; a <= 2; ++a)
      for (long b = -2; b <= 2; ++b)
        for (long c = -2; c <= 2; ++c)
          for (long d = -2; d <= 2; ++d)
            if (a * d - b * c == 1 || a * d - b * c == -1) unimodular.push_back(IntMatrix{{a, b}, {c, d}});
    for (const auto& U : unimodular) {
      const IntMatrix UM = U * M;
      for (const auto& V : unimodular)
        if (UM * V == IntMatrix{{1, 0}, {0, 2}}) {
          found = true;
          break;
        }
      if (found) break;
    }
    CHECK(found);
  }
}

TEST_CASE("smith normal form property: random integer matrices up to 8x8") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> dim(1, 8);
    const std::size_t m = dim(rng), n = dim(rng);
    const IntMatrix M = random_int_matrix(rng, m, n, -9, 9);
    const auto s = smith_normal_form(M);
    REQUIRE(s.U * M * s.V == s.D);
    REQUIRE(is_unimodular(s.U));
    REQUIRE(is_unimodular(s.V));
    REQUIRE(is_diagonal_chain(s.D));
    if (m <= 5 && n <= 5) {
      const auto expected = oracle::invariant_factors(as_grid(M));
      const auto got = s.invariant_factors();
      REQUIRE(got.size() == expected.size());
      for (std::size_t i = 0; i < got.size(); ++i) REQUIRE(got[i] == expected[i]);
    }
  }
}

TEST_CASE("hermite normal form spans the same lattice") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const IntMatrix M = random_int_matrix(rng, 5, 4, -6, 6);
    const IntMatrix H = hermite_normal_form(M);
    // same row lattice: each is an integer combination of the other
    const auto X = solve_left(to_rational(H), to_rational(M));
    REQUIRE(X.has_value());
    for (const auto& q : X->data()) REQUIRE(q.get_den() == 1);
    CHECK(H.rows() == oracle::rational_rank([&] {
            std::vector<std::vector<mpq_class>> g(M.rows(), std::vector<mpq_class>(M.cols()));
            for (std::size_t i = 0; i < M.rows(); ++i)
              for (std::size_t j = 0; j < M.cols(); ++j) g[i][j] = M(i, j);
            return g;
          }()));
  }
}

TEST_CASE("integer kernel is saturated and complemented") {
  const IntMatrix A{{2, 4, 6}};
  const auto k = integer_kernel(A);
  CHECK(k.kernel.cols() == 2);
  CHECK(k.complement.cols() == 1);
  CHECK((A * k.kernel).is_zero());
  IntMatrix full(3, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    full(i, 0) = k.kernel(i, 0);
    full(i, 1) = k.kernel(i, 1);
    full(i, 2) = k.complement(i, 0);
  }
  CHECK(is_unimodular(full));
}

TEST_CASE("dual lattice") {
  SUBCASE("Z^2 is self-dual") {
    const Lattice d = dual_lattice(Lattice::standard(2));
    CHECK(d.basis_matrix() == RatMatrix{{1, 0}, {0, 1}});
  }
  SUBCASE("diagonal") {
    const Lattice d = dual_lattice(Lattice(2, {vec({"2", "0"}), vec({"0", "1"})}));
    CHECK(d.basis()[0] == vec({"1/2", "0"}));
    CHECK(d.basis()[1] == vec({"0", "1"}));
  }
  SUBCASE("shear: inverse transpose by exact solve") {
    const Lattice d = dual_lattice(Lattice(2, {vec({"1", "1"}), vec({"0", "1"})}));
    CHECK(d.basis()[0] == vec({"1", "0"}));
    CHECK(d.basis()[1] == vec({"-1", "1"}));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(dual_lattice(Lattice(2, {vec({"1", "0"})})), Error);
    const auto b = symbol_sqrt2();
    const ExactVector irr(b, {ExactScalar::symbol(b, "sqrt2"), ExactScalar::zero(b)});
    try {
      dual_lattice(Lattice(2, {irr, vec({"0", "1"})}));
      FAIL("expected NonRationalLattice");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonRationalLattice);
    }
  }
}

TEST_CASE("dual lattice is an involution on random rational lattices") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> num(-5, 5), den(1, 4);
  int checked = 0;
  while (checked < 60) {
    const std::size_t q = 1 + checked % 4;
    std::vector<ExactVector> basis;
    for (std::size_t i = 0; i < q; ++i) {
      RatVector v(q);
      for (auto& x : v) x = Rational(num(rng), den(rng)), x.canonicalize();
      basis.emplace_back(v);
    }
    RatMatrix B(q, q);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j) B(i, j) = basis[i][j].rational_value();
    if (determinant(B) == 0) continue;
    const Lattice L(q, basis);
    const Lattice back = dual_lattice(dual_lattice(L));
    CHECK(z_basis(back.basis(), q) == z_basis(L.basis(), q));
    ++checked;
  }
}

TEST_CASE("span and cospan") {
  SUBCASE("single rational vector") {
    const ClosedSubgroup C(2, {vec({"1", "0"})});
    CHECK(span(C).size() == 1);
    CHECK(cospan(C).empty());
  }
  SUBCASE("<1, sqrt2> is dense in R") {
    const auto b = symbol_sqrt2();
    const ClosedSubgroup C(1, {ExactVector(b, {ExactScalar(1)}), ExactVector(b, {ExactScalar::symbol(b, "sqrt2")})});
    CHECK(span(C).size() == 1);
    CHECK(cospan(C).size() == 1);
    CHECK_FALSE(is_discrete(C).discrete);
  }
  SUBCASE("axes carrying independent rank-1 groups") {
    const auto b = symbol_sqrt2();
    const ClosedSubgroup C(2, {ExactVector(b, {ExactScalar(1), ExactScalar::zero(b)}),
                               ExactVector(b, {ExactScalar::zero(b), ExactScalar::symbol(b, "sqrt2")})});
    CHECK(span(C).size() == 2);
    CHECK(cospan(C).empty());
    CHECK(is_discrete(C).discrete);
  }
  SUBCASE("dense line plus a discrete direction") {
    const auto b = symbol_sqrt2();
    const auto s = ExactScalar::symbol(b, "sqrt2");
    const auto z = ExactScalar::zero(b);
    const ClosedSubgroup C(2, {ExactVector(b, {ExactScalar(1), z}), ExactVector(b, {s, z}),
                               ExactVector(b, {z, ExactScalar(3)})});
    const auto& d = C.decomposition();
    CHECK(d.z_rank == 3);
    REQUIRE(d.cospan_basis.size() == 1);
    CHECK(d.cospan_basis[0][1].is_zero());
    REQUIRE(d.discrete_basis.size() == 1);
    // every generator = cospan component + integer multiple of the discrete basis
    CHECK(d.discrete_basis[0][1] == ExactScalar(3));
  }
}

TEST_CASE("span/cospan duality on rational subgroups") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> num(-4, 4), den(1, 3), count(1, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t q = 1 + trial % 4;
    std::vector<ExactVector> gens;
    const long n = count(rng);
    for (long k = 0; k < n; ++k) {
      RatVector v(q);
      for (auto& x : v) x = Rational(num(rng), den(rng)), x.canonicalize();
      gens.emplace_back(v);
    }
    const ClosedSubgroup C(q, gens);
    const ClosedSubgroup D = dual_group(C);
    CHECK(same_subspace(span(D), annihilator(cospan(C), q), q));
    CHECK(same_subspace(cospan(D), annihilator(span(C), q), q));
    // dual pairing is integral on the discrete parts
    for (const auto& xi : D.decomposition().discrete_basis)
      for (const auto& h : C.decomposition().discrete_basis) {
        Rational dot = 0;
        for (std::size_t i = 0; i < q; ++i) dot += xi[i].rational_value() * h[i].rational_value();
        CHECK(dot.get_den() == 1);
      }
  }
}

TEST_CASE("is_discrete verdicts") {
  const auto b = symbols_ab();
  const ExactVector a(b, {ExactScalar::symbol(b, "a")});
  const ExactVector bb(b, {ExactScalar::symbol(b, "b")});
  SUBCASE("a Z") {
    const auto v = is_discrete(ClosedSubgroup(1, {a}));
    CHECK(v.discrete);
    REQUIRE(v.basis.size() == 1);
    CHECK(v.basis[0] == a);
  }
  SUBCASE("a Z + b Z with independent symbols") {
    const auto v = is_discrete(ClosedSubgroup(1, {a, bb}));
    CHECK_FALSE(v.discrete);
    CHECK(v.cospan_witness.size() == 1);
    CHECK(v.provenance.find("independence") != std::string::npos);
  }
  SUBCASE("<1, 1/2> is (1/2) Z") {
    const auto v = is_discrete(ClosedSubgroup(1, {vec({"1"}), vec({"1/2"})}));
    CHECK(v.discrete);
    REQUIRE(v.basis.size() == 1);
    CHECK(v.basis[0] == vec({"1/2"}));
  }
}

TEST_CASE("discrete basis generates exactly the generated subgroup") {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<long> num(-6, 6), den(1, 4), count(1, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t q = 1 + trial % 3;
    std::vector<ExactVector> gens;
    const long n = count(rng);
    for (long k = 0; k < n; ++k) {
      RatVector v(q);
      for (auto& x : v) x = Rational(num(rng), den(rng)), x.canonicalize();
      gens.emplace_back(v);
    }
    const ClosedSubgroup C(q, gens);
    const auto verdict = is_discrete(C);
    REQUIRE(verdict.discrete);
    for (const auto& g : gens) CHECK(contains(C, g));
    // basis vectors lie in the Z-span of the generators: same HNF lattice
    CHECK(z_basis(verdict.basis, q) == z_basis(gens, q));
  }
}

TEST_CASE("finite index") {
  const Lattice Z2 = Lattice::standard(2);
  SUBCASE("2Z^2 in Z^2") {
    CHECK(*finite_index(Lattice(2, {vec({"2", "0"}), vec({"0", "2"})}), Z2).index == 4);
  }
  SUBCASE("identity") { CHECK(*finite_index(Z2, Z2).index == 1); }
  SUBCASE("<(1,1),(1,-1)> has index 2, cross-checked by counting lattice points") {
    const Lattice sub(2, {vec({"1", "1"}), vec({"1", "-1"})});
    // oracle: integer points x = s(1,1)+t(1,-1) with s,t in [0,1)
    int count = 0;
    for (int x = -3; x <= 3; ++x)
      for (int y = -3; y <= 3; ++y) {
        const Rational s(x + y, 2), t(x - y, 2);
        if (s >= 0 && s < 1 && t >= 0 && t < 1) ++count;
      }
    CHECK(count == 2);
    CHECK(*finite_index(sub, Z2).index == count);
  }
  SUBCASE("failures") {
    CHECK(*finite_index(Z2, Lattice(2, {vec({"2", "0"}), vec({"0", "1"})})).failure ==
          IndexFailure::NotContained);
    CHECK(*finite_index(Lattice(2, {vec({"1", "0"})}), Z2).failure == IndexFailure::RankDrop);
  }
}

TEST_CASE("finite index is multiplicative on nested triples") {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<long> e(-3, 3);
  int checked = 0;
  while (checked < 40) {
    const std::size_t q = 1 + checked % 3;
    auto random_sub = [&](const Lattice& L) -> std::optional<Lattice> {
      IntMatrix T(q, q);
      for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) T(i, j) = e(rng);
      if (determinant(T) == 0) return std::nullopt;
      const RatMatrix B = to_rational(T) * L.basis_matrix();
      std::vector<ExactVector> rows;
      for (std::size_t i = 0; i < q; ++i) rows.emplace_back(B.row(i));
      return Lattice(q, rows);
    };
    std::vector<ExactVector> base;
    for (std::size_t i = 0; i < q; ++i) {
      RatVector v(q);
      v[i] = Rational(1, 1 + static_cast<long>(i));
      base.emplace_back(v);
    }
    const Lattice L0(q, base);
    const auto L1 = random_sub(L0);
    if (!L1) continue;
    const auto L2 = random_sub(*L1);
    if (!L2) continue;
    const Integer i20 = *finite_index(*L2, L0).index;
    const Integer i21 = *finite_index(*L2, *L1).index;
    const Integer i10 = *finite_index(*L1, L0).index;
    CHECK(i20 == i21 * i10);
    ++checked;
  }
}

TEST_CASE("decomposition cache is safe under concurrent first use") {
  const auto b = symbols_ab();
  const ClosedSubgroup C(1, {ExactVector(b, {ExactScalar::symbol(b, "a")}),
                             ExactVector(b, {ExactScalar::symbol(b, "b")})});
  std::vector<std::thread> pool;
  std::vector<std::size_t> ranks(6);
  for (std::size_t t = 0; t < ranks.size(); ++t)
    pool.emplace_back([&, t] { ranks[t] = C.decomposition().cospan_basis.size(); });
  for (auto& th : pool) th.join();
  for (auto r : ranks) CHECK(r == 1);
}
