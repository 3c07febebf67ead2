#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "affinekit/cech.hpp"
#include "affinekit/rng.hpp"
#include "oracles.hpp"

using namespace affinekit;

namespace {

using Rows = std::vector<std::vector<mpz_class>>;

Rows rows_of(const IntMatrix& M) {
  Rows r(M.rows(), std::vector<mpz_class>(M.cols()));
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) r[i][j] = M(i, j);
  return r;
}

std::size_t qrank(const IntMatrix& M) {
  std::vector<std::vector<mpq_class>> q(M.rows(), std::vector<mpq_class>(M.cols()));
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) q[i][j] = M(i, j);
  return oracle::rational_rank(q);
}

long draw(RngStream& rng, long lo, long hi) {
  return lo + static_cast<long>(std::floor(rng.uniform() * static_cast<double>(hi - lo + 1)));
}

Cochain random_cochain(const LocalSystem& sys, std::size_t p, RngStream& rng, long den = 1) {
  Cochain c = Cochain::zero(sys, p);
  for (auto& v : c.values)
    for (auto& x : v) x = Rational(draw(rng, -3 * den, 3 * den), den);
  c.normalize();
  return c;
}

IntMatrix random_unimodular(std::size_t r, RngStream& rng) {
  IntMatrix G = IntMatrix::identity(r);
  for (int k = 0; k < 4; ++k) {
    const std::size_t a = static_cast<std::size_t>(draw(rng, 0, static_cast<long>(r) - 1));
    const std::size_t b = (a + 1) % r;
    if (a != b) G.add_row(a, b, Integer(draw(rng, -2, 2)));
    if (draw(rng, 0, 3) == 0) G.swap_rows(0, r - 1);
  }
  return G;
}

// Flat twisting M(u->w) = G_w G_u^-1 built from per-vertex gauges (unimodular, so inverses are integral).
void gauge_twist(LocalSystem& sys, RngStream& rng) {
  const Nerve& N = sys.nerve();
  std::vector<IntMatrix> G, Ginv;
  for (std::size_t v = 0; v < N.vertex_count(); ++v) {
    // product of elementary matrices and its inverse in reverse order
    IntMatrix g = IntMatrix::identity(sys.rank()), gi = IntMatrix::identity(sys.rank());
    for (int k = 0; k < 3 && sys.rank() > 1; ++k) {
      const Integer f = draw(rng, -2, 2);
      const std::size_t a = static_cast<std::size_t>(draw(rng, 0, 1)), b = 1 - a;
      IntMatrix E = IntMatrix::identity(sys.rank()), Ei = IntMatrix::identity(sys.rank());
      E(a, b) = f;
      Ei(a, b) = -f;
      g = E * g;
      gi = gi * Ei;
    }
    if (draw(rng, 0, 1)) {
      IntMatrix S = IntMatrix::identity(sys.rank());
      S(0, 0) = -1;
      g = S * g;
      gi = gi * S;
    }
    G.push_back(g);
    Ginv.push_back(gi);
  }
  for (const auto& e : N.simplices(1)) sys.set_monodromy(e[0], e[1], G[e[1]] * Ginv[e[0]]);
  sys.validate();
}

Nerve random_nerve(RngStream& rng, std::size_t n) {
  Nerve N([&] {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back("u" + std::to_string(i));
    return v;
  }());
  oracle::combinations(n, 2, [&](const std::vector<std::size_t>& e) {
    if (draw(rng, 0, 2) > 0) N.add_simplex(e);
  });
  oracle::combinations(n, 3, [&](const std::vector<std::size_t>& t) {
    if (draw(rng, 0, 2) == 0) N.add_simplex(t);
  });
  oracle::combinations(n, 4, [&](const std::vector<std::size_t>& t) {
    if (draw(rng, 0, 5) == 0) N.add_simplex(t);
  });
  return N;
}

bool is_zero(const Cochain& c) {
  for (const auto& v : c.values)
    for (const auto& x : v)
      if (x != 0) return false;
  return true;
}

void check_against_oracle(const LocalSystem& sys) {
  for (std::size_t p = 0; p <= 3; ++p) {
    const auto H = cohomology(sys, p);
    const std::size_t n = sys.nerve().count(p) * sys.rank();
    const std::size_t out = p < 3 ? qrank(coboundary_matrix(sys, p)) : 0;
    const std::size_t in = p > 0 ? qrank(coboundary_matrix(sys, p - 1)) : 0;
    CHECK(H.free_rank == n - out - in);
    if (p == 0) continue;
    const Rows D = rows_of(coboundary_matrix(sys, p - 1));
    for (long prime : {2L, 3L, 5L}) {
      std::size_t divisible = 0;
      for (const auto& t : H.torsion) divisible += t % prime == 0;
      CHECK(divisible == in - oracle::rank_mod_p(D, prime));
    }
  }
}

}  // namespace

TEST_CASE("nerve bookkeeping") {
  const Nerve T = torus_nerve();
  CHECK(T.count(0) == 7);
  CHECK(T.count(1) == 21);
  CHECK(T.count(2) == 14);
  CHECK(T.dim() == 2);
  const Nerve R = rp2_nerve();
  CHECK(R.count(0) - R.count(1) + R.count(2) == 1);
  Nerve N({"a", "b", "c"});
  N.add_simplex(std::vector<std::string>{"c", "a", "b"});
  CHECK(N.count(1) == 3);
  CHECK(N.simplices(2)[0] == Simplex{0, 1, 2});
  CHECK_THROWS_AS(N.add_simplex(std::vector<std::size_t>{0, 0}), Error);
  CHECK_THROWS_AS(N.index({0, 3}), Error);
  Simplex s{2, 0, 1};
  CHECK(sort_sign(s) == 1);
  Simplex t{1, 0, 2};
  CHECK(sort_sign(t) == -1);
}

TEST_CASE("coboundary of 0-cochains by hand") {
  const Nerve N = circle_nerve(3);
  LocalSystem trivial(N, 2);
  Cochain v = Cochain::zero(trivial, 0);
  for (auto& x : v.values) x = {Rational(5), Rational(-2)};
  CHECK(is_zero(coboundary(v, trivial)));

  // (dv)(u, w) = v(w) - M(u->w) v(u); twist the edge (v0, v2)
  LocalSystem sys(N, 2);
  const IntMatrix A{{1, 1}, {0, 1}};
  sys.set_monodromy(0, 2, A);
  v.values = {{Rational(1), Rational(2)}, {Rational(0), Rational(0)}, {Rational(3), Rational(-1)}};
  const Cochain d = coboundary(v, sys);
  const std::size_t e02 = N.index({0, 2}), e01 = N.index({0, 1});
  CHECK(d.values[e02] == RatVector{Rational(3 - 3), Rational(-1 - 2)});
  CHECK(d.values[e01] == RatVector{Rational(-1), Rational(-2)});
  // reverse edge carries the inverse
  CHECK(sys.transport(2, 0)(0, 1) == -1);
}

TEST_CASE("dd = 0 on every ring and nerve") {
  RngStream rng(1, 0);
  std::vector<Nerve> nerves = {circle_nerve(4), boundary_tetrahedron(), tetrahedron_nerve(), torus_nerve(), rp2_nerve()};
  for (int k = 0; k < 10; ++k) nerves.push_back(random_nerve(rng, 5));
  for (const auto& N : nerves)
    for (std::size_t r : {1, 2})
      for (auto ring : {Coefficients::Integers, Coefficients::Reals, Coefficients::Torus}) {
        LocalSystem sys(N, r, ring);
        gauge_twist(sys, rng);
        for (std::size_t p = 0; p + 2 <= 3; ++p) {
          if (N.count(p) == 0) continue;
          const Cochain c = random_cochain(sys, p, rng, ring == Coefficients::Integers ? 1 : 7);
          CHECK(is_zero(coboundary(coboundary(c, sys), sys)));
          // the matrix and the direct formula agree
          const IntMatrix D = coboundary_matrix(sys, p);
          if (ring == Coefficients::Integers) {
            const Cochain d = coboundary(c, sys);
            for (std::size_t i = 0; i < D.rows(); ++i) {
              Rational s = 0;
              for (std::size_t j = 0; j < D.cols(); ++j) s += D(i, j) * c.values[j / r][j % r];
              CHECK(s == d.values[i / r][i % r]);
            }
          }
        }
      }
}

TEST_CASE("antisymmetric evaluation") {
  const Nerve N = tetrahedron_nerve();
  LocalSystem sys(N, 1, Coefficients::Reals);
  RngStream rng(2, 0);
  const Cochain c = random_cochain(sys, 2, rng, 5);
  const RatVector v = c.value(sys, {0, 1, 2});
  CHECK(c.value(sys, {1, 0, 2}) == RatVector{-v[0]});
  CHECK(c.value(sys, {1, 2, 0}) == v);
  CHECK(c.value(sys, {0, 0, 2}) == RatVector{Rational(0)});
}

TEST_CASE("cohomology of standard nerves") {
  const Nerve T = torus_nerve();
  const LocalSystem zt(T, 1);
  CHECK(cohomology(zt, 0).text() == "Z");
  CHECK(cohomology(zt, 1).text() == "Z^2");
  CHECK(cohomology(zt, 2).text() == "Z");

  const Nerve S = circle_nerve(3);
  const LocalSystem zs(S, 1);
  CHECK(cohomology(zs, 0).text() == "Z");
  CHECK(cohomology(zs, 1).text() == "Z");

  const Nerve R = rp2_nerve();
  const LocalSystem zr(R, 1);
  CHECK(cohomology(zr, 0).text() == "Z");
  CHECK(cohomology(zr, 1).text() == "0");
  CHECK(cohomology(zr, 2).text() == "Z/2");

  const Nerve B = boundary_tetrahedron();
  const LocalSystem zb(B, 1);
  CHECK(cohomology(zb, 1).text() == "0");
  CHECK(cohomology(zb, 2).text() == "Z");
  const Nerve D = tetrahedron_nerve();
  const LocalSystem zd(D, 1);
  for (std::size_t p = 1; p <= 3; ++p) CHECK(cohomology(zd, p).text() == "0");
}

TEST_CASE("twisted circle") {
  const Nerve S = circle_nerve(3);
  LocalSystem unipotent(S, 2);
  unipotent.set_monodromy(2, 0, IntMatrix{{1, 1}, {0, 1}});
  // fixed vectors Z e1; coker of [[0,1],[0,0]] is Z
  CHECK(cohomology(unipotent, 0).text() == "Z");
  CHECK(cohomology(unipotent, 1).text() == "Z");

  LocalSystem sign(S, 1);
  sign.set_monodromy(0, 1, IntMatrix{{-1}});
  CHECK(cohomology(sign, 0).text() == "0");
  CHECK(cohomology(sign, 1).text() == "Z/2");

  LocalSystem bad(boundary_tetrahedron(), 1);
  CHECK_THROWS_AS(bad.set_monodromy(0, 1, IntMatrix{{2}}), Error);
}

TEST_CASE("cohomology matches rank oracles on random nerves") {
  RngStream rng(3, 0);
  for (int k = 0; k < 25; ++k) {
    const Nerve N = random_nerve(rng, 4 + static_cast<std::size_t>(k % 3));
    LocalSystem z(N, 1);
    check_against_oracle(z);
    LocalSystem twisted(N, 2);
    gauge_twist(twisted, rng);
    check_against_oracle(twisted);
  }
  check_against_oracle(LocalSystem(rp2_nerve(), 1));
}

TEST_CASE("kernel dimension by enumeration") {
  // all 1-cochains with entries in [-3, 3] on the boundary of a tetrahedron
  const Nerve B = boundary_tetrahedron();
  const LocalSystem sys(B, 1);
  std::vector<std::vector<mpq_class>> kernel;
  Cochain c = Cochain::zero(sys, 1);
  std::vector<long> digits(6, -3);
  while (true) {
    for (std::size_t i = 0; i < 6; ++i) c.values[i][0] = digits[i];
    if (is_zero(coboundary(c, sys))) {
      std::vector<mpq_class> row;
      for (long d : digits) row.push_back(d);
      kernel.push_back(row);
    }
    std::size_t i = 0;
    while (i < 6 && digits[i] == 3) digits[i++] = -3;
    if (i == 6) break;
    ++digits[i];
  }
  // ker d_1 has dimension 3 = im d_0 (H^1 = 0)
  CHECK(oracle::rational_rank(kernel) == 3);
  CHECK(qrank(coboundary_matrix(sys, 0)) == 3);
}

TEST_CASE("Dixmier-Douady cocycles") {
  RngStream rng(4, 0);
  const Nerve D = tetrahedron_nerve();
  LocalSystem sys(D, 1, Coefficients::Torus);

  // triple products of lifts are cocycles
  const Cochain g = random_cochain(sys, 1, rng, 11);
  CHECK(dd_cocycle_check(coboundary(g, sys), sys));

  // random torus 2-cochains: compare with the alternating sum on the 3-cell
  int rejected = 0;
  for (int k = 0; k < 40; ++k) {
    const Cochain c = random_cochain(sys, 2, rng, 5);
    const auto at = [&](Simplex s) { return c.values[D.index(s)][0]; };
    const Rational sum = at({1, 2, 3}) - at({0, 2, 3}) + at({0, 1, 3}) - at({0, 1, 2});
    CHECK(dd_cocycle_check(c, sys) == (sum.get_den() == 1));
    rejected += sum.get_den() != 1;
  }
  CHECK(rejected > 20);

  const Nerve B = boundary_tetrahedron();
  LocalSystem sphere(B, 1, Coefficients::Torus);
  Cochain half = Cochain::zero(sphere, 2);
  half.values[0][0] = Rational(1, 2);
  CHECK(dd_cocycle_check(half, sphere));
}

TEST_CASE("trivializing DD cocycles") {
  RngStream rng(5, 0);
  for (const Nerve& N : {tetrahedron_nerve(), torus_nerve(), boundary_tetrahedron()}) {
    LocalSystem sys(N, 2, Coefficients::Torus);
    gauge_twist(sys, rng);
    for (int k = 0; k < 5; ++k) {
      const Cochain c = coboundary(random_cochain(sys, 1, rng, 13), sys);
      const auto lambda = dd_trivialize(c, sys);
      REQUIRE(lambda.has_value());
      CHECK(coboundary(*lambda, sys).equal_mod_z(c));
      CHECK(dd_class(c, sys) == RatVector(dd_class(c, sys).size()));
    }
    const auto zero = dd_trivialize(Cochain::zero(sys, 2), sys);
    REQUIRE(zero.has_value());
    CHECK(is_zero(*zero));
  }

  // half on one face of the 2-sphere: the fundamental-cycle sum is 1/2
  const Nerve B = boundary_tetrahedron();
  LocalSystem sphere(B, 1, Coefficients::Torus);
  Cochain half = Cochain::zero(sphere, 2);
  half.values[0][0] = Rational(1, 2);
  CHECK_FALSE(dd_trivialize(half, sphere).has_value());
  CHECK(dd_class(half, sphere) == RatVector{Rational(1, 2)});
  // exhaustive: no integer correction z in {-1,0,1}^4 makes c + z a rational coboundary
  const IntMatrix D1 = coboundary_matrix(sphere, 1);
  const std::size_t base = qrank(D1);
  std::vector<long> z(4, -1);
  bool solvable = false;
  while (true) {
    std::vector<std::vector<mpq_class>> aug(4, std::vector<mpq_class>(D1.cols() + 1));
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < D1.cols(); ++j) aug[i][j] = D1(i, j);
      aug[i][D1.cols()] = half.values[i][0] + z[i];
    }
    solvable = solvable || oracle::rational_rank(aug) == base;
    std::size_t i = 0;
    while (i < 4 && z[i] == 1) z[i++] = -1;
    if (i == 4) break;
    ++z[i];
  }
  CHECK_FALSE(solvable);

  Cochain not_cocycle = Cochain::zero(LocalSystem(tetrahedron_nerve(), 1, Coefficients::Torus), 2);
  const Nerve T = tetrahedron_nerve();
  LocalSystem tsys(T, 1, Coefficients::Torus);
  not_cocycle.values[0][0] = Rational(1, 3);
  CHECK_THROWS_AS(dd_trivialize(not_cocycle, tsys), Error);
}

TEST_CASE("DD classes add") {
  RngStream rng(6, 0);
  const Nerve T = torus_nerve();
  LocalSystem sys(T, 1, Coefficients::Torus);
  for (int k = 0; k < 10; ++k) {
    const Cochain a = random_cochain(sys, 2, rng, 6), b = random_cochain(sys, 2, rng, 6);
    const RatVector ca = dd_class(a, sys), cb = dd_class(b, sys), cab = dd_class(a + b, sys);
    REQUIRE(ca.size() == 1);
    Rational s = ca[0] + cb[0];
    if (s >= 1) s -= 1;
    CHECK(cab[0] == s);
  }
  const Nerve B = boundary_tetrahedron();
  LocalSystem sphere(B, 1, Coefficients::Torus);
  Cochain half = Cochain::zero(sphere, 2);
  half.values[2][0] = Rational(1, 2);
  CHECK(dd_trivialize(half + half, sphere).has_value());
}

TEST_CASE("Chern classes of transition data") {
  const Nerve T = torus_nerve();
  const LocalSystem sys(T, 1);
  // trivial transitions
  const TransitionLifts trivial = TransitionLifts::constant(Cochain::zero(sys, 1), T);
  CHECK(chern_class(trivial, sys).is_zero());

  // an integer cocycle equal to 1 on the first triangle: the lift of g(v0 v1)
  // jumps by one on that triangle only
  TransitionLifts gen = trivial;
  gen.lifts[0][0] = {Rational(1)};
  const ChernClass c1 = chern_class(gen, sys);
  CHECK(c1.free == IntVector{Integer(1)});
  CHECK(c1.torsion.empty());
  CHECK(chern_class(gen.scaled(2), sys).free == IntVector{Integer(2)});

  // the generator agrees with cohomology(): H^2 = Z and the class is primitive
  CHECK(cohomology(sys, 2).text() == "Z");

  // independent of the chosen lifts: shift each edge lift by an integer on every triangle
  RngStream rng(7, 0);
  for (int k = 0; k < 5; ++k) {
    TransitionLifts other = gen;
    for (std::size_t e = 0; e < T.count(1); ++e) {
      const long n = draw(rng, -3, 3);
      for (std::size_t t = 0; t < T.count(2); ++t) {
        const Simplex& s = T.simplices(2)[t];
        const Simplex edges[3] = {{s[0], s[1]}, {s[1], s[2]}, {s[0], s[2]}};
        for (int i = 0; i < 3; ++i)
          if (T.index(edges[i]) == e) other.lifts[t][i][0] += n;
      }
    }
    CHECK(chern_class(other, sys).free == c1.free);
  }

  TransitionLifts broken = trivial;
  broken.lifts[3][1] = {Rational(1, 2)};
  CHECK_THROWS_AS(chern_class(broken, sys), Error);

  // torsion on RP^2
  const Nerve R = rp2_nerve();
  const LocalSystem rsys(R, 1);
  TransitionLifts rp = TransitionLifts::constant(Cochain::zero(rsys, 1), R);
  rp.lifts[0][0] = {Rational(1)};
  const ChernClass t = chern_class(rp, rsys);
  CHECK(t.free.empty());
  REQUIRE(t.torsion.size() == 1);
  CHECK(t.torsion[0] == std::pair<Integer, Integer>(2, 1));
  CHECK(chern_class(rp.scaled(2), rsys).is_zero());
}
