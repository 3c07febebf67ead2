#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "affinekit/affine.hpp"
#include "fixtures.hpp"

using namespace affinekit;
using fixture::elem;

namespace {

AffineElement random_element(std::mt19937_64& rng, std::size_t q) {
  std::uniform_int_distribution<long> d(-3, 3);
  // product of random elementary matrices keeps det = +-1
  IntMatrix A = IntMatrix::identity(q);
  for (int k = 0; k < 4 && q > 1; ++k) {
    std::size_t i = rng() % q, j = rng() % q;
    if (i == j) continue;
    A.add_row(i, j, Integer(d(rng)));
  }
  if (rng() % 2) A.negate_row(rng() % q);
  RatVector u(q);
  for (auto& x : u) x = Rational(d(rng), 1 + rng() % 3);
  return AffineElement(ExactVector(u), A);
}

ExactVector random_point(std::mt19937_64& rng, std::size_t q) {
  std::uniform_int_distribution<long> d(-7, 7);
  RatVector x(q);
  for (auto& v : x) v = Rational(d(rng), 1 + rng() % 5);
  return ExactVector(x);
}

}  // namespace

TEST_CASE("expressions: exact and floating evaluation") {
  const auto e = Expression::parse("n + m*(m-1)/2", {"n", "m"});
  CHECK(e.eval_exact({Rational(3), Rational(4)}) == 9);
  CHECK(e.eval_exact({Rational(0), Rational(-2)}) == 3);
  CHECK(e.is_polynomial() == false);  // contains a division
  const auto p = Expression::parse("(x^2 + p**2)/2", {"x", "p"});
  std::vector<double> g;
  CHECK(p.eval_gradient({3.0, -1.0}, g) == doctest::Approx(5.0));
  CHECK(g[0] == doctest::Approx(3.0));
  CHECK(g[1] == doctest::Approx(-1.0));
  const auto f = Expression::parse("exp(-(x^2))*sin(x) + pi", {"x"});
  std::vector<double> gf;
  const double x = 0.7;
  f.eval_gradient({x}, gf);
  const double h = 1e-6;
  CHECK(gf[0] == doctest::Approx((f.eval({x + h}) - f.eval({x - h})) / (2 * h)).epsilon(1e-7));
  CHECK_THROWS_AS(Expression::parse("x +", {"x"}), Error);
  CHECK_THROWS_AS(Expression::parse("y", {"x"}), Error);
  CHECK_THROWS_AS(Expression::parse("sin(x)", {"x"}).eval_exact({Rational(0)}), Error);
  CHECK(Expression::parse("-2^2", {}).eval_exact({}) == -4);
  CHECK(Expression::parse("2^-1", {}).eval_exact({}) == Rational(1, 2));
  CHECK(Expression::parse("1.5e1 - 1/4", {}).eval_exact({}) == Rational(59, 4));
}

TEST_CASE("compose, invert, act: worked examples") {
  const auto t1 = elem({1, 0}, {{1, 0}, {0, 1}});
  const auto t2 = elem({0, 1}, {{1, 0}, {0, 1}});
  CHECK(compose(t1, t2) == elem({1, 1}, {{1, 0}, {0, 1}}));
  CHECK(act(t1, ExactVector{0, 0}) == ExactVector{1, 0});

  const auto g2 = elem({0, 1}, {{1, 1}, {0, 1}});
  CHECK(compose(g2, invert(g2)).is_identity());
  // (x, y) -> (x + y, y + 1)
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const ExactVector p = random_point(rng, 2);
    CHECK(act(g2, p) == ExactVector(RatVector{p[0].rational_value() + p[1].rational_value(),
                                              p[1].rational_value() + 1}));
  }

  const auto refl = elem({1}, {{-1}});
  CHECK(invert(refl) == refl);
  CHECK_THROWS_AS(AffineElement(ExactVector{0, 0}, IntMatrix{{2, 0}, {0, 1}}), Error);
  CHECK_THROWS_AS(compose(refl, t1), Error);
}

TEST_CASE("second torus group: products of powers follow the closed form") {
  const auto P = fixture::torus2();
  for (long n = -4; n <= 4; ++n)
    for (long m = -4; m <= 4; ++m) {
      const AffineElement direct = compose(power(P.generators[0], n), power(P.generators[1], m));
      // hand formula: ((n + m(m-1)/2, m), [[1, m], [0, 1]])
      const AffineElement expected(ExactVector(RatVector{Rational(n + m * (m - 1) / 2), Rational(m)}),
                                   IntMatrix{{1, m}, {0, 1}});
      CHECK(direct == expected);
    }
  const auto check = check_closed_form(P, 4);
  CHECK(check.agrees);
  CHECK(check.checked > 81);

  // a deliberately wrong rule is caught
  auto Q = P;
  Q.closed_form->u[0] = Expression::parse("n + m*(m+1)/2", {"n", "m"});
  CHECK_FALSE(check_closed_form(Q, 4).agrees);
}

TEST_CASE("word enumeration: infinite dihedral group") {
  const auto P = fixture::z2z2();
  const auto en = enumerate_words(P, 4);
  CHECK(en.elements.size() == 9);
  CHECK_FALSE(en.closed);
  // oracle: elements are x -> x + k and x -> -x + k; words of length <= 4 give
  // translations k in {-2..2} and reflections k in {-1..2}
  std::set<std::pair<long, long>> got, want;
  for (const auto& e : en.elements)
    got.insert({e.element.A(0, 0).get_si(), e.element.u[0].rational_value().get_num().get_si()});
  for (long k = -2; k <= 2; ++k) want.insert({1, k});
  for (long k = -1; k <= 2; ++k) want.insert({-1, k});
  CHECK(got == want);
  // (g1 g2)^k g1 (x) = -x + k + 1
  for (long k = -3; k <= 3; ++k) {
    const auto e = compose(power(compose(P.generators[0], P.generators[1]), k), P.generators[0]);
    CHECK(e == elem({k + 1}, {{-1}}));
  }
}

TEST_CASE("word enumeration: standard torus ball") {
  const auto P = fixture::torus1();
  const auto en = enumerate_words(P, 3);
  std::set<std::pair<long, long>> got, want;
  for (const auto& e : en.elements)
    got.insert({e.element.u[0].rational_value().get_num().get_si(),
                e.element.u[1].rational_value().get_num().get_si()});
  for (long n = -3; n <= 3; ++n)
    for (long m = -3; m <= 3; ++m)
      if (std::labs(n) + std::labs(m) <= 3) want.insert({n, m});
  CHECK(got == want);
  CHECK(en.elements.size() == want.size());
}

TEST_CASE("finite groups are detected as exhaustive") {
  GroupPresentation P;
  P.add("r", elem({0, 0}, {{0, -1}, {1, 0}}));  // rotation of order 4
  const auto en = enumerate_words(P, 3);
  CHECK(en.closed);
  CHECK(en.elements.size() == 4);
  const auto a = analyze(P);
  CHECK(a.exhaustive);
  CHECK(a.translational_rank == 0);
  CHECK(a.linear_parts.size() == 4);
}

TEST_CASE("analyze: translational parts of the torus structures") {
  const auto a1 = analyze(fixture::torus1());
  CHECK(a1.translational_rank == 2);
  REQUIRE(a1.translational_basis.size() == 2);
  CHECK(a1.translational_basis[0] == ExactVector{1, 0});
  CHECK(a1.translational_basis[1] == ExactVector{0, 1});
  CHECK(a1.linear_parts.size() == 1);
  CHECK(a1.linear_part_generators.empty());
  CHECK_FALSE(a1.discrepancy);

  const auto a2 = analyze(fixture::torus2());
  CHECK(a2.translational_rank == 1);
  REQUIRE(a2.translational_basis.size() == 1);
  CHECK(a2.translational_basis[0] == ExactVector{1, 0});
  CHECK(a2.exhaustive);
  REQUIRE(a2.closed_form_check.has_value());
  CHECK(a2.closed_form_check->agrees);
  CHECK(a2.linear_part_generators.size() == 1);

  const auto a3 = analyze(fixture::torus2(false));
  CHECK(a3.translational_rank == 1);
  CHECK_FALSE(a3.exhaustive);
}

TEST_CASE("analyze: dihedral example reports both translational parts") {
  const auto a = analyze(fixture::z2z2());
  CHECK(a.translational_rank == 1);
  REQUIRE(a.translational_basis.size() == 1);
  CHECK(a.translational_basis[0] == ExactVector{1});
  CHECK(a.generator_translational_rank == 0);
  CHECK(a.discrepancy);
  CHECK(a.linear_parts.size() == 2);
}

TEST_CASE("isotropy in the dihedral example") {
  const auto P = fixture::z2z2();
  const auto g1 = P.generators[0], g2 = P.generators[1];
  for (long n = 0; n <= 3; ++n) {
    const auto iso = isotropy(P, ExactVector(RatVector{Rational(n, 2)}), 6);
    REQUIRE(iso.size() == 2);
    CHECK(iso[0].element.is_identity());
    CHECK(iso[1].element == compose(power(compose(g1, g2), n - 1), g1));
  }
  const auto iso1 = isotropy(P, ExactVector(RatVector{Rational(1)}), 6);
  CHECK(iso1[1].word == "g1*g2*g1");
  const auto third = isotropy(P, ExactVector(RatVector{Rational(1, 3)}), 6);
  REQUIRE(third.size() == 1);
  CHECK(third[0].word == "id");
}

TEST_CASE("classify linear local models") {
  using C = CompactnessType;
  CHECK(classify_linear_model(true, true, true) ==
        std::vector<C>{C::Proper, C::SProper, C::StrongProper, C::StrongSProper});
  CHECK(classify_linear_model(false, true, false).empty());
  CHECK(classify_linear_model(true, false, true) == std::vector<C>{C::Proper, C::StrongProper});
}

TEST_CASE("words parse and evaluate") {
  const auto P = fixture::torus2();
  const auto w = P.parse_word("g1*g2^-2 g1");
  CHECK(w.size() == 4);
  CHECK(P.word_text(w) == "g1*g2^-1*g2^-1*g1");
  CHECK(P.evaluate(w) == compose(compose(P.generators[0], power(P.generators[1], -2)), P.generators[0]));
  CHECK(P.evaluate(P.parse_word("id")).is_identity());
  CHECK_THROWS_AS(P.parse_word("g3"), Error);
}

TEST_CASE("group axioms and action on random elements") {
  std::mt19937_64 rng(20240612);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t q = 1 + trial % 3;
    const auto a = random_element(rng, q), b = random_element(rng, q), c = random_element(rng, q);
    CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
    CHECK(compose(a, invert(a)).is_identity());
    CHECK(compose(invert(a), a).is_identity());
    const auto ab = compose(a, b);
    CHECK(ab.u == a.u + apply(a.A, b.u));  // cocycle law
    const auto x = random_point(rng, q);
    CHECK(act(ab, x) == act(a, act(b, x)));
  }
}

TEST_CASE("action property over enumerated pairs") {
  const auto P = fixture::torus2(false);
  const auto en = enumerate_words(P, 3);
  std::mt19937_64 rng(11);
  for (std::size_t i = 0; i < en.elements.size(); i += 3)
    for (std::size_t j = 0; j < en.elements.size(); j += 5) {
      const auto x = random_point(rng, 2);
      const auto& g = en.elements[i].element;
      const auto& h = en.elements[j].element;
      CHECK(act(compose(g, h), x) == act(g, act(h, x)));
      CHECK(P.evaluate(en.elements[i].word) == g);
    }
}

TEST_CASE("translational part grows monotonically with the word bound") {
  for (const auto& P0 : {fixture::z2z2(), fixture::torus2(false), fixture::torus1()}) {
    for (std::size_t L = 1; L < 6; ++L) {
      auto P = P0;
      P.word_bound = L;
      const auto small = analyze(P);
      P.word_bound = L + 1;
      const auto big = analyze(P);
      for (const auto& v : small.translational_basis) CHECK(contains(big.translational_part, v));
    }
  }
}
