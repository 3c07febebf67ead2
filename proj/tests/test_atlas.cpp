#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "affinekit/atlas.hpp"
#include "fixtures.hpp"
#include "random_models.hpp"

using namespace affinekit;
using fixture::elem;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

std::vector<Expression> curve(std::initializer_list<const char*> xs) {
  std::vector<Expression> out;
  for (const char* x : xs) out.push_back(Expression::parse(x, {"t"}));
  return out;
}

// Curved path in the second torus model crossing once through g2.
std::vector<PathSegment> crossing_path(std::size_t n) {
  return {sample_segment(curve({"0.2*t^2", "0.5*t + 0.1*t^3"}), 0, 1, n),
          sample_segment(curve({"0.6 + 0.3*(t-1)^2 - 0.1*(t-1)", "-0.4 + 0.5*sin(t-1)"}), 1, 2, n,
                         "g2")};
}

// Exact developed displacement: g2 applied to the analytic end point, minus the start.
std::vector<double> crossing_path_exact() {
  const double x = 0.6 + 0.3 - 0.1, y = -0.4 + 0.5 * std::sin(1.0);
  return {x + y, y + 1};  // g2(x, y) = (x + y, y + 1); start is the origin
}

}  // namespace

TEST_CASE("develop paths on the quotient atlas of the second torus") {
  const auto P = fixture::torus2(false);
  const auto atlas = AtlasGraph::quotient(P);
  const auto empty = develop_path(atlas, make_path(atlas, "U", "id", ExactVector{3, 4}));
  CHECK(empty.composite.is_identity());
  CHECK(*empty.endpoint == ExactVector{3, 4});

  const auto one = develop_path(atlas, make_path(atlas, "U", "g2"));
  CHECK(one.composite == elem({0, 1}, {{1, 1}, {0, 1}}));
  const auto two = develop_path(atlas, make_path(atlas, "U", "g1*g2", ExactVector{0, 0}));
  CHECK(two.composite == elem({1, 1}, {{1, 1}, {0, 1}}));
  CHECK(*two.endpoint == ExactVector{1, 1});
  // closed form with n = m = 1
  CHECK(two.composite == P.closed_form.value_or(fixture::torus2_closed_form()).evaluate({1, 1}));
}

TEST_CASE("holonomy of the torus structures") {
  const auto a1 = AtlasGraph::quotient(fixture::torus1());
  const auto h1 = holonomy(a1, make_path(a1, "U", "g1"));
  CHECK(h1.dev == ExactVector{1, 0});
  CHECK(h1.linear == IntMatrix::identity(2));

  const auto a2 = AtlasGraph::quotient(fixture::torus2(false));
  const auto h2 = holonomy(a2, make_path(a2, "U", "g2"));
  CHECK(h2.dev == ExactVector{0, 1});
  CHECK(h2.linear == IntMatrix({{1, 1}, {0, 1}}));

  auto a3 = AtlasGraph::quotient(fixture::torus1());
  a3.add_two_cell("g1*g2*g1^-1*g2^-1");
  const auto h3 = holonomy(a3, make_path(a3, "U", "g1*g2*g1^-1*g2^-1"));
  CHECK(h3.affine.is_identity());
  // g2 fixes (1,0), so the commutator is trivial there too, but g1 g2 g1 g2^-1 is not
  auto a4 = AtlasGraph::quotient(fixture::torus2(false));
  CHECK_NOTHROW(a4.add_two_cell("g1*g2*g1^-1*g2^-1"));
  CHECK_THROWS_AS(a4.add_two_cell("g1*g2*g1*g2^-1"), Error);
}

TEST_CASE("path validation") {
  AtlasGraph g(1);
  g.add_chart("A");
  g.add_chart("B");
  g.add_edge("ab", "A", "B", elem({2}, {{-1}}));
  // written left to right, traversed right to left
  CHECK_NOTHROW(develop_path(g, make_path(g, "A", "ab^-1*ab")));
  CHECK_THROWS_AS(develop_path(g, make_path(g, "A", "ab*ab")), Error);
  CHECK_THROWS_AS(holonomy(g, make_path(g, "A", "ab")), Error);
  try {
    holonomy(g, make_path(g, "A", "ab"));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotALoop);
  }
  CHECK_THROWS_AS(make_path(g, "A", "zz"), Error);
  CHECK(holonomy(g, make_path(g, "A", "ab^-1*ab")).affine.is_identity());
  try {
    cocycle_check(g, make_path(g, "A", "id"), make_path(g, "B", "id"));
    FAIL("expected BaseMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BaseMismatch);
  }
}

TEST_CASE("cocycle identity: worked cases") {
  const auto a2 = AtlasGraph::quotient(fixture::torus2(false));
  const auto g1 = make_path(a2, "U", "g1"), g2 = make_path(a2, "U", "g2"), triv = make_path(a2, "U", "id");
  CHECK(cocycle_check(a2, g1, triv));
  CHECK(cocycle_check(a2, triv, g2));
  CHECK(cocycle_check(a2, g1, g2));
  CHECK(cocycle_check(a2, g2, g1));
  // tau = g2 then gamma = g1: dev = (0,1) + [[1,1],[0,1]] (1,0) = (1,1)
  const auto both = holonomy(a2, make_path(a2, "U", "g2*g1"));
  CHECK(both.dev == ExactVector{1, 1});
}

TEST_CASE("random atlases: homomorphism, two-cells and the cocycle identity") {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const AtlasGraph g = random_models::atlas(rng);
    const std::size_t base = rng() % g.charts().size();
    for (int k = 0; k < 5; ++k) {
      const EdgePath a = random_models::loop(rng, g, base), b = random_models::loop(rng, g, base);
      CHECK(cocycle_check(g, a, b));
      // homomorphism on concatenation
      EdgePath ab{a.start, a.edges, std::nullopt};
      ab.edges.insert(ab.edges.end(), b.edges.begin(), b.edges.end());
      CHECK(holonomy(g, ab).affine == compose(holonomy(g, a).affine, holonomy(g, b).affine));
      // inserting a backtrack (a 2-cell e * e^-1) changes nothing
      if (!a.edges.empty()) {
        const std::size_t pos = rng() % a.edges.size();
        const std::size_t e = a.edges[pos];
        const std::size_t rev = e ^ 1u;  // reverse edges are stored adjacently
        EdgePath c = a;
        c.edges.insert(c.edges.begin() + static_cast<long>(pos), {e, rev});
        CHECK(holonomy(g, c).affine == holonomy(g, a).affine);
      }
      ++checked;
    }
  }
  CHECK(checked == 1000);
}

TEST_CASE("numeric developing: straight segment and single-chart loop") {
  const auto P1 = fixture::torus1();
  const auto seg = sample_segment(curve({"t", "0"}), 0, 1, 10);
  const auto r = numeric_dev(P1, {seg});
  CHECK(std::fabs(r.dev[0] - 1.0) < 1e-9);
  CHECK(std::fabs(r.dev[1]) < 1e-9);

  const auto P2 = fixture::torus2(false);
  const auto loop = numeric_dev(P2, {sample_segment(curve({"0", "t"}), 0, 1, 10000)});
  const auto h = holonomy(AtlasGraph::quotient(P2), make_path(AtlasGraph::quotient(P2), "U", "g2"));
  CHECK(max_abs_diff(loop.dev, h.dev.to_doubles()) < 1e-6);
}

TEST_CASE("numeric developing: chart crossing reproduces the exact loop") {
  const auto P2 = fixture::torus2(false);
  // first half in the base chart, second half after crossing through g2
  std::vector<PathSegment> path = {
      sample_segment(curve({"0", "t"}), 0, 0.5, 5000),
      sample_segment(curve({"0.5 - (t - 0.5)", "-0.5 + (t - 0.5)"}), 0.5, 1, 5000, "g2")};
  const auto r = numeric_dev(P2, path);
  CHECK(max_abs_diff(r.dev, {0.0, 1.0}) < 1e-6);
  CHECK(r.chart_element.A == IntMatrix({{1, 1}, {0, 1}}));

  // reversed path: dev of the inverse, -A^{-1} dev
  const auto rev = numeric_dev(P2, reverse_path(P2, path));
  CHECK(max_abs_diff(rev.dev, {1.0, -1.0}) < 1e-6);

  // a wrong crossing label is rejected
  path[1].crossing = "g1";
  try {
    numeric_dev(P2, path);
    FAIL("expected InconsistentCrossing");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InconsistentCrossing);
  }
}

TEST_CASE("numeric developing converges at second order") {
  const auto P2 = fixture::torus2(false);
  const auto exact = crossing_path_exact();
  const double fine = max_abs_diff(numeric_dev(P2, crossing_path(5000)).dev, exact);
  CHECK(fine < 1e-6);
  const double e1 = max_abs_diff(numeric_dev(P2, crossing_path(20)).dev, exact);
  const double e2 = max_abs_diff(numeric_dev(P2, crossing_path(40)).dev, exact);
  const double ratio = e1 / e2;
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}
