#include "affinekit/cookbook.hpp"

#include <cmath>
#include <numbers>

namespace affinekit::cookbook {

namespace {

using io::Json;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  Json result = Json::object();
  Json checks = Json::object();
  void check(const std::string& name, bool ok) { checks[name] = ok; }
};

Json finish(Outcome&& o) { return {{"result", std::move(o.result)}, {"checks", std::move(o.checks)}}; }

std::uint64_t samples_or(const Options& opt, std::uint64_t fallback) {
  return opt.samples ? opt.samples : fallback;
}

bool rel_close(double got, double want, double tol) { return std::fabs(got - want) <= tol * std::fabs(want); }

// --- inputs -----------------------------------------------------------------

const char* kTorus1 = R"({
  "dim": 2,
  "generators": {
    "g1": {"u": [1, 0], "A": [[1, 0], [0, 1]]},
    "g2": {"u": [0, 1], "A": [[1, 0], [0, 1]]}
  }
})";

const char* kTorus2 = R"({
  "dim": 2,
  "generators": {
    "g1": {"u": [1, 0], "A": [[1, 0], [0, 1]]},
    "g2": {"u": [0, 1], "A": [[1, 1], [0, 1]]}
  },
  "closed_form": {
    "exponents": ["n", "m"],
    "u": ["n + m*(m-1)/2", "m"],
    "A": [["1", "m"], ["0", "1"]]
  },
  "word_bound": 6
})";

const char* kZ2Z2 = R"({
  "dim": 1,
  "generators": {
    "g1": {"u": [1], "A": [[-1]]},
    "g2": {"u": [0], "A": [[-1]]}
  },
  "word_bound": 6
})";

const char* kSymbols = R"("symbols": [
    {"name": "a", "approx": "1.41421356237309504880168872420969807"},
    {"name": "b", "approx": "3.14159265358979323846264338327950288"}
  ])";

std::string periods(const std::string& spherical, const std::string& all) {
  return std::string("{\n  ") + kSymbols + ",\n  \"spherical\": " + spherical + ",\n  \"all\": " + all + "\n}";
}

const char* kCircleLeaf = R"({
  "q": 1,
  "h2_rank": 1,
  "chern": [[1]],
  "omega0": ["2"]
})";

const char* kTorusNerve = R"({"builtin": "torus", "rank": 1, "ring": "Z"})";

const char* kTwistedCircle = R"({
  "vertices": ["U0", "U1", "U2"],
  "simplices": {"1": [["U0", "U1"], ["U1", "U2"], ["U0", "U2"]]},
  "rank": 2,
  "monodromy": {"U2,U0": [[1, 1], [0, 1]]}
})";

const char* kSphereHalf = R"({
  "nerve": {"builtin": "sphere", "rank": 1, "ring": "T"},
  "cocycle": {"degree": 2, "values": {"v1,v2,v3": "1/2"}, "default": 0}
})";

const char* kChernTorus = R"({
  "nerve": {"builtin": "torus", "rank": 1, "ring": "Z"},
  "lifts": {"lifts": {"v0,v1,v3": [1, 0, 0]}}
})";

// --- groups -------------------------------------------------------------------

Json torus_analyze(const Json& in, std::size_t want_rank, const std::vector<ExactVector>& want_basis) {
  const GroupPresentation P = io::group_from(in);
  const GroupAnalysis a = analyze(P);
  Outcome o;
  o.result = io::to_json(a);
  o.check("translational_rank", a.translational_rank == want_rank);
  o.check("translational_basis", a.translational_basis == want_basis);
  if (a.closed_form_check) o.check("closed_form", a.closed_form_check->agrees);
  return finish(std::move(o));
}

Json torus2_closed_form(const Json& in, const Options&) {
  const GroupPresentation P = io::group_from(in);
  const ClosedFormCheck c = check_closed_form(P, 4);
  Outcome o;
  o.result = {{"agrees", c.agrees}, {"checked", c.checked}, {"mismatches", c.mismatches}};
  o.check("agrees", c.agrees);
  o.check("all_exponents_checked", c.checked >= 81);
  // spot value: g1^2 g2^3 = ((2 + 3, 3), [[1,3],[0,1]])
  const AffineElement g = compose(power(P.generators[0], 2), power(P.generators[1], 3));
  o.check("g1^2*g2^3", g == AffineElement(ExactVector{5, 3}, IntMatrix{{1, 3}, {0, 1}}));
  return finish(std::move(o));
}

Json z2z2_isotropy(const Json& in, const Options&) {
  const GroupPresentation P = io::group_from(in);
  const AffineElement g12 = compose(P.generators[0], P.generators[1]);
  Outcome o;
  for (long n = 0; n <= 3; ++n) {
    const ExactVector x(RatVector{Rational(n, 2)});
    const auto iso = isotropy(P, x);
    Json words = Json::array();
    for (const auto& e : iso) words.push_back(e.word);
    o.result["x=" + to_string(Rational(n, 2))] = words;
    const AffineElement want = compose(power(g12, n - 1), P.generators[0]);
    const bool ok = iso.size() == 2 && iso[0].element.is_identity() && iso[1].element == want;
    o.check("isotropy_at_" + std::to_string(n) + "/2", ok);
  }
  const auto third = isotropy(P, ExactVector(RatVector{Rational(1, 3)}));
  o.result["x=1/3"] = Json::array({third.front().word});
  o.check("trivial_at_1/3", third.size() == 1 && third[0].element.is_identity());
  return finish(std::move(o));
}

Json z2z2_involution(const Json& in, const Options&) {
  const GroupPresentation P = io::group_from(in);
  Outcome o;
  const AffineElement inv = invert(P.generators[0]);
  o.result["inverse_g1"] = io::to_json(inv);
  o.check("g1_is_an_involution", inv == P.generators[0]);
  // g1*g2 is the translation by 1, so the group is infinite: enumeration never closes
  const AffineElement t = compose(P.generators[0], P.generators[1]);
  o.result["g1*g2"] = io::to_json(t);
  o.check("g1*g2_translates_by_1", t == AffineElement::translation(ExactVector{1}));
  const Enumeration e = enumerate_words(P, 6);
  o.result["elements_up_to_length_6"] = e.elements.size();
  o.check("not_finite", !e.closed);
  return finish(std::move(o));
}

Json linear_models(const Json&, const Options&) {
  Outcome o;
  auto names = [](const std::vector<CompactnessType>& v) {
    std::vector<std::string> s;
    for (auto t : v) s.push_back(to_string(t));
    return s;
  };
  const auto all = classify_linear_model(true, true, true);
  const auto none = classify_linear_model(false, true, false);
  const auto noncompact_s = classify_linear_model(true, false, true);
  o.result = {{"finite,compact,finite", names(all)},
              {"infinite,compact,infinite", names(none)},
              {"finite,noncompact,finite", names(noncompact_s)}};
  o.check("all_four", all.size() == 4);
  o.check("none", none.empty());
  o.check("proper_and_strong_proper",
          noncompact_s == std::vector<CompactnessType>{CompactnessType::Proper, CompactnessType::StrongProper});
  return finish(std::move(o));
}

// --- periods ----------------------------------------------------------------------

MonodromyFamily family_from(const Json& in) {
  const BasisPtr B = io::basis_from(in);
  std::vector<ExactScalar> sph, all;
  for (const auto& x : in.at("spherical")) sph.push_back(io::scalar_from(x, B));
  for (const auto& x : in.at("all")) all.push_back(io::scalar_from(x, B));
  return monodromy_product_family(sph, all);
}

Json monodromy_a(const Json& in, const Options&) {
  const MonodromyFamily f = family_from(in);
  Outcome o;
  o.result = io::to_json(f);
  o.check("n_mon_discrete", f.mon_verdict.discrete && f.mon_verdict.basis.size() == 1);
  o.check("n_hol_equals_n_mon", f.index == Integer(1));
  o.check("strong_type", strong_type_test(f.n_mon, 1));
  return finish(std::move(o));
}

Json monodromy_b(const Json& in, const Options&) {
  const MonodromyFamily f = family_from(in);
  Outcome o;
  o.result = io::to_json(f);
  o.check("n_mon_zero", f.mon_verdict.discrete && f.mon_verdict.basis.empty());
  o.check("n_hol_rank_one", f.hol_verdict.discrete && f.hol_verdict.basis.size() == 1);
  o.check("not_strong_type", !strong_type_test(f.n_mon, 1));
  return finish(std::move(o));
}

Json monodromy_c(const Json& in, const Options&) {
  const MonodromyFamily f = family_from(in);
  Outcome o;
  o.result = io::to_json(f);
  o.check("n_mon_discrete", f.mon_verdict.discrete && f.mon_verdict.basis.size() == 1);
  o.check("n_hol_nondiscrete", !f.hol_verdict.discrete);
  return finish(std::move(o));
}

Json monodromy_c_rational(const Json& in, const Options&) {
  const MonodromyFamily f = family_from(in);
  Outcome o;
  o.result = io::to_json(f);
  o.check("n_hol_discrete", f.hol_verdict.discrete);
  o.check("n_hol_basis_1/2", f.hol_verdict.basis == std::vector<ExactVector>{ExactVector(RatVector{Rational(1, 2)})});
  o.check("index_2", f.index == Integer(2));
  return finish(std::move(o));
}

// --- atlases ------------------------------------------------------------------------

Json atlas_loop(const Json& in, const std::string& word, const AffineElement& want) {
  const AtlasGraph G = io::atlas_from({{"quotient", in}});
  const HolonomyResult h = holonomy(G, make_path(G, "U", word));
  Outcome o;
  o.result = {{"loop", word}, {"dev", io::to_json(h.dev)}, {"linear", io::to_json(h.linear)},
              {"affine", io::to_json(h.affine)}};
  o.check("holonomy", h.affine == want);
  o.check("dev_is_translation_part", h.dev == want.u);
  // dev is a cocycle along the loop composed with itself and the other generator
  const std::string other = word == "g1" ? "g2" : "g1";
  o.check("cocycle", cocycle_check(G, make_path(G, "U", word), make_path(G, "U", other)));
  return finish(std::move(o));
}

// --- variation --------------------------------------------------------------------------

Json variation_circle(const Json& in, const Options&) {
  const LeafModel L = io::leaf_from(in);
  Outcome o;
  const ExactVector moved = variation_along(L, ExactVector(RatVector{Rational(3, 2)}));
  o.result["variation_at_3/2"] = io::to_json(moved);
  o.check("omega0_plus_t_e1", moved == ExactVector(RatVector{Rational(2) + Rational(3, 2)}));
  const LeafModel T = pi1_action(L, AffineElement::translation(ExactVector{1}));
  o.result["translated_omega0"] = io::to_json(T.omega0);
  o.check("translation_shifts_by_e1", T.omega0 == ExactVector{3});
  o.check("chern_unchanged", T.chern == L.chern);
  return finish(std::move(o));
}

Json variation_decomposition_cases(const Json&, const Options&) {
  Outcome o;
  LeafModel zero;
  zero.q = 2;
  zero.h2_rank = 2;
  zero.chern = {IntVector{0, 0}, IntVector{0, 0}};
  zero.omega0 = ExactVector{1, 1};
  LeafModel full = zero;
  full.chern = {IntVector{1, 0}, IntVector{1, 2}};
  LeafModel mixed = zero;
  mixed.chern = {IntVector{1, 1}, IntVector{2, 2}};
  const auto z = variation_decomposition(zero), f = variation_decomposition(full), m = variation_decomposition(mixed);
  auto brief = [](const VariationResult& r) {
    Json k = Json::array();
    for (const auto& v : r.kernel_basis) k.push_back(io::to_json(v));
    return Json{{"zero_variation", r.zero_variation}, {"full_variation", r.full_variation}, {"kernel_basis", k}};
  };
  o.result = {{"zero", brief(z)}, {"full", brief(f)}, {"mixed", brief(m)}};
  o.check("zero_case", z.zero_variation && !z.full_variation && z.kernel_basis.size() == 2);
  o.check("full_case", f.full_variation && !f.zero_variation && f.kernel_basis.empty());
  o.check("mixed_case", !m.full_variation && !m.zero_variation && m.kernel_basis.size() == 1);
  return finish(std::move(o));
}

Json reeb_curvature(const Json&, const Options&) {
  Outcome o;
  const auto s = sample_curvature([](double, double) { return -1.0; }, 0, 2 * kPi, 0, 1, 64, 16);
  const double v = curvature_pairing(s);
  o.result = {{"curvature_constant", -1}, {"integral", v}, {"expected", -2 * kPi}};
  o.check("integral_-2pi", std::fabs(v + 2 * kPi) < 1e-6);
  return finish(std::move(o));
}

Json su2_coadjoint(const Json&, const Options&) {
  Outcome o;
  Json rows = Json::array();
  double lo = 1e300, hi = -1e300;
  bool ok = true;
  for (double r : {0.5, 1.0, 2.0, 3.0}) {
    const double area = coadjoint_su2_area(r, 256);
    rows.push_back({{"r", r}, {"area", area}, {"area_over_r", area / r}});
    ok = ok && rel_close(area, 4 * kPi * r, 1e-3);
    lo = std::min(lo, area / r);
    hi = std::max(hi, area / r);
  }
  o.result = {{"orbits", rows}};
  o.check("area_4pi_r", ok);
  o.check("linear_in_r", (hi - lo) / lo < 1e-3);
  return finish(std::move(o));
}

// --- realizations ------------------------------------------------------------------------

Json periods_of(const std::string& system, const std::vector<double>& b, const Options& opt,
                const std::vector<std::vector<double>>& want) {
  const MomentSystem sys = io::system_from(Json(system));
  const auto est = period_lattice(sys, b, opt.seed);
  Outcome o;
  o.result = io::to_json(est);
  bool ok = est.generators.size() == want.size();
  for (std::size_t i = 0; ok && i < want.size(); ++i)
    for (std::size_t k = 0; k < want[i].size(); ++k) ok = ok && std::fabs(est.generators[i][k] - want[i][k]) < 1e-6;
  o.check("generators", ok);
  return finish(std::move(o));
}

Json oscillator_rescaled(const Json&, const Options& opt) {
  const MomentSystem base = builtin_system("oscillator");
  const auto e1 = period_lattice(base, {1.0}, opt.seed);
  const auto e2 = period_lattice(rescaled(base, 2), {2.0}, opt.seed);
  Outcome o;
  o.result = {{"H", io::to_json(e1)}, {"2H", io::to_json(e2)}};
  o.check("halved", std::fabs(e2.generators[0][0] - e1.generators[0][0] / 2) < 1e-6);
  return finish(std::move(o));
}

// --- measures -------------------------------------------------------------------------------

Json dh_s1(const Json&, const Options& opt) {
  const std::vector<std::string> v = {"x1", "x2", "p1", "p2"};
  const auto h = dh_pushforward(LiouvilleSampler::ball(4, 2), {Expression::parse("(x1^2 + p1^2 + x2^2 + p2^2)/2", v)},
                                {uniform_edges(0, 2, 10)}, samples_or(opt, 1000000), opt.seed);
  const auto lin = polynomial_fit(h, 1), flat = polynomial_fit(h, 0);
  Outcome o;
  o.result = {{"histogram", io::to_json(h)},
              {"degree1", {{"coefficients", lin.coefficients}, {"max_relative_residual", lin.max_relative_residual}}},
              {"degree0", {{"coefficients", flat.coefficients}, {"max_relative_residual", flat.max_relative_residual}}}};
  o.check("slope_4pi^2", rel_close(lin.coefficients[1], 4 * kPi * kPi, 0.02));
  o.check("degree1_residual", lin.max_relative_residual < 0.03);
  o.check("degree0_rejected", flat.max_relative_residual > 0.2);
  o.check("total_mass", std::fabs(h.total_mass - 8 * kPi * kPi) <= 3 * h.total_stderr);
  return finish(std::move(o));
}

Json fubini_s2(const Json&, const Options& opt) {
  const std::vector<std::string> v = {"x", "y", "z", "b"};
  const auto r = fubini_check(Expression::parse("z^2", v), Expression::parse("1", {"b"}), 1, 1,
                              samples_or(opt, 100000), opt.seed);
  Outcome o;
  o.result = {{"lhs", r.lhs}, {"lhs_stderr", r.lhs_stderr}, {"rhs", r.rhs}, {"discrepancy", r.discrepancy}};
  o.check("discrepancy_below_1%", r.discrepancy < 0.01);
  o.check("rhs_4pi/3", std::fabs(r.rhs - 4 * kPi / 3) < 1e-9);
  return finish(std::move(o));
}

Json weyl_su2(const Json&, const Options& opt) {
  const auto w = weyl_su2_check(Expression::parse("exp(-r^2)", {"r"}), samples_or(opt, 1000000), opt.seed);
  const double ref = std::pow(kPi, 1.5);
  Outcome o;
  o.result = {{"lhs", w.lhs}, {"lhs_stderr", w.lhs_stderr}, {"rhs", w.rhs}, {"rhs_error", w.rhs_error},
              {"relative_error", w.relative_error}, {"reference", ref}};
  o.check("mc_within_1%", rel_close(w.lhs, ref, 0.01));
  o.check("quadrature_within_1e-8", std::fabs(w.rhs - ref) < 1e-8);
  return finish(std::move(o));
}

Json pair_mass(const Json&, const Options& opt) {
  Outcome o;
  bool ok = true;
  Json rows = Json::array();
  for (double A : {1.0, 4 * kPi}) {
    const auto m = pair_groupoid_mass(A, samples_or(opt, 1000000), opt.seed);
    rows.push_back({{"area", A}, {"mass", m.value}, {"stderr", m.stderr_}, {"expected", A * A}});
    ok = ok && rel_close(m.value, A * A, 0.02);
  }
  o.result = {{"masses", rows}};
  o.check("mass_A^2", ok);
  return finish(std::move(o));
}

// --- Čech ----------------------------------------------------------------------------------

Json cech_torus(const Json& in, const Options&) {
  const LocalSystem sys = io::local_system_from(in);
  Outcome o;
  Json groups = Json::array();
  std::vector<std::string> texts;
  for (std::size_t p = 0; p <= 2; ++p) {
    const auto H = cohomology(sys, p);
    groups.push_back(io::to_json(H));
    texts.push_back(H.text());
  }
  o.result = {{"cohomology", groups}};
  o.check("Z,Z^2,Z", texts == std::vector<std::string>{"Z", "Z^2", "Z"});
  return finish(std::move(o));
}

Json cech_twisted_circle(const Json& in, const Options&) {
  const LocalSystem sys = io::local_system_from(in);
  const auto H0 = cohomology(sys, 0), H1 = cohomology(sys, 1);
  Outcome o;
  o.result = {{"H0", io::to_json(H0)}, {"H1", io::to_json(H1)}};
  o.check("H0_Z", H0.free_rank == 1 && H0.torsion.empty());
  o.check("H1_Z", H1.free_rank == 1 && H1.torsion.empty());
  return finish(std::move(o));
}

Json dd_sphere_half(const Json& in, const Options&) {
  const LocalSystem sys = io::local_system_from(in.at("nerve"));
  const Cochain c = io::cochain_from(in.at("cocycle"), sys);
  Outcome o;
  const bool cocycle = dd_cocycle_check(c, sys);
  const auto lambda = dd_trivialize(c, sys);
  const RatVector cls = dd_class(c, sys);
  Json cj = Json::array();
  for (const auto& q : cls) cj.push_back(io::to_json(q));
  o.result = {{"cocycle", cocycle}, {"trivializable", lambda.has_value()}, {"class", cj}};
  o.check("cocycle", cocycle);
  o.check("not_trivializable", !lambda.has_value());
  o.check("class_1/2", cls == RatVector{Rational(1, 2)});
  const auto doubled = dd_trivialize(c + c, sys);
  o.check("twice_is_trivial", doubled.has_value() && coboundary(*doubled, sys).equal_mod_z(c + c));
  return finish(std::move(o));
}

Json chern_torus(const Json& in, const Options&) {
  const LocalSystem sys = io::local_system_from(in.at("nerve"));
  const TransitionLifts lifts = io::lifts_from(in.at("lifts"), sys);
  const ChernClass c = chern_class(lifts, sys), c2 = chern_class(lifts.scaled(2), sys);
  Outcome o;
  o.result = {{"class", io::to_json(c)}, {"doubled", io::to_json(c2)}};
  o.check("generator", c.free == IntVector{Integer(1)});
  o.check("doubling", c2.free == IntVector{Integer(2)});
  return finish(std::move(o));
}

std::vector<Scenario> build() {
  std::vector<Scenario> s;
  auto add = [&](std::string name, std::string summary, std::string input,
                 std::function<Json(const Json&, const Options&)> f) {
    s.push_back({std::move(name), std::move(summary), std::move(input), std::move(f)});
  };
  add("torus1-analyze", "standard torus group: translational rank 2, basis e1, e2", kTorus1,
      [](const Json& in, const Options&) { return torus_analyze(in, 2, {ExactVector{1, 0}, ExactVector{0, 1}}); });
  add("torus2-analyze", "second torus structure: translational rank 1, basis (1,0)", kTorus2,
      [](const Json& in, const Options&) { return torus_analyze(in, 1, {ExactVector{1, 0}}); });
  add("torus2-closed-form", "g1^n g2^m = ((n + m(m-1)/2, m), [[1,m],[0,1]]) for |n|,|m| <= 4", kTorus2,
      torus2_closed_form);
  add("z2z2-isotropy", "isotropy of the infinite dihedral group at half-integers and at 1/3", kZ2Z2, z2z2_isotropy);
  add("z2z2-involution", "x -> -x + 1 is an involution and the group is infinite", kZ2Z2, z2z2_involution);
  add("linear-models", "compactness types of linear local models", "", linear_models);
  add("monodromy-a", "N_mon = N_hol = aZ", periods(R"(["a"])", R"(["a"])"), monodromy_a);
  add("monodromy-b", "N_mon = 0, N_hol = bZ", periods("[]", R"(["b"])"), monodromy_b);
  add("monodromy-c", "N_mon = aZ, N_hol = aZ + bZ non-discrete for independent a, b",
      periods(R"(["a"])", R"(["a", "b"])"), monodromy_c);
  add("monodromy-c-rational", "a = 1, b = 1/2: N_hol = (1/2)Z and N_mon has index 2",
      periods(R"(["1"])", R"(["1", "1/2"])"), monodromy_c_rational);
  add("atlas-torus1-loop", "holonomy of g1 on the standard torus: dev (1,0), linear Id", kTorus1,
      [](const Json& in, const Options&) {
        return atlas_loop(in, "g1", AffineElement(ExactVector{1, 0}, IntMatrix::identity(2)));
      });
  add("atlas-torus2-loop", "holonomy of g2 on the second torus: ((0,1), [[1,1],[0,1]])", kTorus2,
      [](const Json& in, const Options&) {
        return atlas_loop(in, "g2", AffineElement(ExactVector{0, 1}, IntMatrix{{1, 1}, {0, 1}}));
      });
  add("variation-circle", "q = 1: omega0 + t e1 along dev, translation action", kCircleLeaf, variation_circle);
  add("variation-decomposition", "zero, full and mixed variation", "", variation_decomposition_cases);
  add("reeb-curvature", "constant curvature -1 over theta in [0,2pi), z in [0,1)", "", reeb_curvature);
  add("su2-coadjoint", "KKS areas of su(2) coadjoint orbits are 4 pi r", "", su2_coadjoint);
  add("oscillator-periods", "harmonic oscillator period 2 pi", "",
      [](const Json&, const Options& o) { return periods_of("oscillator", {1.0}, o, {{2 * kPi}}); });
  add("oscillator2-periods", "two oscillators: period lattice 2 pi Z^2", "", [](const Json&, const Options& o) {
    return periods_of("oscillator2", {1.0, 0.5}, o, {{2 * kPi, 0}, {0, 2 * kPi}});
  });
  add("oscillator-rescaled", "H -> 2H halves the period", "", oscillator_rescaled);
  add("dh-s1-c2", "Duistermaat-Heckman density 4 pi^2 c of the diagonal circle action on C^2", "", dh_s1);
  add("fubini-s2", "Fubini on S^2 x [0,1] with f = z^2", "", fubini_s2);
  add("weyl-su2", "Weyl integration on su(2) with a Gaussian: pi^(3/2)", "", weyl_su2);
  add("pair-groupoid-mass", "Liouville mass of S^2 x S^2 is A^2", "", pair_mass);
  add("cech-torus", "H^*(T^2; Z) on the 7-vertex triangulation", kTorusNerve, cech_torus);
  add("cech-twisted-circle", "circle with unipotent monodromy: H^0 = H^1 = Z", kTwistedCircle, cech_twisted_circle);
  add("dd-sphere-half", "1/2 on one face of the 2-sphere is a nontrivial DD class", kSphereHalf, dd_sphere_half);
  add("chern-torus", "transition lifts with Chern class the generator of H^2(T^2; Z)", kChernTorus, chern_torus);
  return s;
}

}  // namespace

const std::vector<Scenario>& scenarios() {
  static const std::vector<Scenario> all = build();
  return all;
}

const Scenario& find(const std::string& name) {
  for (const auto& s : scenarios())
    if (s.name == name) return s;
  throw Error(ErrorKind::InvalidInput, "unknown scenario " + name + " (see `cookbook list`)");
}

io::Json run(const Scenario& s, const Options& opt) {
  const Json input = s.input.empty() ? Json() : Json::parse(s.input);
  Json out = s.run(input, opt);
  bool pass = true;
  for (const auto& [k, v] : out.at("checks").items()) pass = pass && v.get<bool>();
  return {{"scenario", s.name}, {"summary", s.summary}, {"seed", opt.seed}, {"result", out.at("result")},
          {"checks", out.at("checks")}, {"pass", pass}};
}

}  // namespace affinekit::cookbook
