#include "affinekit/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace affinekit::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::string number_text(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

// "2*a - 1/2 + b" over the symbols of B
ExactScalar parse_linear(const std::string& text, const BasisPtr& B) {
  ExactScalar total = ExactScalar::zero(B);
  std::string term;
  int sign = 1;
  auto flush = [&] {
    const std::string t = trim(term);
    term.clear();
    if (t.empty()) return;
    Rational coeff = sign;
    std::string name;
    for (const auto& factor : split(t, '*')) {
      try {
        coeff *= parse_rational(factor);
      } catch (const Error&) {
        if (!name.empty() || !B->index_of(factor)) bad("cannot read \"" + text + "\" as a combination of symbols");
        name = factor;
      }
    }
    total += name.empty() ? ExactScalar(coeff).rebased(B) : ExactScalar::symbol(B, name, coeff);
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool exponent = i > 0 && (text[i - 1] == 'e' || text[i - 1] == 'E') && !term.empty() &&
                          std::isdigit(static_cast<unsigned char>(term[0]));
    if ((c == '+' || c == '-') && !exponent) {
      flush();
      sign = c == '-' ? -1 : 1;
    } else {
      term += c;
    }
  }
  flush();
  return total;
}

std::string simplex_key(const Nerve& N, const Simplex& s) {
  std::string k;
  for (std::size_t i = 0; i < s.size(); ++i) k += (i ? "," : "") + N.names()[s[i]];
  return k;
}

Simplex simplex_from(const Json& j, const Nerve& N) {
  Simplex s;
  if (j.is_string()) {
    for (const auto& name : split(j.get<std::string>(), ',')) s.push_back(N.vertex_index(name));
    return s;
  }
  if (!j.is_array()) bad("simplex must be an array of vertices or an \"a,b,c\" string");
  for (const auto& v : j) s.push_back(v.is_string() ? N.vertex_index(v.get<std::string>()) : v.get<std::size_t>());
  return s;
}

RatVector fiber_value(const Json& j, std::size_t rank) {
  RatVector v;
  if (j.is_array())
    for (const auto& x : j) v.push_back(rational_from(x));
  else
    v.push_back(rational_from(j));
  if (v.size() != rank) throw Error(ErrorKind::DimMismatch, "cochain value has the wrong rank");
  return v;
}

}  // namespace

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    bad(path + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Rational rational_from(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) {
    // read floats as the decimal they print as, so 0.1 means 1/10
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, j.get<double>());
    return parse_rational(std::string(buf, res.ptr));
  }
  bad("expected a rational number, got " + j.dump());
}

Json to_json(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return affinekit::to_string(c);
}
Json to_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return affinekit::to_string(z);
}

BasisPtr basis_from(const Json& j) {
  if (!j.is_object() || !j.contains("symbols")) return PeriodBasis::rational_only();
  std::vector<PeriodSymbol> symbols;
  for (const auto& s : j.at("symbols")) {
    PeriodSymbol p;
    p.name = field(s, "name").get<std::string>();
    const Json& a = field(s, "approx");
    p.approx = a.is_string() ? a.get<std::string>() : number_text(a.get<double>());
    p.rational = s.value("rational", false);
    if (p.rational) p.value = parse_rational(p.approx);
    symbols.push_back(std::move(p));
  }
  return PeriodBasis::make(std::move(symbols));
}

Json to_json(const PeriodBasis& B) {
  Json syms = Json::array();
  for (std::size_t i = 1; i < B.size(); ++i) {
    const auto& s = B.symbol(i);
    syms.push_back({{"name", s.name}, {"approx", s.approx}, {"rational", s.rational}});
  }
  return {{"symbols", syms}};
}

ExactScalar scalar_from(const Json& j, const BasisPtr& B) {
  if (j.is_array()) {
    RatVector c;
    for (const auto& x : j) c.push_back(rational_from(x));
    if (c.size() != B->size()) throw Error(ErrorKind::DimMismatch, "coefficient array does not match the symbol basis");
    return ExactScalar(B, c);
  }
  if (j.is_string()) {
    try {
      return ExactScalar(parse_rational(j.get<std::string>())).rebased(B);
    } catch (const Error&) {
      return parse_linear(j.get<std::string>(), B);
    }
  }
  return ExactScalar(rational_from(j)).rebased(B);
}

ExactVector vector_from(const Json& j, const BasisPtr& B) {
  if (!j.is_array()) bad("expected a vector, got " + j.dump());
  std::vector<ExactScalar> e;
  for (const auto& x : j) e.push_back(scalar_from(x, B));
  return ExactVector(B, std::move(e));
}

Json to_json(const ExactScalar& s) {
  if (s.is_rational()) return to_json(s.rational_value());
  Json c = Json::array();
  for (const auto& q : s.coeffs()) c.push_back(to_json(q));
  return c;
}

Json to_json(const ExactVector& v) {
  Json a = Json::array();
  for (const auto& e : v.entries()) a.push_back(to_json(e));
  return a;
}

Json to_json(const std::vector<ExactVector>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

IntVector int_vector_from(const Json& j) {
  if (!j.is_array()) bad("expected an integer vector, got " + j.dump());
  IntVector v;
  for (const auto& x : j) {
    const Rational q = rational_from(x);
    if (q.get_den() != 1) bad("expected an integer, got " + x.dump());
    v.push_back(q.get_num());
  }
  return v;
}

Json to_json(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

IntMatrix int_matrix_from(const Json& j) {
  if (!j.is_array()) bad("expected an integer matrix, got " + j.dump());
  std::vector<IntVector> rows;
  for (const auto& r : j) rows.push_back(int_vector_from(r));
  return IntMatrix::from_rows(rows);
}

Json to_json(const IntMatrix& M) {
  Json a = Json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) a.push_back(to_json(M.row(i)));
  return a;
}

std::vector<double> doubles_from(const Json& j) {
  if (!j.is_array()) bad("expected a numeric vector, got " + j.dump());
  std::vector<double> v;
  for (const auto& x : j) v.push_back(x.is_string() ? rational_from(x).get_d() : x.get<double>());
  return v;
}

// ---------------------------------------------------------------------------

AffineElement element_from(const Json& j, const BasisPtr& B) {
  const ExactVector u = vector_from(field(j, "u"), B);
  const IntMatrix A = j.contains("A") ? int_matrix_from(j.at("A")) : IntMatrix::identity(u.dim());
  return AffineElement(u, A);
}

Json to_json(const AffineElement& g) { return {{"u", to_json(g.u)}, {"A", to_json(g.A)}}; }

GroupPresentation group_from(const Json& j) {
  GroupPresentation P;
  const BasisPtr B = basis_from(j);
  P.dim = field(j, "dim").get<std::size_t>();
  const Json& gens = field(j, "generators");
  auto add = [&](const std::string& name, const Json& g) {
    AffineElement e = element_from(g, B);
    if (e.dim() != P.dim) throw Error(ErrorKind::DimMismatch, "generator " + name + " has the wrong dimension");
    P.add(name, std::move(e));
  };
  if (gens.is_object())
    for (const auto& [name, g] : gens.items()) add(name, g);
  else
    for (const auto& g : gens) add(field(g, "name").get<std::string>(), g);
  if (j.contains("closed_form")) {
    const Json& c = j.at("closed_form");
    ClosedForm cf;
    cf.exponents = field(c, "exponents").get<std::vector<std::string>>();
    for (const auto& e : field(c, "u")) cf.u.push_back(Expression::parse(e.get<std::string>(), cf.exponents));
    for (const auto& row : field(c, "A")) {
      cf.A.emplace_back();
      for (const auto& e : row) cf.A.back().push_back(Expression::parse(e.get<std::string>(), cf.exponents));
    }
    if (cf.u.size() != P.dim || cf.A.size() != P.dim)
      throw Error(ErrorKind::DimMismatch, "closed form has the wrong dimension");
    if (cf.exponents.size() != P.generators.size())
      throw Error(ErrorKind::DimMismatch, "closed form needs one exponent per generator");
    P.closed_form = std::move(cf);
  }
  P.word_bound = j.value("word_bound", std::size_t{8});
  return P;
}

Json to_json(const GroupAnalysis& a) {
  Json lin = Json::array();
  for (const auto& A : a.linear_parts) lin.push_back(to_json(A));
  Json j;
  j["translational_rank"] = a.translational_rank;
  j["translational_basis"] = to_json(a.translational_basis);
  j["generator_translational_rank"] = a.generator_translational_rank;
  j["generator_translational_basis"] =
      to_json(z_basis(a.generator_translational_part.generators(), a.generator_translational_part.dim()));
  j["discrepancy"] = a.discrepancy;
  j["linear_parts"] = lin;
  j["element_count"] = a.element_count;
  j["exhaustive"] = a.exhaustive;
  if (a.closed_form_check) {
    Json mism = Json::array();
    for (const auto& m : a.closed_form_check->mismatches) mism.push_back(m);
    j["closed_form_check"] = {{"agrees", a.closed_form_check->agrees},
                              {"checked", a.closed_form_check->checked},
                              {"mismatches", mism}};
  }
  return j;
}

AtlasGraph atlas_from(const Json& j) {
  if (j.contains("quotient")) return AtlasGraph::quotient(group_from(j.at("quotient")), j.value("chart", "U"));
  const BasisPtr B = basis_from(j);
  AtlasGraph G(field(j, "dim").get<std::size_t>());
  for (const auto& c : field(j, "charts")) G.add_chart(c.get<std::string>());
  for (const auto& e : field(j, "edges")) {
    AffineElement g = element_from(e, B);
    if (g.dim() != G.dim()) throw Error(ErrorKind::DimMismatch, "edge label has the wrong dimension");
    G.add_edge(field(e, "name").get<std::string>(), field(e, "from").get<std::string>(),
               field(e, "to").get<std::string>(), std::move(g));
  }
  if (j.contains("two_cells"))
    for (const auto& w : j.at("two_cells")) G.add_two_cell(w.get<std::string>());
  return G;
}

// ---------------------------------------------------------------------------

LeafModel leaf_from(const Json& j) {
  const BasisPtr B = basis_from(j);
  LeafModel L;
  L.q = field(j, "q").get<std::size_t>();
  L.h2_rank = field(j, "h2_rank").get<std::size_t>();
  for (const auto& c : field(j, "chern")) L.chern.push_back(int_vector_from(c));
  L.omega0 = vector_from(field(j, "omega0"), B);
  if (j.contains("positive_classes"))
    for (const auto& c : j.at("positive_classes")) L.positive_classes.push_back(int_vector_from(c));
  L.validate();
  return L;
}

Json to_json(const DiscretenessVerdict& v) {
  Json j;
  j["discrete"] = v.discrete;
  j["basis"] = to_json(v.basis);
  j["cospan_witness"] = to_json(v.cospan_witness);
  j["provenance"] = v.provenance;
  return j;
}

Json to_json(const MonodromyFamily& f) {
  Json j;
  j["n_mon"] = to_json(f.mon_verdict);
  j["n_hol"] = to_json(f.hol_verdict);
  if (f.n_e) j["n_e"] = to_json(is_discrete(*f.n_e));
  j["strong_type"] = strong_type_test(f.n_mon, 1);
  if (f.index) j["index"] = to_json(*f.index);
  if (f.index_failure)
    j["index_failure"] = *f.index_failure == IndexFailure::NotContained ? "NotContained" : "RankDrop";
  return j;
}

MomentSystem system_from(const Json& j) {
  if (j.is_string()) return builtin_system(j.get<std::string>());
  MomentSystem sys = j.contains("builtin")
                         ? builtin_system(j.at("builtin").get<std::string>())
                         : make_system(j.value("name", "custom"), field(j, "n").get<std::size_t>(),
                                       field(j, "mu").get<std::vector<std::string>>(),
                                       j.value("box_half_width", 10.0));
  if (j.contains("scale")) sys = rescaled(sys, j.at("scale").get<double>());
  return sys;
}

Json to_json(const PeriodLatticeEstimate& e) {
  return {{"base", e.base},
          {"fiber_point", e.fiber_point},
          {"generators", e.generators},
          {"residuals", e.residuals},
          {"candidates", e.candidates}};
}

Json to_json(const MeasureHistogram& h) {
  return {{"edges", h.edges},
          {"mass", h.mass},
          {"stderr", h.stderr_},
          {"total_mass", h.total_mass},
          {"total_stderr", h.total_stderr},
          {"domain_volume", h.domain_volume},
          {"samples", h.samples}};
}

std::string histogram_csv(const MeasureHistogram& h) {
  std::string out;
  const std::size_t axes = h.edges.size();
  for (std::size_t a = 0; a < axes; ++a) {
    const std::string suffix = axes == 1 ? "" : "_" + std::to_string(a + 1);
    out += "bin_lo" + suffix + ",bin_hi" + suffix + ",";
  }
  out += "mass,stderr\r\n";
  for (std::size_t flat = 0; flat < h.mass.size(); ++flat) {
    std::vector<std::size_t> idx(axes);
    std::size_t rest = flat;
    for (std::size_t a = axes; a-- > 0;) {
      idx[a] = rest % h.bins(a);
      rest /= h.bins(a);
    }
    for (std::size_t a = 0; a < axes; ++a)
      out += number_text(h.edges[a][idx[a]]) + "," + number_text(h.edges[a][idx[a] + 1]) + ",";
    out += number_text(h.mass[flat]) + "," + number_text(h.stderr_[flat]) + "\r\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

LocalSystem local_system_from(const Json& j) {
  Nerve N;
  if (j.contains("builtin")) {
    const std::string name = j.at("builtin").get<std::string>();
    if (name == "torus") N = torus_nerve();
    else if (name == "circle") N = circle_nerve(j.value("size", std::size_t{3}));
    else if (name == "sphere") N = boundary_tetrahedron();
    else if (name == "rp2") N = rp2_nerve();
    else if (name == "simplex") N = tetrahedron_nerve();
    else bad("unknown builtin nerve " + name + " (torus, circle, sphere, rp2, simplex)");
  } else {
    N = Nerve(field(j, "vertices").get<std::vector<std::string>>());
    if (j.contains("simplices"))
      for (const auto& [dim, list] : j.at("simplices").items()) {
        for (const auto& s : list) {
          const Simplex v = simplex_from(s, N);
          if (v.size() != std::stoul(dim) + 1) bad("simplex " + s.dump() + " listed under dimension " + dim);
          N.add_simplex(v);
        }
      }
  }
  LocalSystem sys(N, j.value("rank", std::size_t{1}),
                  coefficients_from_string(j.value("ring", std::string("Z"))));
  if (j.contains("monodromy"))
    for (const auto& [edge, M] : j.at("monodromy").items()) {
      const Simplex e = simplex_from(Json(edge), sys.nerve());
      if (e.size() != 2) bad("monodromy key " + edge + " is not an edge");
      sys.set_monodromy(e[0], e[1], int_matrix_from(M));
    }
  sys.validate();
  return sys;
}

Cochain cochain_from(const Json& j, const LocalSystem& sys) {
  const Nerve& N = sys.nerve();
  Cochain c = Cochain::zero(sys, field(j, "degree").get<std::size_t>());
  if (j.contains("ring")) c.ring = coefficients_from_string(j.at("ring").get<std::string>());
  const Json& values = field(j, "values");
  if (values.is_array()) {
    if (values.size() != c.values.size())
      throw Error(ErrorKind::MissingSimplex, "cochain lists " + std::to_string(values.size()) + " values for " +
                                                 std::to_string(c.values.size()) + " simplices");
    for (std::size_t i = 0; i < values.size(); ++i) c.values[i] = fiber_value(values[i], sys.rank());
  } else {
    std::vector<bool> seen(c.values.size(), false);
    for (const auto& [key, v] : values.items()) {
      Simplex s = simplex_from(Json(key), N);
      if (s.size() != c.degree + 1) bad("simplex " + key + " has the wrong dimension");
      const std::size_t given_last = s.back();
      const int sign = sort_sign(s);
      if (sign == 0) bad("repeated vertex in " + key);
      const std::size_t i = N.index(s);
      // stored in the fiber over the sorted last vertex
      const IntMatrix M = sys.transport(given_last, s.back());
      const RatVector raw = fiber_value(v, sys.rank());
      for (std::size_t r = 0; r < sys.rank(); ++r) {
        Rational x = 0;
        for (std::size_t k = 0; k < sys.rank(); ++k) x += M(r, k) * raw[k];
        c.values[i][r] = sign * x;
      }
      seen[i] = true;
    }
    if (j.contains("default")) {
      const RatVector d = fiber_value(j.at("default"), sys.rank());
      for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) c.values[i] = d;
    } else {
      for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
          throw Error(ErrorKind::MissingSimplex,
                      "no value on " + N.simplex_text(N.simplices(c.degree)[i]) + " (give \"default\" to fill)");
    }
  }
  c.normalize();
  return c;
}

Json to_json(const Cochain& c, const LocalSystem& sys) {
  Json values = Json::object();
  const Nerve& N = sys.nerve();
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    Json v = Json::array();
    for (const auto& x : c.values[i]) v.push_back(to_json(x));
    values[simplex_key(N, N.simplices(c.degree)[i])] = v;
  }
  return {{"degree", c.degree}, {"ring", to_string(c.ring)}, {"values", values}};
}

TransitionLifts lifts_from(const Json& j, const LocalSystem& sys) {
  const Nerve& N = sys.nerve();
  TransitionLifts t;
  if (j.contains("edge_lifts")) {
    Json e = j.at("edge_lifts");
    // bare {"a,b": value} maps are real lifts, zero where not given
    if (!e.contains("degree"))
      e = {{"degree", 1}, {"ring", "R"}, {"values", e}, {"default", std::vector<long>(sys.rank(), 0)}};
    const Cochain c = cochain_from(e, sys);
    t = TransitionLifts::constant(c, N);
  } else {
    Cochain zero = Cochain::zero(sys, 1);
    t = TransitionLifts::constant(zero, N);
  }
  if (j.contains("lifts"))
    for (const auto& [key, v] : j.at("lifts").items()) {
      Simplex s = simplex_from(Json(key), N);
      Simplex sorted = s;
      if (s.size() != 3 || sort_sign(sorted) != 1 || sorted != s)
        bad("triangle lifts must be keyed by increasing vertex order, got " + key);
      if (!v.is_array() || v.size() != 3) bad("triangle lift needs three edge values (01, 12, 02)");
      const std::size_t i = N.index(s);
      for (std::size_t k = 0; k < 3; ++k) t.lifts[i][k] = fiber_value(v[k], sys.rank());
    }
  return t;
}

Json to_json(const CohomologyGroup& H) {
  return {{"degree", H.degree}, {"free_rank", H.free_rank}, {"torsion", to_json(IntVector(H.torsion))}, {"group", H.text()}};
}

Json to_json(const ChernClass& c) {
  Json tors = Json::array();
  for (const auto& [order, residue] : c.torsion) tors.push_back({{"order", to_json(order)}, {"residue", to_json(residue)}});
  return {{"free", to_json(c.free)}, {"torsion", tors}, {"zero", c.is_zero()}};
}

}  // namespace affinekit::io
