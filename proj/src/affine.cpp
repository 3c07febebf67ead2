#include "affinekit/affine.hpp"

#include <cctype>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace affinekit {

AffineElement::AffineElement(ExactVector u_, IntMatrix A_) : u(std::move(u_)), A(std::move(A_)) {
  require(A.rows() == u.dim() && A.cols() == u.dim(), ErrorKind::DimMismatch,
          "linear part must be " + std::to_string(u.dim()) + "x" + std::to_string(u.dim()));
  require(is_unimodular(A), ErrorKind::InvalidInput, "linear part is not in GL(q, Z)");
}

AffineElement AffineElement::identity(std::size_t dim, BasisPtr basis) {
  AffineElement e;
  e.u = ExactVector::zero(std::move(basis), dim);
  e.A = IntMatrix::identity(dim);
  return e;
}

AffineElement AffineElement::translation(ExactVector u) {
  const std::size_t q = u.dim();
  AffineElement e;
  e.u = std::move(u);
  e.A = IntMatrix::identity(q);
  return e;
}

bool AffineElement::is_translation() const { return A == IntMatrix::identity(dim()); }
bool AffineElement::is_identity() const { return is_translation() && u.is_zero(); }

std::string AffineElement::key() const { return u.to_string() + "|" + to_string(A); }

AffineElement compose(const AffineElement& g, const AffineElement& h) {
  require(g.dim() == h.dim(), ErrorKind::DimMismatch, "compose: dimensions differ");
  AffineElement r;
  r.u = g.u + apply(g.A, h.u);
  r.A = g.A * h.A;
  return r;
}

IntMatrix unimodular_inverse(const IntMatrix& A) {
  const auto inv = inverse(to_rational(A));
  require(inv.has_value(), ErrorKind::InvalidInput, "singular linear part");
  return to_integer(*inv);
}

AffineElement invert(const AffineElement& g) {
  AffineElement r;
  r.A = unimodular_inverse(g.A);
  r.u = -apply(r.A, g.u);
  return r;
}

ExactVector act(const AffineElement& g, const ExactVector& x) {
  require(g.dim() == x.dim(), ErrorKind::DimMismatch, "act: dimensions differ");
  return apply(g.A, x) + g.u;
}

AffineElement power(const AffineElement& g, long n) {
  AffineElement base = n < 0 ? invert(g) : g;
  AffineElement r = AffineElement::identity(g.dim(), g.u.basis());
  for (long k = n < 0 ? -n : n; k > 0; --k) r = compose(r, base);
  return r;
}

// ---------------------------------------------------------------------------

AffineElement ClosedForm::evaluate(const std::vector<long>& n) const {
  require(n.size() == exponents.size(), ErrorKind::DimMismatch, "closed form exponent count");
  std::vector<Rational> x(n.begin(), n.end());
  const std::size_t q = u.size();
  RatVector uv(q);
  for (std::size_t i = 0; i < q; ++i) uv[i] = u[i].eval_exact(x);
  RatMatrix A_(q, q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) A_(i, j) = A[i][j].eval_exact(x);
  return AffineElement(ExactVector(uv), to_integer(A_));
}

void GroupPresentation::add(std::string name, AffineElement g) {
  if (generators.empty() && dim == 0) dim = g.dim();
  require(g.dim() == dim, ErrorKind::DimMismatch, "generator '" + name + "' has the wrong dimension");
  require(!index_of(name), ErrorKind::InvalidInput, "duplicate generator '" + name + "'");
  if (!generators.empty()) {
    const BasisPtr b = merge_bases(generators.front().u.basis(), g.u.basis());
    for (auto& h : generators) h.u = h.u.rebased(b);
    g.u = g.u.rebased(b);
  }
  names.push_back(std::move(name));
  generators.push_back(std::move(g));
}

std::optional<std::size_t> GroupPresentation::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  return std::nullopt;
}

std::string GroupPresentation::word_text(const Word& w) const {
  if (w.empty()) return "id";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '*';
    out += names[w[i].generator];
    if (w[i].inverse) out += "^-1";
  }
  return out;
}

Word GroupPresentation::parse_word(const std::string& text) const {
  Word w;
  std::string norm = text;
  for (char& c : norm)
    if (c == '*') c = ' ';
  std::istringstream in(norm);
  std::string tok;
  while (in >> tok) {
    if (tok == "id") continue;
    long exp = 1;
    std::string name = tok;
    if (auto caret = tok.find('^'); caret != std::string::npos) {
      name = tok.substr(0, caret);
      const std::string e = tok.substr(caret + 1);
      try {
        std::size_t used = 0;
        exp = std::stol(e, &used);
        require(used == e.size(), ErrorKind::InvalidInput, "");
      } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidInput, "bad exponent in word token '" + tok + "'");
      }
    }
    const auto idx = index_of(name);
    require(idx.has_value(), ErrorKind::InvalidInput, "unknown generator '" + name + "' in word");
    for (long k = 0; k < std::labs(exp); ++k) w.push_back(Letter{*idx, exp < 0});
  }
  return w;
}

AffineElement GroupPresentation::evaluate(const Word& w) const {
  AffineElement r = AffineElement::identity(dim, generators.empty()
                                                     ? PeriodBasis::rational_only()
                                                     : generators.front().u.basis());
  for (const Letter& l : w) {
    require(l.generator < generators.size(), ErrorKind::InvalidInput, "letter out of range");
    r = compose(r, l.inverse ? invert(generators[l.generator]) : generators[l.generator]);
  }
  return r;
}

// ---------------------------------------------------------------------------

Enumeration enumerate_words(const GroupPresentation& P, std::optional<std::size_t> bound) {
  const std::size_t L = bound.value_or(P.word_bound);
  std::vector<Letter> letters;
  std::vector<AffineElement> letter_elems;
  for (std::size_t g = 0; g < P.generators.size(); ++g) {
    letters.push_back({g, false});
    letter_elems.push_back(P.generators[g]);
    letters.push_back({g, true});
    letter_elems.push_back(invert(P.generators[g]));
  }

  // Breadth-first search on the Cayley graph: the ball of radius L is exactly the
  // set of elements represented by words of length <= L.
  Enumeration out;
  std::unordered_set<std::string> seen;
  const BasisPtr basis =
      P.generators.empty() ? PeriodBasis::rational_only() : P.generators.front().u.basis();
  out.elements.push_back({{}, AffineElement::identity(P.dim, basis)});
  seen.insert(out.elements.back().element.key());
  std::size_t layer_begin = 0, layer_end = 1;
  for (std::size_t len = 1; len <= L + 1; ++len) {
    std::vector<EnumeratedElement> fresh;
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      const EnumeratedElement& base = out.elements[i];
      for (std::size_t k = 0; k < letters.size(); ++k) {
        if (!base.word.empty() && base.word.back().generator == letters[k].generator &&
            base.word.back().inverse != letters[k].inverse)
          continue;  // free reduction
        AffineElement e = compose(base.element, letter_elems[k]);
        if (!seen.insert(e.key()).second) continue;
        Word w = base.word;
        w.push_back(letters[k]);
        fresh.push_back({std::move(w), std::move(e)});
      }
    }
    if (len == L + 1) {
      out.closed = fresh.empty();
      break;
    }
    if (fresh.empty()) {
      out.closed = true;
      break;
    }
    layer_begin = out.elements.size();
    for (auto& f : fresh) out.elements.push_back(std::move(f));
    layer_end = out.elements.size();
  }
  return out;
}

namespace {

void box_points(std::size_t k, long r, const std::function<void(const std::vector<long>&)>& f) {
  std::vector<long> n(k, -r);
  if (k == 0) {
    f(n);
    return;
  }
  for (;;) {
    f(n);
    std::size_t i = 0;
    while (i < k && n[i] == r) n[i++] = -r;
    if (i == k) return;
    ++n[i];
  }
}

}  // namespace

ClosedFormCheck check_closed_form(const GroupPresentation& P, long radius) {
  require(P.closed_form.has_value(), ErrorKind::InvalidInput, "presentation has no closed form");
  const ClosedForm& cf = *P.closed_form;
  require(cf.exponents.size() == P.generators.size(), ErrorKind::InvalidInput,
          "closed form needs one exponent per generator");
  ClosedFormCheck res;
  auto note = [&](const std::string& s) {
    res.agrees = false;
    if (res.mismatches.size() < 20) res.mismatches.push_back(s);
  };
  auto label = [](const std::vector<long>& n) {
    std::string s = "(";
    for (std::size_t i = 0; i < n.size(); ++i) s += (i ? "," : "") + std::to_string(n[i]);
    return s + ")";
  };

  box_points(cf.exponents.size(), radius, [&](const std::vector<long>& n) {
    AffineElement direct = AffineElement::identity(P.dim, P.generators.front().u.basis());
    for (std::size_t i = 0; i < n.size(); ++i) direct = compose(direct, power(P.generators[i], n[i]));
    ++res.checked;
    if (cf.evaluate(n) != direct) note("closed form differs from the product at exponents " + label(n));
  });

  // every short word must land in the image (searched on a wider box)
  std::unordered_set<std::string> image;
  box_points(cf.exponents.size(), radius * radius, [&](const std::vector<long>& n) {
    image.insert(cf.evaluate(n).key());
  });
  const Enumeration en = enumerate_words(P, std::min<std::size_t>(P.word_bound, radius));
  for (const auto& e : en.elements) {
    ++res.checked;
    if (!image.count(e.element.key()))
      note("word " + P.word_text(e.word) + " not reached by the closed form");
  }
  return res;
}

namespace {

bool same_group(const ClosedSubgroup& a, const ClosedSubgroup& b) {
  const auto& da = a.decomposition();
  const auto& db = b.decomposition();
  if (da.discrete_basis.size() != db.discrete_basis.size() ||
      da.cospan_basis.size() != db.cospan_basis.size())
    return false;
  for (std::size_t i = 0; i < da.discrete_basis.size(); ++i)
    if (da.discrete_basis[i] != db.discrete_basis[i]) return false;
  return true;
}

}  // namespace

GroupAnalysis analyze(const GroupPresentation& P) {
  GroupAnalysis out;
  const Enumeration en = enumerate_words(P);
  out.element_count = en.elements.size();
  out.exhaustive = P.closed_form.has_value() || en.closed;

  const IntMatrix I = IntMatrix::identity(P.dim);
  std::unordered_set<std::string> lin_seen;
  for (const auto& g : P.generators)
    if (g.A != I && lin_seen.insert(to_string(g.A)).second) out.linear_part_generators.push_back(g.A);

  lin_seen.clear();
  std::vector<ExactVector> translations;
  auto absorb = [&](const AffineElement& e) {
    if (lin_seen.insert(to_string(e.A)).second) out.linear_parts.push_back(e.A);
    if (e.A == I && !e.u.is_zero()) translations.push_back(e.u);
  };
  for (const auto& e : en.elements) absorb(e.element);
  if (P.closed_form) {
    out.closed_form_check = check_closed_form(P, 4);
    box_points(P.closed_form->exponents.size(), static_cast<long>(P.word_bound),
               [&](const std::vector<long>& n) { absorb(P.closed_form->evaluate(n)); });
  }

  out.translational_part = ClosedSubgroup(P.dim, translations);
  const auto& d = out.translational_part.decomposition();
  out.translational_basis = d.discrete_basis;
  out.translational_rank = d.discrete_basis.size();

  std::vector<ExactVector> gen_translations;
  for (const auto& g : P.generators)
    if (g.A == I && !g.u.is_zero()) gen_translations.push_back(g.u);
  out.generator_translational_part = ClosedSubgroup(P.dim, gen_translations);
  out.generator_translational_rank = discrete_rank(out.generator_translational_part);
  out.discrepancy = !same_group(out.translational_part, out.generator_translational_part);
  return out;
}

std::vector<IsotropyEntry> isotropy(const GroupPresentation& P, const ExactVector& x,
                                    std::optional<std::size_t> bound) {
  require(x.dim() == P.dim, ErrorKind::DimMismatch, "isotropy point dimension");
  std::vector<IsotropyEntry> out;
  for (const auto& e : enumerate_words(P, bound).elements)
    if (act(e.element, x) == x) out.push_back({P.word_text(e.word), e.element});
  return out;
}

std::string to_string(CompactnessType t) {
  switch (t) {
    case CompactnessType::Proper: return "proper";
    case CompactnessType::SProper: return "s-proper";
    case CompactnessType::StrongProper: return "strong-proper";
    case CompactnessType::StrongSProper: return "strong-s-proper";
  }
  return "?";
}

std::vector<CompactnessType> classify_linear_model(bool gamma_finite, bool S_compact,
                                                   bool pi1_S_finite) {
  std::vector<CompactnessType> out;
  if (gamma_finite) out.push_back(CompactnessType::Proper);
  if (gamma_finite && S_compact) out.push_back(CompactnessType::SProper);
  if (pi1_S_finite) out.push_back(CompactnessType::StrongProper);
  if (pi1_S_finite && S_compact) out.push_back(CompactnessType::StrongSProper);
  return out;
}

}  // namespace affinekit
