#pragma once

// Integral affine transformations x -> A x + u of R^q, A in GL(q, Z), and
// finitely generated groups of them explored by bounded word enumeration.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "affinekit/exact.hpp"
#include "affinekit/expr.hpp"
#include "affinekit/lattice.hpp"

namespace affinekit {

struct AffineElement {
  ExactVector u;
  IntMatrix A;

  AffineElement() = default;
  /// Checks that A is square of size dim(u) with det = +-1.
  AffineElement(ExactVector u, IntMatrix A);
  static AffineElement identity(std::size_t dim, BasisPtr basis = PeriodBasis::rational_only());
  static AffineElement translation(ExactVector u);

  std::size_t dim() const { return u.dim(); }
  bool is_translation() const;
  bool is_identity() const;
  /// Canonical text; equal elements have equal keys.
  std::string key() const;

  friend bool operator==(const AffineElement& a, const AffineElement& b) {
    return a.A == b.A && a.u == b.u;
  }
  friend bool operator!=(const AffineElement& a, const AffineElement& b) { return !(a == b); }
};

/// g o h = (u_g + A_g u_h, A_g A_h)
AffineElement compose(const AffineElement& g, const AffineElement& h);
AffineElement invert(const AffineElement& g);
ExactVector act(const AffineElement& g, const ExactVector& x);
AffineElement power(const AffineElement& g, long n);

/// Inverse of an integer matrix with determinant +-1.
IntMatrix unimodular_inverse(const IntMatrix& A);

struct Letter {
  std::size_t generator = 0;
  bool inverse = false;
  friend bool operator==(const Letter&, const Letter&) = default;
};
using Word = std::vector<Letter>;

/// Rule (n_1..n_k) -> g_1^{n_1} ... g_k^{n_k} written as expressions in the exponents.
struct ClosedForm {
  std::vector<std::string> exponents;
  std::vector<Expression> u;               // q entries
  std::vector<std::vector<Expression>> A;  // q x q entries
  AffineElement evaluate(const std::vector<long>& n) const;
};

struct GroupPresentation {
  std::size_t dim = 0;
  std::vector<std::string> names;
  std::vector<AffineElement> generators;
  std::optional<ClosedForm> closed_form;
  std::size_t word_bound = 8;

  void add(std::string name, AffineElement g);
  std::optional<std::size_t> index_of(const std::string& name) const;
  /// Letters joined by '*', inverses as name^-1, identity as "id".
  std::string word_text(const Word& w) const;
  /// Accepts "id", "a*b^-1*c", "ab" when names are single tokens separated by '*' or spaces,
  /// and powers "a^3" / "a^-2".
  Word parse_word(const std::string& text) const;
  AffineElement evaluate(const Word& w) const;
};

struct EnumeratedElement {
  Word word;  // shortest word found (first in length-lex order)
  AffineElement element;
};

struct Enumeration {
  std::vector<EnumeratedElement> elements;  // in order of discovery
  /// No new element appeared among words of length bound + 1.
  bool closed = false;
};

/// Distinct elements represented by reduced words of length <= bound.
Enumeration enumerate_words(const GroupPresentation& P, std::optional<std::size_t> bound = {});

struct ClosedFormCheck {
  bool agrees = true;
  std::size_t checked = 0;
  std::vector<std::string> mismatches;
};
/// Compares the closed form against direct products on |n_i| <= radius and checks
/// that every enumerated element occurs in its image on that box.
ClosedFormCheck check_closed_form(const GroupPresentation& P, long radius);

struct GroupAnalysis {
  std::vector<IntMatrix> linear_part_generators;  // distinct non-identity generator linear parts
  std::vector<IntMatrix> linear_parts;            // distinct linear parts found
  ClosedSubgroup translational_part{0, {}};       // from all words with A = Id
  std::vector<ExactVector> translational_basis;
  std::size_t translational_rank = 0;
  ClosedSubgroup generator_translational_part{0, {}};  // pure-translation generators only
  std::size_t generator_translational_rank = 0;
  bool discrepancy = false;  // generator-level and word-level parts differ
  bool exhaustive = false;
  std::size_t element_count = 0;
  std::optional<ClosedFormCheck> closed_form_check;
};

GroupAnalysis analyze(const GroupPresentation& P);

struct IsotropyEntry {
  std::string word;
  AffineElement element;
};
std::vector<IsotropyEntry> isotropy(const GroupPresentation& P, const ExactVector& x,
                                    std::optional<std::size_t> bound = {});

enum class CompactnessType { Proper, SProper, StrongProper, StrongSProper };
std::string to_string(CompactnessType t);
/// Compactness types of the linear local model; compact type never occurs.
std::vector<CompactnessType> classify_linear_model(bool gamma_finite, bool S_compact,
                                                   bool pi1_S_finite);

}  // namespace affinekit
