#pragma once

// Čech cochains of locally constant Z^r / R^r / T^r = R^r/Z^r systems on a
// finite nerve. Simplices are stored with increasing vertex indices; a
// p-cochain value on (v0..vp) lives in the fiber over the last vertex vp, and
//
//   (dc)(v0..v_{p+1}) = sum_{i<=p} (-1)^i c(face_i) + (-1)^{p+1} M(vp->v_{p+1}) c(v0..vp).

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "affinekit/matrix.hpp"

namespace affinekit {

using Simplex = std::vector<std::size_t>;

class Nerve {
 public:
  static constexpr std::size_t kMaxDim = 3;

  Nerve() = default;
  explicit Nerve(std::vector<std::string> vertex_names);

  /// Adds a simplex (any vertex order) and, recursively, its faces.
  void add_simplex(const std::vector<std::size_t>& vertices);
  void add_simplex(const std::vector<std::string>& names);

  std::size_t vertex_count() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t vertex_index(const std::string& name) const;
  std::size_t dim() const;
  /// Simplices of dimension p in canonical (sorted, insertion) order.
  const std::vector<Simplex>& simplices(std::size_t p) const;
  std::size_t count(std::size_t p) const { return p <= kMaxDim ? simplices(p).size() : 0; }
  /// Index of the sorted simplex; throws MissingSimplex.
  std::size_t index(const Simplex& sorted) const;
  std::optional<std::size_t> find(const Simplex& sorted) const;
  std::string simplex_text(const Simplex& s) const;

 private:
  std::vector<std::string> names_;
  std::vector<Simplex> simplices_[kMaxDim + 1];
  std::map<Simplex, std::size_t> lookup_;
};

/// Parity (+1 / -1) of the permutation sorting `tuple`; 0 on repeated vertices.
int sort_sign(Simplex& tuple);

Nerve circle_nerve(std::size_t n = 3);
Nerve boundary_tetrahedron();
/// 7-vertex triangulation of the torus (triangles {i,i+1,i+3}, {i,i+2,i+3} mod 7).
Nerve torus_nerve();
/// 6-vertex triangulation of the real projective plane.
Nerve rp2_nerve();
/// The full 3-simplex (contractible, has a 3-cell).
Nerve tetrahedron_nerve();

enum class Coefficients { Integers, Reals, Torus };
std::string to_string(Coefficients c);
Coefficients coefficients_from_string(const std::string& s);

class LocalSystem {
 public:
  /// Trivial system of rank r.
  LocalSystem(const Nerve& nerve, std::size_t rank, Coefficients ring = Coefficients::Integers);

  /// Transport along the edge u -> w; the reverse edge gets the inverse.
  void set_monodromy(std::size_t u, std::size_t w, const IntMatrix& M);
  /// Checks flatness: M(v1->v2) M(v0->v1) = M(v0->v2) on every 2-simplex.
  void validate() const;

  std::size_t rank() const { return rank_; }
  Coefficients ring() const { return ring_; }
  void set_ring(Coefficients ring) { ring_ = ring; }
  const Nerve& nerve() const { return nerve_; }
  /// Transport from the fiber over u to the fiber over w along an existing edge.
  IntMatrix transport(std::size_t u, std::size_t w) const;
  bool is_trivial() const;

 private:
  Nerve nerve_;
  std::size_t rank_;
  Coefficients ring_;
  std::vector<IntMatrix> edge_;  // per 1-simplex (sorted), low -> high
};

struct Cochain {
  std::size_t degree = 0;
  Coefficients ring = Coefficients::Integers;
  std::vector<RatVector> values;  // per canonical p-simplex

  static Cochain zero(const LocalSystem& sys, std::size_t degree);
  /// Torus values reduced into [0,1); integer rings checked.
  void normalize();
  /// Value on an arbitrary vertex ordering, transported to its last vertex and signed.
  RatVector value(const LocalSystem& sys, Simplex tuple) const;
  bool equal_mod_z(const Cochain& other) const;
  Cochain operator+(const Cochain& other) const;
  Cochain scaled(const Rational& k) const;
};

Cochain coboundary(const Cochain& c, const LocalSystem& sys);

/// Integer matrix of d_p : C^p -> C^{p+1} (rows (simplex, component), columns likewise).
IntMatrix coboundary_matrix(const LocalSystem& sys, std::size_t p);

struct CohomologyGroup {
  std::size_t degree = 0;
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // invariant factors > 1
  std::string text() const;      // e.g. "Z^2 + Z/2"
};
CohomologyGroup cohomology(const LocalSystem& sys, std::size_t p);

/// dc == 0 mod Z^r on every 3-simplex.
bool dd_cocycle_check(const Cochain& c, const LocalSystem& sys);

/// Coordinates of the class of a torus 2-cocycle in H^2(nerve; T^r): each entry
/// in [0,1); all zero iff the cocycle is trivial. Canonical for the nerve and system.
RatVector dd_class(const Cochain& c, const LocalSystem& sys);

/// lambda with d(lambda) == c mod Z^r, or nullopt when the class is nonzero.
std::optional<Cochain> dd_trivialize(const Cochain& c, const LocalSystem& sys);

/// Real lifts of torus transition functions restricted to each 2-simplex:
/// lifts[t] = {g(v0v1), g(v1v2), g(v0v2)} on triangle t = (v0,v1,v2).
/// A lift is a function on the double overlap, so its values on different
/// triangles may differ; only their combination on each triangle must be integral.
struct TransitionLifts {
  std::vector<std::array<RatVector, 3>> lifts;
  static TransitionLifts constant(const Cochain& lift, const Nerve& nerve);
  TransitionLifts scaled(const Integer& k) const;
};

struct ChernClass {
  IntVector free;  // coordinates against a canonical basis of Hom(H^2, Z)
  std::vector<std::pair<Integer, Integer>> torsion;  // (order, residue)
  bool is_zero() const;
  std::string text() const;
};

/// The integer 2-cocycle g(v1v2) - g(v0v2) + M g(v0v1) on each triangle.
Cochain chern_cocycle(const TransitionLifts& lifts, const LocalSystem& sys);
ChernClass chern_class(const TransitionLifts& lifts, const LocalSystem& sys);
/// Class of an integer 2-cocycle.
ChernClass integer_class(const Cochain& cocycle, const LocalSystem& sys);

}  // namespace affinekit
