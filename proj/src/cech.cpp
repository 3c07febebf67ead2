#include "affinekit/cech.hpp"

#include <algorithm>
#include <sstream>

#include "affinekit/normal_form.hpp"

namespace affinekit {

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

Simplex face(const Simplex& s, std::size_t i) {
  Simplex f;
  for (std::size_t k = 0; k < s.size(); ++k)
    if (k != i) f.push_back(s[k]);
  return f;
}

IntMatrix integer_inverse(const IntMatrix& M) {
  RatMatrix R(M.rows(), M.cols());
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) R(i, j) = M(i, j);
  const auto inv = inverse(R);
  require(inv.has_value(), ErrorKind::InvalidInput, "monodromy is not invertible");
  IntMatrix out(M.rows(), M.cols());
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) {
      require((*inv)(i, j).get_den() == 1, ErrorKind::InvalidInput, "monodromy must lie in GL_r(Z)");
      out(i, j) = (*inv)(i, j).get_num();
    }
  return out;
}

RatVector mul(const IntMatrix& M, const RatVector& v) {
  RatVector out(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) out[i] += M(i, j) * v[j];
  return out;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Rational frac(const Rational& q) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return q - Rational(f);
}

RatVector flatten(const Cochain& c) {
  RatVector out;
  for (const auto& v : c.values) out.insert(out.end(), v.begin(), v.end());
  return out;
}

// Lattice data of d_1 : C^1 -> C^2 shared by the degree-2 class computations.
struct DegreeTwo {
  SmithForm snf;
  std::size_t rank = 0;
  IntMatrix functionals;  // HNF basis of the integer functionals vanishing on im d_1
};

DegreeTwo degree_two(const LocalSystem& sys) {
  DegreeTwo d;
  const IntMatrix D = coboundary_matrix(sys, 1);
  d.snf = smith_normal_form(D);
  d.rank = d.snf.rank();
  const std::size_t m = D.rows();
  IntMatrix tail(m - d.rank, m);
  for (std::size_t i = d.rank; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) tail(i - d.rank, j) = d.snf.U(i, j);
  d.functionals = m > d.rank ? hermite_normal_form(tail) : IntMatrix(0, m);
  return d;
}

void require_degree(const Cochain& c, const LocalSystem& sys, std::size_t p) {
  require(c.degree == p, ErrorKind::InvalidInput, "cochain has degree " + std::to_string(c.degree) +
                                                      ", expected " + std::to_string(p));
  require(c.values.size() == sys.nerve().count(p), ErrorKind::MissingSimplex,
          "cochain is not defined on every " + std::to_string(p) + "-simplex");
  for (const auto& v : c.values)
    require(v.size() == sys.rank(), ErrorKind::DimMismatch, "cochain value of wrong rank");
}

}  // namespace

// ---------------------------------------------------------------------------

int sort_sign(Simplex& t) {
  int sign = 1;
  for (std::size_t i = 1; i < t.size(); ++i)
    for (std::size_t j = i; j > 0 && t[j - 1] > t[j]; --j) {
      std::swap(t[j - 1], t[j]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] == t[i - 1]) return 0;
  return sign;
}

Nerve::Nerve(std::vector<std::string> vertex_names) : names_(std::move(vertex_names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    require(std::count(names_.begin(), names_.end(), names_[i]) == 1, ErrorKind::InvalidInput,
            "duplicate vertex name " + names_[i]);
    add_simplex(std::vector<std::size_t>{i});
  }
}

void Nerve::add_simplex(const std::vector<std::size_t>& vertices) {
  Simplex s = vertices;
  require(!s.empty() && s.size() <= kMaxDim + 1, ErrorKind::InvalidInput, "simplex dimension must be 0..3");
  require(sort_sign(s) != 0, ErrorKind::InvalidInput, "repeated vertex in simplex");
  require(s.back() < names_.size(), ErrorKind::InvalidInput, "unknown vertex in simplex");
  if (lookup_.count(s)) return;
  if (s.size() > 1)
    for (std::size_t i = 0; i < s.size(); ++i) add_simplex(face(s, i));
  auto& list = simplices_[s.size() - 1];
  lookup_.emplace(s, list.size());
  list.push_back(s);
}

void Nerve::add_simplex(const std::vector<std::string>& names) {
  std::vector<std::size_t> v;
  for (const auto& n : names) v.push_back(vertex_index(n));
  add_simplex(v);
}

std::size_t Nerve::vertex_index(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  require(it != names_.end(), ErrorKind::InvalidInput, "unknown vertex " + name);
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t Nerve::dim() const {
  std::size_t d = 0;
  for (std::size_t p = 0; p <= kMaxDim; ++p)
    if (!simplices_[p].empty()) d = p;
  return d;
}

const std::vector<Simplex>& Nerve::simplices(std::size_t p) const {
  require(p <= kMaxDim, ErrorKind::InvalidInput, "simplex dimension above 3");
  return simplices_[p];
}

std::optional<std::size_t> Nerve::find(const Simplex& sorted) const {
  const auto it = lookup_.find(sorted);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t Nerve::index(const Simplex& sorted) const {
  const auto i = find(sorted);
  require(i.has_value(), ErrorKind::MissingSimplex, "missing simplex " + simplex_text(sorted));
  return *i;
}

std::string Nerve::simplex_text(const Simplex& s) const {
  std::vector<std::string> parts;
  for (auto v : s) parts.push_back(v < names_.size() ? names_[v] : "?");
  return "(" + join(parts, ",") + ")";
}

namespace {
std::vector<std::string> numbered(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back("v" + std::to_string(i));
  return v;
}
}  // namespace

Nerve circle_nerve(std::size_t n) {
  require(n >= 3, ErrorKind::InvalidInput, "a circle nerve needs at least 3 opens");
  Nerve N(numbered(n));
  for (std::size_t i = 0; i < n; ++i) N.add_simplex(std::vector<std::size_t>{i, (i + 1) % n});
  return N;
}

Nerve boundary_tetrahedron() {
  Nerve N(numbered(4));
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<std::size_t> t;
    for (std::size_t k = 0; k < 4; ++k)
      if (k != i) t.push_back(k);
    N.add_simplex(t);
  }
  return N;
}

Nerve tetrahedron_nerve() {
  Nerve N(numbered(4));
  N.add_simplex(std::vector<std::size_t>{0, 1, 2, 3});
  return N;
}

Nerve torus_nerve() {
  Nerve N(numbered(7));
  for (std::size_t i = 0; i < 7; ++i) {
    N.add_simplex(std::vector<std::size_t>{i, (i + 1) % 7, (i + 3) % 7});
    N.add_simplex(std::vector<std::size_t>{i, (i + 2) % 7, (i + 3) % 7});
  }
  return N;
}

Nerve rp2_nerve() {
  Nerve N(numbered(6));
  const std::size_t faces[10][3] = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1},
                                    {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}};
  for (const auto& f : faces) N.add_simplex(std::vector<std::size_t>{f[0], f[1], f[2]});
  return N;
}

std::string to_string(Coefficients c) {
  switch (c) {
    case Coefficients::Integers: return "Z";
    case Coefficients::Reals: return "R";
    case Coefficients::Torus: return "T";
  }
  return "?";
}

Coefficients coefficients_from_string(const std::string& s) {
  if (s == "Z" || s == "integers") return Coefficients::Integers;
  if (s == "R" || s == "reals") return Coefficients::Reals;
  if (s == "T" || s == "torus") return Coefficients::Torus;
  throw Error(ErrorKind::UnsupportedCoefficients, "unknown coefficient ring " + s);
}

// ---------------------------------------------------------------------------

LocalSystem::LocalSystem(const Nerve& nerve, std::size_t rank, Coefficients ring)
    : nerve_(nerve), rank_(rank), ring_(ring), edge_(nerve.count(1), IntMatrix::identity(rank)) {
  require(rank > 0, ErrorKind::InvalidInput, "local system rank must be positive");
}

void LocalSystem::set_monodromy(std::size_t u, std::size_t w, const IntMatrix& M) {
  require(M.rows() == rank_ && M.cols() == rank_, ErrorKind::DimMismatch, "monodromy matrix size");
  Simplex e{std::min(u, w), std::max(u, w)};
  const std::size_t i = nerve_.index(e);
  edge_[i] = u < w ? M : integer_inverse(M);
  if (u < w) integer_inverse(M);  // unimodularity check
}

IntMatrix LocalSystem::transport(std::size_t u, std::size_t w) const {
  if (u == w) return IntMatrix::identity(rank_);
  const std::size_t i = nerve_.index({std::min(u, w), std::max(u, w)});
  return u < w ? edge_[i] : integer_inverse(edge_[i]);
}

void LocalSystem::validate() const {
  for (const auto& t : nerve_.simplices(2)) {
    const IntMatrix lhs = transport(t[1], t[2]) * transport(t[0], t[1]);
    const IntMatrix rhs = transport(t[0], t[2]);
    for (std::size_t i = 0; i < rank_; ++i)
      for (std::size_t j = 0; j < rank_; ++j)
        require(lhs(i, j) == rhs(i, j), ErrorKind::InvalidInput,
                "monodromy is not flat around " + nerve_.simplex_text(t));
  }
}

bool LocalSystem::is_trivial() const {
  const IntMatrix I = IntMatrix::identity(rank_);
  for (const auto& M : edge_)
    for (std::size_t i = 0; i < rank_; ++i)
      for (std::size_t j = 0; j < rank_; ++j)
        if (M(i, j) != I(i, j)) return false;
  return true;
}

// ---------------------------------------------------------------------------

Cochain Cochain::zero(const LocalSystem& sys, std::size_t degree) {
  Cochain c;
  c.degree = degree;
  c.ring = sys.ring();
  c.values.assign(sys.nerve().count(degree), RatVector(sys.rank()));
  return c;
}

void Cochain::normalize() {
  for (auto& v : values)
    for (auto& x : v) {
      x.canonicalize();
      if (ring == Coefficients::Torus) x = frac(x);
      else if (ring == Coefficients::Integers)
        require(is_integer(x), ErrorKind::UnsupportedCoefficients, "non-integer value in a Z-cochain");
    }
}

RatVector Cochain::value(const LocalSystem& sys, Simplex tuple) const {
  require(tuple.size() == degree + 1, ErrorKind::InvalidInput, "simplex of wrong dimension");
  const std::size_t last = tuple.back();
  const int sign = sort_sign(tuple);
  if (sign == 0) return RatVector(sys.rank());
  RatVector v = mul(sys.transport(tuple.back(), last), values.at(sys.nerve().index(tuple)));
  if (sign < 0)
    for (auto& x : v) x = -x;
  return v;
}

bool Cochain::equal_mod_z(const Cochain& other) const {
  if (degree != other.degree || values.size() != other.values.size()) return false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != other.values[i].size()) return false;
    for (std::size_t j = 0; j < values[i].size(); ++j)
      if (!is_integer(Rational(values[i][j] - other.values[i][j]))) return false;
  }
  return true;
}

Cochain Cochain::operator+(const Cochain& other) const {
  require(degree == other.degree && values.size() == other.values.size(), ErrorKind::DimMismatch,
          "adding cochains of different shapes");
  Cochain s = *this;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = 0; j < values[i].size(); ++j) s.values[i][j] += other.values[i][j];
  s.normalize();
  return s;
}

Cochain Cochain::scaled(const Rational& k) const {
  Cochain s = *this;
  for (auto& v : s.values)
    for (auto& x : v) x *= k;
  s.normalize();
  return s;
}

Cochain coboundary(const Cochain& c, const LocalSystem& sys) {
  require_degree(c, sys, c.degree);
  Cochain d;
  d.degree = c.degree + 1;
  d.ring = c.ring;
  if (d.degree > Nerve::kMaxDim) return d;
  const Nerve& N = sys.nerve();
  const std::size_t p = c.degree;
  for (const auto& s : N.simplices(p + 1)) {
    RatVector v(sys.rank());
    for (std::size_t i = 0; i <= p; ++i) {
      const auto& f = c.values[N.index(face(s, i))];
      for (std::size_t j = 0; j < v.size(); ++j) v[j] += (i % 2 ? -1 : 1) * f[j];
    }
    const RatVector last = mul(sys.transport(s[p], s[p + 1]), c.values[N.index(face(s, p + 1))]);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += ((p + 1) % 2 ? -1 : 1) * last[j];
    d.values.push_back(std::move(v));
  }
  d.normalize();
  return d;
}

IntMatrix coboundary_matrix(const LocalSystem& sys, std::size_t p) {
  const Nerve& N = sys.nerve();
  const std::size_t r = sys.rank();
  IntMatrix D(N.count(p + 1) * r, N.count(p) * r);
  if (p + 1 > Nerve::kMaxDim) return D;
  const auto& upper = N.simplices(p + 1);
  for (std::size_t row = 0; row < upper.size(); ++row) {
    const Simplex& s = upper[row];
    for (std::size_t i = 0; i <= p; ++i) {
      const std::size_t col = N.index(face(s, i));
      for (std::size_t j = 0; j < r; ++j) D(row * r + j, col * r + j) += i % 2 ? -1 : 1;
    }
    const IntMatrix M = sys.transport(s[p], s[p + 1]);
    const std::size_t col = N.index(face(s, p + 1));
    const int sign = (p + 1) % 2 ? -1 : 1;
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < r; ++k) D(row * r + j, col * r + k) += sign * M(j, k);
  }
  return D;
}

std::string CohomologyGroup::text() const {
  std::vector<std::string> parts;
  if (free_rank == 1) parts.push_back("Z");
  else if (free_rank > 1) parts.push_back("Z^" + std::to_string(free_rank));
  for (const auto& t : torsion) parts.push_back("Z/" + to_string(t));
  return parts.empty() ? "0" : join(parts, " + ");
}

CohomologyGroup cohomology(const LocalSystem& sys, std::size_t p) {
  require(p <= Nerve::kMaxDim, ErrorKind::InvalidInput, "cohomology degree above 3");
  CohomologyGroup H;
  H.degree = p;
  const std::size_t n = sys.nerve().count(p) * sys.rank();
  if (n == 0) return H;
  std::size_t rank_out = 0;
  if (p < Nerve::kMaxDim && sys.nerve().count(p + 1) > 0) rank_out = smith_normal_form(coboundary_matrix(sys, p)).rank();
  std::size_t rank_in = 0;
  if (p > 0) {
    const SmithForm S = smith_normal_form(coboundary_matrix(sys, p - 1));
    rank_in = S.rank();
    for (const auto& f : S.invariant_factors())
      if (f > 1) H.torsion.push_back(f);
  }
  H.free_rank = n - rank_out - rank_in;
  return H;
}

bool dd_cocycle_check(const Cochain& c, const LocalSystem& sys) {
  require_degree(c, sys, 2);
  Cochain raw = c;
  raw.ring = Coefficients::Reals;  // keep integer parts so the check is mod Z
  const Cochain d = coboundary(raw, sys);
  for (const auto& v : d.values)
    for (const auto& x : v)
      if (!is_integer(x)) return false;
  return true;
}

RatVector dd_class(const Cochain& c, const LocalSystem& sys) {
  require(dd_cocycle_check(c, sys), ErrorKind::NotACocycle, "2-cochain is not a cocycle mod Z");
  const DegreeTwo d = degree_two(sys);
  const RatVector x = flatten(c);
  RatVector out = mul(d.functionals, x);
  for (auto& q : out) q = frac(q);
  return out;
}

std::optional<Cochain> dd_trivialize(const Cochain& c, const LocalSystem& sys) {
  require(dd_cocycle_check(c, sys), ErrorKind::NotACocycle, "2-cochain is not a cocycle mod Z");
  const DegreeTwo d = degree_two(sys);
  // d_1 = U^-1 S V^-1: c + z = d_1 lambda has a solution iff (U c)_i is integral past the rank
  const RatVector w = mul(d.snf.U, flatten(c));
  for (std::size_t i = d.rank; i < w.size(); ++i)
    if (!is_integer(w[i])) return std::nullopt;
  RatVector y(d.snf.V.rows());
  for (std::size_t i = 0; i < d.rank; ++i) y[i] = w[i] / Rational(d.snf.D(i, i));
  const RatVector lambda = mul(d.snf.V, y);
  Cochain out = Cochain::zero(sys, 1);
  out.ring = Coefficients::Torus;
  const std::size_t r = sys.rank();
  for (std::size_t i = 0; i < out.values.size(); ++i)
    for (std::size_t j = 0; j < r; ++j) out.values[i][j] = lambda[i * r + j];
  out.normalize();
  return out;
}

// ---------------------------------------------------------------------------

TransitionLifts TransitionLifts::constant(const Cochain& lift, const Nerve& nerve) {
  require(lift.degree == 1 && lift.values.size() == nerve.count(1), ErrorKind::MissingSimplex,
          "lift must be defined on every edge");
  TransitionLifts t;
  for (const auto& s : nerve.simplices(2))
    t.lifts.push_back({lift.values[nerve.index({s[0], s[1]})], lift.values[nerve.index({s[1], s[2]})],
                       lift.values[nerve.index({s[0], s[2]})]});
  return t;
}

TransitionLifts TransitionLifts::scaled(const Integer& k) const {
  TransitionLifts t = *this;
  for (auto& tri : t.lifts)
    for (auto& v : tri)
      for (auto& x : v) x *= k;
  return t;
}

bool ChernClass::is_zero() const {
  for (const auto& x : free)
    if (x != 0) return false;
  for (const auto& [order, residue] : torsion)
    if (residue != 0) return false;
  return true;
}

std::string ChernClass::text() const {
  std::vector<std::string> parts;
  for (const auto& x : free) parts.push_back(to_string(x));
  for (const auto& [order, residue] : torsion) parts.push_back(to_string(residue) + " mod " + to_string(order));
  return "(" + join(parts, ", ") + ")";
}

Cochain chern_cocycle(const TransitionLifts& lifts, const LocalSystem& sys) {
  const Nerve& N = sys.nerve();
  require(lifts.lifts.size() == N.count(2), ErrorKind::MissingSimplex, "lifts must cover every 2-simplex");
  Cochain c = Cochain::zero(sys, 2);
  c.ring = Coefficients::Integers;
  for (std::size_t t = 0; t < N.count(2); ++t) {
    const Simplex& s = N.simplices(2)[t];
    const auto& [g01, g12, g02] = lifts.lifts[t];
    require(g01.size() == sys.rank() && g12.size() == sys.rank() && g02.size() == sys.rank(),
            ErrorKind::DimMismatch, "lift of wrong rank");
    const RatVector moved = mul(sys.transport(s[1], s[2]), g01);
    for (std::size_t j = 0; j < sys.rank(); ++j) {
      Rational v = moved[j] + g12[j] - g02[j];
      v.canonicalize();
      require(is_integer(v), ErrorKind::LiftInconsistent,
              "lifts do not close up to an integer on " + N.simplex_text(s));
      c.values[t][j] = v;
    }
  }
  return c;
}

ChernClass integer_class(const Cochain& cocycle, const LocalSystem& sys) {
  require_degree(cocycle, sys, 2);
  Cochain z = cocycle;
  z.ring = Coefficients::Integers;
  z.normalize();
  for (const auto& v : coboundary(z, sys).values)
    for (const auto& x : v) require(x == 0, ErrorKind::NotACocycle, "integer 2-cochain is not a cocycle");
  const DegreeTwo d = degree_two(sys);
  const RatVector x = flatten(z);
  ChernClass cls;
  for (const auto& q : mul(d.functionals, x)) cls.free.push_back(q.get_num());
  const RatVector w = mul(d.snf.U, x);
  for (std::size_t i = 0; i < d.rank; ++i) {
    const Integer s = d.snf.D(i, i);
    if (s <= 1) continue;
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), w[i].get_num_mpz_t(), s.get_mpz_t());
    cls.torsion.emplace_back(s, r);
  }
  return cls;
}

ChernClass chern_class(const TransitionLifts& lifts, const LocalSystem& sys) {
  return integer_class(chern_cocycle(lifts, sys), sys);
}

}  // namespace affinekit
