#include "affinekit/exact.hpp"

#include <sstream>
#include <unordered_set>

namespace affinekit {

BasisPtr PeriodBasis::rational_only() {
  static const BasisPtr unit = [] {
    auto b = std::make_shared<PeriodBasis>();
    b->symbols_.push_back(PeriodSymbol{"1", "1", true, Rational(1)});
    return BasisPtr(b);
  }();
  return unit;
}

BasisPtr PeriodBasis::make(std::vector<PeriodSymbol> symbols) {
  if (symbols.empty()) return rational_only();
  auto b = std::make_shared<PeriodBasis>();
  b->symbols_.push_back(PeriodSymbol{"1", "1", true, Rational(1)});
  std::unordered_set<std::string> seen{"1"};
  for (auto& s : symbols) {
    require(!s.name.empty(), ErrorKind::InvalidInput, "period symbol without a name");
    require(seen.insert(s.name).second, ErrorKind::InvalidInput,
            "duplicate period symbol '" + s.name + "'");
    if (s.rational) s.value = parse_rational(s.approx);
    b->symbols_.push_back(std::move(s));
  }
  return b;
}

std::optional<std::size_t> PeriodBasis::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return i;
  return std::nullopt;
}

bool PeriodBasis::same_as(const PeriodBasis& other) const {
  if (this == &other) return true;
  if (symbols_.size() != other.symbols_.size()) return false;
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name != other.symbols_[i].name ||
        symbols_[i].rational != other.symbols_[i].rational)
      return false;
  return true;
}

bool PeriodBasis::has_irrational() const {
  for (const auto& s : symbols_)
    if (!s.rational) return true;
  return false;
}

long double PeriodBasis::approx_value(std::size_t i) const {
  const auto& s = symbols_[i];
  if (s.rational) return static_cast<long double>(s.value.get_d());
  return std::stold(s.approx);
}

BasisPtr merge_bases(const BasisPtr& a, const BasisPtr& b) {
  if (a == b || a->same_as(*b)) return a;
  if (a->size() == 1) return b;
  if (b->size() == 1) return a;
  throw Error(ErrorKind::DimMismatch, "values use different period bases");
}

// ---------------------------------------------------------------------------

ExactScalar::ExactScalar() : basis_(PeriodBasis::rational_only()), coeffs_(1) {}

ExactScalar::ExactScalar(const Rational& q) : basis_(PeriodBasis::rational_only()), coeffs_{q} {
  coeffs_[0].canonicalize();
}

ExactScalar::ExactScalar(BasisPtr basis, RatVector coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  require(coeffs_.size() == basis_->size(), ErrorKind::DimMismatch,
          "coefficient count does not match period basis");
  normalize();
}

ExactScalar ExactScalar::zero(BasisPtr basis) {
  const std::size_t n = basis->size();
  return ExactScalar(std::move(basis), RatVector(n));
}

ExactScalar ExactScalar::symbol(BasisPtr basis, const std::string& name, const Rational& coeff) {
  const auto idx = basis->index_of(name);
  require(idx.has_value(), ErrorKind::InvalidInput, "unknown period symbol '" + name + "'");
  RatVector c(basis->size());
  c[*idx] = coeff;
  return ExactScalar(std::move(basis), std::move(c));
}

void ExactScalar::normalize() {
  for (auto& c : coeffs_) c.canonicalize();
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    const auto& s = basis_->symbol(i);
    if (s.rational && coeffs_[i] != 0) {
      coeffs_[0] += coeffs_[i] * s.value;
      coeffs_[i] = 0;
    }
  }
}

ExactScalar ExactScalar::rebased(const BasisPtr& basis) const {
  if (basis == basis_ || basis->same_as(*basis_)) return ExactScalar(basis, coeffs_);
  require(basis_->size() == 1, ErrorKind::DimMismatch, "cannot rebase between symbol sets");
  RatVector c(basis->size());
  c[0] = coeffs_[0];
  return ExactScalar(basis, std::move(c));
}

bool ExactScalar::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool ExactScalar::is_rational() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

Rational ExactScalar::rational_value() const {
  require(is_rational(), ErrorKind::NonRationalLattice, "value " + to_string() + " is not rational");
  return coeffs_[0];
}

long double ExactScalar::to_long_double() const {
  long double v = 0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0)
      v += static_cast<long double>(coeffs_[i].get_d()) * basis_->approx_value(i);
  return v;
}

std::string ExactScalar::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Rational& c = coeffs_[i];
    if (c == 0) continue;
    const std::string& name = basis_->symbol(i).name;
    if (i == 0) {
      os << c.get_str();
    } else {
      const Rational mag = abs(c);
      if (!first) os << (c < 0 ? " - " : " + ");
      else if (c < 0) os << '-';
      if (mag != 1) os << mag.get_str() << '*';
      os << name;
    }
    first = false;
  }
  if (first) return "0";
  return os.str();
}

ExactScalar ExactScalar::operator-() const {
  ExactScalar r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
  const BasisPtr b = merge_bases(basis_, o.basis_);
  if (b != basis_) *this = rebased(b);
  const ExactScalar other = o.basis_ == b ? o : o.rebased(b);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) { return *this += -o; }

ExactScalar& ExactScalar::operator*=(const Rational& q) {
  for (auto& c : coeffs_) c *= q;
  return *this;
}

bool operator==(const ExactScalar& a, const ExactScalar& b) {
  if (a.basis_ == b.basis_ || a.basis_->same_as(*b.basis_)) return a.coeffs_ == b.coeffs_;
  if (a.basis_->size() == 1 || b.basis_->size() == 1) return (a - b).is_zero();
  return false;
}

// ---------------------------------------------------------------------------

ExactVector::ExactVector(std::size_t dim)
    : basis_(PeriodBasis::rational_only()), entries_(dim, ExactScalar()) {}

ExactVector::ExactVector(BasisPtr basis, std::vector<ExactScalar> entries)
    : basis_(std::move(basis)), entries_(std::move(entries)) {
  for (auto& e : entries_)
    if (e.basis() != basis_) e = e.rebased(basis_);
}

ExactVector::ExactVector(const RatVector& v) : basis_(PeriodBasis::rational_only()) {
  entries_.reserve(v.size());
  for (const auto& q : v) entries_.emplace_back(q);
}

ExactVector::ExactVector(std::initializer_list<long> v) : basis_(PeriodBasis::rational_only()) {
  for (long x : v) entries_.emplace_back(Rational(x));
}

ExactVector ExactVector::zero(BasisPtr basis, std::size_t dim) {
  std::vector<ExactScalar> e(dim, ExactScalar::zero(basis));
  return ExactVector(std::move(basis), std::move(e));
}

ExactVector ExactVector::rebased(const BasisPtr& basis) const {
  std::vector<ExactScalar> e;
  e.reserve(entries_.size());
  for (const auto& x : entries_) e.push_back(x.rebased(basis));
  return ExactVector(basis, std::move(e));
}

bool ExactVector::is_zero() const {
  for (const auto& e : entries_)
    if (!e.is_zero()) return false;
  return true;
}

bool ExactVector::is_rational() const {
  for (const auto& e : entries_)
    if (!e.is_rational()) return false;
  return true;
}

RatVector ExactVector::rational_values() const {
  RatVector out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.rational_value());
  return out;
}

std::vector<double> ExactVector::to_doubles() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.to_double());
  return out;
}

std::string ExactVector::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < entries_.size(); ++i) s += (i ? ", " : "") + entries_[i].to_string();
  return s + ")";
}

RatVector ExactVector::embedding() const {
  const std::size_t s = basis_->size();
  RatVector flat(entries_.size() * s);
  for (std::size_t i = 0; i < entries_.size(); ++i)
    for (std::size_t j = 0; j < s; ++j) flat[i * s + j] = entries_[i].coeff(j);
  return flat;
}

ExactVector ExactVector::from_embedding(BasisPtr basis, std::size_t dim, const RatVector& flat) {
  const std::size_t s = basis->size();
  require(flat.size() == dim * s, ErrorKind::DimMismatch, "embedding length");
  std::vector<ExactScalar> e;
  e.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i)
    e.emplace_back(basis, RatVector(flat.begin() + i * s, flat.begin() + (i + 1) * s));
  return ExactVector(std::move(basis), std::move(e));
}

ExactVector ExactVector::operator-() const {
  ExactVector r = *this;
  for (auto& e : r.entries_) e = -e;
  return r;
}

ExactVector& ExactVector::operator+=(const ExactVector& o) {
  require(dim() == o.dim(), ErrorKind::DimMismatch,
          "vector dimensions " + std::to_string(dim()) + " and " + std::to_string(o.dim()));
  const BasisPtr b = merge_bases(basis_, o.basis_);
  if (b != basis_) *this = rebased(b);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
  return *this;
}

ExactVector& ExactVector::operator-=(const ExactVector& o) { return *this += -o; }

ExactVector& ExactVector::operator*=(const Rational& q) {
  for (auto& e : entries_) e *= q;
  return *this;
}

bool operator==(const ExactVector& a, const ExactVector& b) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (a.entries_[i] != b.entries_[i]) return false;
  return true;
}

ExactVector apply(const IntMatrix& A, const ExactVector& x) {
  require(A.cols() == x.dim(), ErrorKind::DimMismatch, "matrix/vector dimension");
  std::vector<ExactScalar> out(A.rows(), ExactScalar::zero(x.basis()));
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      if (A(i, j) != 0) out[i] += x[j] * Rational(A(i, j));
  return ExactVector(x.basis(), std::move(out));
}

ExactVector combine(const RatVector& weights, const std::vector<ExactVector>& vectors) {
  require(weights.size() == vectors.size() && !vectors.empty(), ErrorKind::DimMismatch,
          "combination weights");
  ExactVector acc = ExactVector::zero(vectors.front().basis(), vectors.front().dim());
  for (std::size_t k = 0; k < vectors.size(); ++k)
    if (weights[k] != 0) acc += weights[k] * vectors[k];
  return acc;
}

}  // namespace affinekit
