#pragma once

// Exact real numbers of the form  c_0 * 1 + c_1 * s_1 + ... + c_k * s_k  where the
// s_i are named real constants whose Q-linear independence (together with 1) is
// asserted by the caller rather than verified.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "affinekit/matrix.hpp"

namespace affinekit {

struct PeriodSymbol {
  std::string name;
  std::string approx;  // decimal approximation, >= 30 significant digits for irrationals
  bool rational = false;
  Rational value;      // exact value; meaningful only when rational
};

class PeriodBasis;
using BasisPtr = std::shared_ptr<const PeriodBasis>;

class PeriodBasis {
 public:
  /// The basis {1}; shared singleton.
  static BasisPtr rational_only();
  /// Unit symbol "1" followed by `symbols`. Names must be unique and must not be "1".
  static BasisPtr make(std::vector<PeriodSymbol> symbols);

  std::size_t size() const { return symbols_.size(); }
  const PeriodSymbol& symbol(std::size_t i) const { return symbols_[i]; }
  const std::vector<PeriodSymbol>& symbols() const { return symbols_; }
  std::optional<std::size_t> index_of(const std::string& name) const;
  bool same_as(const PeriodBasis& other) const;
  bool has_irrational() const;
  long double approx_value(std::size_t i) const;

 private:
  std::vector<PeriodSymbol> symbols_;
};

/// Returns whichever basis is richer when one of them is rational-only; throws
/// DimMismatch when both carry symbols and differ.
BasisPtr merge_bases(const BasisPtr& a, const BasisPtr& b);

class ExactScalar {
 public:
  ExactScalar();  // zero over the rational basis
  ExactScalar(const Rational& q);  // NOLINT(google-explicit-constructor)
  ExactScalar(long v) : ExactScalar(Rational(v)) {}  // NOLINT(google-explicit-constructor)
  ExactScalar(BasisPtr basis, RatVector coeffs);

  static ExactScalar zero(BasisPtr basis);
  /// coeff * symbol; rational symbols fold into the unit coefficient.
  static ExactScalar symbol(BasisPtr basis, const std::string& name, const Rational& coeff = 1);

  const BasisPtr& basis() const { return basis_; }
  const RatVector& coeffs() const { return coeffs_; }
  const Rational& coeff(std::size_t i) const { return coeffs_[i]; }

  ExactScalar rebased(const BasisPtr& basis) const;

  bool is_zero() const;
  bool is_rational() const;
  /// Unit coefficient; throws NonRationalLattice when irrational symbols are present.
  Rational rational_value() const;
  long double to_long_double() const;
  double to_double() const { return static_cast<double>(to_long_double()); }
  std::string to_string() const;

  ExactScalar operator-() const;
  ExactScalar& operator+=(const ExactScalar& o);
  ExactScalar& operator-=(const ExactScalar& o);
  ExactScalar& operator*=(const Rational& q);
  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(ExactScalar a, const Rational& q) { return a *= q; }
  friend ExactScalar operator*(const Rational& q, ExactScalar a) { return a *= q; }
  friend bool operator==(const ExactScalar& a, const ExactScalar& b);
  friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

 private:
  void normalize();

  BasisPtr basis_;
  RatVector coeffs_;
};

class ExactVector {
 public:
  ExactVector() : basis_(PeriodBasis::rational_only()) {}
  explicit ExactVector(std::size_t dim);  // zero vector over the rational basis
  ExactVector(BasisPtr basis, std::vector<ExactScalar> entries);
  ExactVector(const RatVector& v);  // NOLINT(google-explicit-constructor)
  ExactVector(std::initializer_list<long> v);

  static ExactVector zero(BasisPtr basis, std::size_t dim);

  std::size_t dim() const { return entries_.size(); }
  const BasisPtr& basis() const { return basis_; }
  const ExactScalar& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<ExactScalar>& entries() const { return entries_; }

  ExactVector rebased(const BasisPtr& basis) const;
  bool is_zero() const;
  bool is_rational() const;
  RatVector rational_values() const;
  std::vector<double> to_doubles() const;
  std::string to_string() const;

  /// Coefficients flattened entry-major: index i * basis.size() + j.
  RatVector embedding() const;
  static ExactVector from_embedding(BasisPtr basis, std::size_t dim, const RatVector& flat);

  ExactVector operator-() const;
  ExactVector& operator+=(const ExactVector& o);
  ExactVector& operator-=(const ExactVector& o);
  ExactVector& operator*=(const Rational& q);
  friend ExactVector operator+(ExactVector a, const ExactVector& b) { return a += b; }
  friend ExactVector operator-(ExactVector a, const ExactVector& b) { return a -= b; }
  friend ExactVector operator*(const Rational& q, ExactVector a) { return a *= q; }
  friend bool operator==(const ExactVector& a, const ExactVector& b);
  friend bool operator!=(const ExactVector& a, const ExactVector& b) { return !(a == b); }

 private:
  BasisPtr basis_;
  std::vector<ExactScalar> entries_;
};

/// A * x for an integer matrix acting on an exact vector.
ExactVector apply(const IntMatrix& A, const ExactVector& x);
/// Sum_i w_i * x for rational weights (row vector times a stack of vectors).
ExactVector combine(const RatVector& weights, const std::vector<ExactVector>& vectors);

}  // namespace affinekit
