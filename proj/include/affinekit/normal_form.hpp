#pragma once

#include <optional>
#include <vector>

#include "affinekit/matrix.hpp"

namespace affinekit {

/// Smith normal form D = U * M * V with U, V unimodular and
/// D diagonal, d_1 | d_2 | ... , all d_i >= 0.
struct SmithForm {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;

  std::size_t rank() const;
  /// Nonzero diagonal entries in order.
  std::vector<Integer> invariant_factors() const;
};

SmithForm smith_normal_form(const IntMatrix& M);

/// Row Hermite normal form: nonzero rows only, pivots positive, entries above
/// each pivot reduced into [0, pivot). The rows form a Z-basis of the row lattice.
IntMatrix hermite_normal_form(const IntMatrix& M);

/// Z-basis (as columns) of {x in Z^n : M x = 0}, plus a complementary set of
/// columns completing it to a basis of Z^n.
struct IntegerKernel {
  IntMatrix kernel;      // n x k
  IntMatrix complement;  // n x (n-k)
};
IntegerKernel integer_kernel(const IntMatrix& M);

Integer determinant(const IntMatrix& M);
bool is_unimodular(const IntMatrix& M);

// Exact linear algebra over Q.

/// Reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& M);
std::size_t rank(RatMatrix M);
/// Basis (as rows) of {x : M x = 0}.
RatMatrix nullspace(const RatMatrix& M);
/// Basis (as rows) of the row space.
RatMatrix row_space(const RatMatrix& M);
/// Some solution of X * A = B (rows of B in the row space of A), or nullopt.
std::optional<RatMatrix> solve_left(const RatMatrix& A, const RatMatrix& B);
std::optional<RatMatrix> inverse(const RatMatrix& M);
Rational determinant(const RatMatrix& M);

/// Common denominator of all entries (positive).
Integer common_denominator(const RatMatrix& M);

}  // namespace affinekit
