#include "affinekit/normal_form.hpp"

#include <algorithm>

namespace affinekit {

std::size_t SmithForm::rank() const {
  std::size_t r = 0;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
    if (D(i, i) != 0) ++r;
  return r;
}

std::vector<Integer> SmithForm::invariant_factors() const {
  std::vector<Integer> out;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
    if (D(i, i) != 0) out.push_back(D(i, i));
  return out;
}

namespace {

// Row Hermite reduction in place; every row operation is mirrored on `T` when given.
// Returns the number of pivot rows.
std::size_t row_hermite(IntMatrix& H, IntMatrix* T) {
  const std::size_t m = H.rows(), n = H.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && H(p, c) == 0) ++p;
    if (p == m) continue;
    H.swap_rows(r, p);
    if (T) T->swap_rows(r, p);
    for (std::size_t i = r + 1; i < m; ++i) {
      if (H(i, c) == 0) continue;
      // Bezout step on rows r, i: [[s, t], [-b/g, a/g]] has determinant 1.
      const Integer a = H(r, c), b = H(i, c);
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      const Integer bg = b / g, ag = a / g;
      auto mix = [&](IntMatrix& X) {
        for (std::size_t j = 0; j < X.cols(); ++j) {
          const Integer xr = X(r, j), xi = X(i, j);
          X(r, j) = s * xr + t * xi;
          X(i, j) = ag * xi - bg * xr;
        }
      };
      mix(H);
      if (T) mix(*T);
    }
    if (H(r, c) < 0) {
      H.negate_row(r);
      if (T) T->negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), H(i, c).get_mpz_t(), H(r, c).get_mpz_t());
      H.add_row(i, r, -q);
      if (T) T->add_row(i, r, -q);
    }
    ++r;
  }
  return r;
}

bool is_diagonal(const IntMatrix& D) {
  for (std::size_t i = 0; i < D.rows(); ++i)
    for (std::size_t j = 0; j < D.cols(); ++j)
      if (i != j && D(i, j) != 0) return false;
  return true;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& M) {
  const std::size_t m = M.rows(), n = M.cols();
  SmithForm s{IntMatrix::identity(m), M, IntMatrix::identity(n)};
  IntMatrix& D = s.D;
  IntMatrix& U = s.U;
  IntMatrix& V = s.V;

  // Alternate row and column Hermite reductions until diagonal. Column steps run
  // on the transpose: (W D^T)^T = D W^T, so V picks up W^T.
  while (!is_diagonal(D)) {
    row_hermite(D, &U);
    if (is_diagonal(D)) break;
    IntMatrix Dt = D.transpose();
    IntMatrix W = IntMatrix::identity(n);
    row_hermite(Dt, &W);
    D = Dt.transpose();
    V = V * W.transpose();
  }

  const std::size_t k = std::min(m, n);
  for (std::size_t i = 0; i < k; ++i)
    if (D(i, i) < 0) {
      D.negate_row(i);
      U.negate_row(i);
    }
  // zeros to the end
  std::size_t nz = 0;
  for (std::size_t i = 0; i < k; ++i)
    if (D(i, i) != 0) {
      if (i != nz) {
        D.swap_rows(i, nz);
        U.swap_rows(i, nz);
        D.swap_cols(i, nz);
        V.swap_cols(i, nz);
      }
      ++nz;
    }
  // divisibility chain: diag(a, b) -> diag(gcd, lcm)
  for (std::size_t i = 0; i < nz; ++i)
    for (std::size_t j = i + 1; j < nz; ++j) {
      const Integer a = D(i, i), b = D(j, j);
      if (b % a == 0) continue;
      Integer g, x, y;
      mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      const Integer bg = b / g, ag = a / g;
      for (std::size_t c = 0; c < U.cols(); ++c) {
        const Integer ui = U(i, c), uj = U(j, c);
        U(i, c) = x * ui + y * uj;
        U(j, c) = ag * uj - bg * ui;
      }
      // right factor [[1, -y b/g], [1, x a/g]] on columns i, j
      const Integer r12 = -y * bg, r22 = x * ag;
      for (std::size_t r = 0; r < V.rows(); ++r) {
        const Integer vi = V(r, i), vj = V(r, j);
        V(r, i) = vi + vj;
        V(r, j) = r12 * vi + r22 * vj;
      }
      D(i, i) = g;
      D(j, j) = a * bg;
    }
  return s;
}

IntMatrix hermite_normal_form(const IntMatrix& M) {
  IntMatrix H = M;
  const std::size_t r = row_hermite(H, nullptr);
  IntMatrix out(r, H.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < H.cols(); ++j) out(i, j) = H(i, j);
  return out;
}

IntegerKernel integer_kernel(const IntMatrix& M) {
  const std::size_t n = M.cols();
  const SmithForm s = smith_normal_form(M);
  const std::size_t r = s.rank();
  IntegerKernel k{IntMatrix(n, n - r), IntMatrix(n, r)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < r; ++j) k.complement(i, j) = s.V(i, j);
    for (std::size_t j = r; j < n; ++j) k.kernel(i, j - r) = s.V(i, j);
  }
  return k;
}

Integer determinant(const IntMatrix& M) {
  require(M.rows() == M.cols(), ErrorKind::DimMismatch, "determinant of non-square matrix");
  const std::size_t n = M.rows();
  if (n == 0) return 1;
  // Bareiss fraction-free elimination
  IntMatrix A = M;
  int sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (A(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && A(p, k) == 0) ++p;
      if (p == n) return 0;
      A.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = A(i, j) * A(k, k) - A(i, k) * A(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        A(i, j) = v;
      }
    prev = A(k, k);
  }
  return sign * A(n - 1, n - 1);
}

bool is_unimodular(const IntMatrix& M) {
  if (M.rows() != M.cols()) return false;
  return abs(determinant(M)) == 1;
}

std::vector<std::size_t> rref(RatMatrix& M) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < M.cols() && r < M.rows(); ++c) {
    std::size_t p = r;
    while (p < M.rows() && M(p, c) == 0) ++p;
    if (p == M.rows()) continue;
    M.swap_rows(r, p);
    const Rational inv = 1 / M(r, c);
    for (std::size_t j = 0; j < M.cols(); ++j) M(r, j) *= inv;
    for (std::size_t i = 0; i < M.rows(); ++i)
      if (i != r && M(i, c) != 0) M.add_row(i, r, -M(i, c));
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(RatMatrix M) { return rref(M).size(); }

RatMatrix nullspace(const RatMatrix& M) {
  RatMatrix R = M;
  const auto pivots = rref(R);
  const std::size_t n = M.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  RatMatrix N(n - pivots.size(), n);
  std::size_t k = 0;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    N(k, f) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) N(k, pivots[i]) = -R(i, f);
    ++k;
  }
  return N;
}

RatMatrix row_space(const RatMatrix& M) {
  RatMatrix R = M;
  const auto pivots = rref(R);
  RatMatrix out(pivots.size(), M.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) out(i, j) = R(i, j);
  return out;
}

std::optional<RatMatrix> solve_left(const RatMatrix& A, const RatMatrix& B) {
  // X A = B  <=>  A^T X^T = B^T
  require(A.cols() == B.cols(), ErrorKind::DimMismatch, "solve_left shape");
  const std::size_t k = A.rows(), n = A.cols(), m = B.rows();
  RatMatrix aug(n, k + m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) aug(i, j) = A(j, i);
    for (std::size_t j = 0; j < m; ++j) aug(i, k + j) = B(j, i);
  }
  RatMatrix red = aug;
  // eliminate only on the coefficient block
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < k && r < n; ++c) {
    std::size_t p = r;
    while (p < n && red(p, c) == 0) ++p;
    if (p == n) continue;
    red.swap_rows(r, p);
    const Rational inv = 1 / red(r, c);
    for (std::size_t j = 0; j < k + m; ++j) red(r, j) *= inv;
    for (std::size_t i = 0; i < n; ++i)
      if (i != r && red(i, c) != 0) red.add_row(i, r, -red(i, c));
    pivots.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (red(i, k + j) != 0) return std::nullopt;
  RatMatrix X(m, k);
  for (std::size_t i = 0; i < pivots.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) X(j, pivots[i]) = red(i, k + j);
  return X;
}

std::optional<RatMatrix> inverse(const RatMatrix& M) {
  require(M.rows() == M.cols(), ErrorKind::DimMismatch, "inverse of non-square matrix");
  const std::size_t n = M.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = M(i, j);
    aug(i, n + i) = 1;
  }
  const auto pivots = rref(aug);
  if (pivots.size() < n || pivots.back() >= n) return std::nullopt;
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

Rational determinant(const RatMatrix& M) {
  require(M.rows() == M.cols(), ErrorKind::DimMismatch, "determinant of non-square matrix");
  RatMatrix A = M;
  const std::size_t n = A.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && A(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      A.swap_rows(p, c);
      det = -det;
    }
    det *= A(c, c);
    for (std::size_t i = c + 1; i < n; ++i)
      if (A(i, c) != 0) A.add_row(i, c, -A(i, c) / A(c, c));
  }
  return det;
}

Integer common_denominator(const RatMatrix& M) {
  Integer l = 1;
  for (const auto& q : M.data()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  return l;
}

}  // namespace affinekit
