#pragma once

// Group presentations shared by several test files.

#include "affinekit/affine.hpp"

namespace fixture {

using namespace affinekit;

inline AffineElement elem(std::initializer_list<long> u, std::initializer_list<std::initializer_list<long>> A) {
  return AffineElement(ExactVector(u), IntMatrix(A));
}

// x -> x + e1, x -> x + e2
inline GroupPresentation torus1() {
  GroupPresentation P;
  P.add("g1", elem({1, 0}, {{1, 0}, {0, 1}}));
  P.add("g2", elem({0, 1}, {{1, 0}, {0, 1}}));
  return P;
}

inline ClosedForm torus2_closed_form() {
  ClosedForm cf;
  cf.exponents = {"n", "m"};
  cf.u = {Expression::parse("n + m*(m-1)/2", cf.exponents), Expression::parse("m", cf.exponents)};
  cf.A = {{Expression::parse("1", cf.exponents), Expression::parse("m", cf.exponents)},
          {Expression::parse("0", cf.exponents), Expression::parse("1", cf.exponents)}};
  return cf;
}

// g2 = ((0,1), [[1,1],[0,1]])
inline GroupPresentation torus2(bool with_closed_form = true) {
  GroupPresentation P;
  P.add("g1", elem({1, 0}, {{1, 0}, {0, 1}}));
  P.add("g2", elem({0, 1}, {{1, 1}, {0, 1}}));
  if (with_closed_form) P.closed_form = torus2_closed_form();
  return P;
}

// g1(x) = -x + 1, g2(x) = -x
inline GroupPresentation z2z2() {
  GroupPresentation P;
  P.add("g1", elem({1}, {{-1}}));
  P.add("g2", elem({0}, {{-1}}));
  return P;
}

}  // namespace fixture
