#pragma once

// Linear variation of the leafwise symplectic class: [w_0] + sum_i dev^i c_i,
// its behaviour under the pi_1 action, monodromy groups of the product family,
// and the numeric curvature / coadjoint-orbit integrals.

#include <functional>
#include <optional>
#include <vector>

#include "affinekit/affine.hpp"
#include "affinekit/expr.hpp"
#include "affinekit/lattice.hpp"

namespace affinekit {

struct LeafModel {
  std::size_t q = 0;
  std::size_t h2_rank = 0;
  std::vector<IntVector> chern;  // q vectors in Z^{h2_rank}
  ExactVector omega0;            // class in R^{h2_rank}
  std::vector<IntVector> positive_classes;  // homology classes that must pair positively

  void validate() const;
};

ExactVector variation_along(const LeafModel& leaf, const ExactVector& dev);

/// omega0' = omega0 + sum_k u^k c_k and c_i' = sum_k A[k][i] c_k, i.e. the columns of
/// A give the new classes in terms of the old (A(gamma) e_i = sum_j A_i^j e_j with
/// A_i^j stored at row j, column i).
LeafModel pi1_action(const LeafModel& leaf, const AffineElement& gamma);

/// Pairing test of a class against the supplied positive homology classes.
bool in_symplectic_cone(const LeafModel& leaf, const ExactVector& cls);

struct VariationResult {
  std::vector<IntVector> kernel_basis;  // primitive integer vectors v with sum v^i c_i = 0
  bool full_variation = false;
  bool zero_variation = false;
};
VariationResult variation_decomposition(const LeafModel& leaf);

struct MonodromyFamily {
  ClosedSubgroup n_mon{1, {}};
  ClosedSubgroup n_hol{1, {}};
  std::optional<ClosedSubgroup> n_e;
  DiscretenessVerdict mon_verdict;
  DiscretenessVerdict hol_verdict;
  /// Index of the N_mon lattice in the N_hol lattice (rational, discrete, equal rank).
  std::optional<Integer> index;
  std::optional<IndexFailure> index_failure;
};

/// Periods as generators of subgroups of R; spherical periods must occur among all
/// periods (and among the intermediate ones when given), else SubsetViolation.
MonodromyFamily monodromy_product_family(const std::vector<ExactScalar>& spherical,
                                         const std::vector<ExactScalar>& all,
                                         const std::optional<std::vector<ExactScalar>>& intermediate = {});

/// Strong type: N_mon is a lattice of full rank q.
bool strong_type_test(const ClosedSubgroup& n_mon, std::size_t q);

/// Cell values of a density on a rectangle [a1, a1 + p1) x [a2, a2 + p2), row-major
/// with n1 rows (first coordinate) and n2 columns.
struct CurvatureSample {
  double a1 = 0, a2 = 0;
  double period1 = 0, period2 = 0;
  std::size_t n1 = 0, n2 = 0;
  std::vector<double> values;
};

/// Midpoint samples of f(s1, s2).
CurvatureSample sample_curvature(const std::function<double(double, double)>& f, double a1,
                                 double p1, double a2, double p2, std::size_t n1, std::size_t n2);
/// Riemann sum over the fundamental domain; throws InconsistentGrid.
double curvature_pairing(const CurvatureSample& sample);

/// Integral of the Kirillov-Kostant-Souriau form over the radius-r sphere in su(2)* = R^3.
double coadjoint_su2_area(double r, std::size_t mesh_n);

}  // namespace affinekit
