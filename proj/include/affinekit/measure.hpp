#pragma once

// Integral affine densities and Monte Carlo estimates of Liouville push-forwards.
// Every estimator draws from CounterRng in fixed-size batches and reduces batch
// results in index order, so output depends on (seed, samples) only.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "affinekit/exact.hpp"
#include "affinekit/expr.hpp"

namespace affinekit {

/// |det| of a full-rank basis (rational bases exactly, symbol bases via approximations).
double affine_density(const std::vector<ExactVector>& basis);
/// Exact |det| for rational bases; throws RankDeficient / NonRationalLattice.
Rational affine_density_exact(const std::vector<ExactVector>& basis);

/// Uniform Liouville sampler on a box or a centred ball in Darboux coordinates
/// (x_1..x_n, p_1..p_n); weights are the Lebesgue volume per sample.
struct LiouvilleSampler {
  enum class Shape { Box, Ball } shape = Shape::Box;
  std::size_t phase_dim = 0;
  std::vector<double> lo, hi;  // box
  double radius = 0;           // ball
  std::optional<Expression> keep;  // optional rejection predicate: sample kept when keep(z) >= 0

  static LiouvilleSampler box(std::vector<double> lo, std::vector<double> hi);
  static LiouvilleSampler ball(std::size_t phase_dim, double radius);
  double volume() const;
  /// Point number `index` of the seeded sequence.
  std::vector<double> point(std::uint64_t seed, std::uint64_t index) const;
};

struct MeasureHistogram {
  std::vector<std::vector<double>> edges;  // per axis, bins + 1 increasing values
  std::vector<double> mass;                // row-major over axes (last axis fastest)
  std::vector<double> stderr_;             // Monte Carlo standard errors
  double total_mass = 0;                   // mass of all kept samples, including outside the bins
  double total_stderr = 0;
  double domain_volume = 0;
  std::uint64_t samples = 0;

  std::size_t bins(std::size_t axis) const { return edges[axis].size() - 1; }
  double bin_volume(std::size_t flat) const;
  std::vector<double> bin_center(std::size_t flat) const;
  double density(std::size_t flat) const { return mass[flat] / bin_volume(flat); }
};

/// Histogram of mu_*(Liouville) over the box of edges.
MeasureHistogram dh_pushforward(const LiouvilleSampler& sampler, const std::vector<Expression>& mu,
                                const std::vector<std::vector<double>>& edges, std::uint64_t samples,
                                std::uint64_t seed);

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins);

struct PolynomialFit {
  std::vector<double> coefficients;  // ascending powers
  double max_relative_residual = 0;  // over interior bins
};
/// Least-squares fit of the density on interior bins (first and last excluded).
PolynomialFit polynomial_fit(const MeasureHistogram& hist, std::size_t degree);

struct FubiniResult {
  double lhs = 0;         // Monte Carlo integral over M
  double lhs_stderr = 0;
  double rhs = 0;         // quadrature of iota * leaf integral against mu_Aff
  double discrepancy = 0; // |lhs - rhs| / |lhs|
};

/// M = S^2 x [0,1] with measure mu_scale * (area x affine_density db); f is an
/// expression in (x, y, z, b) and iota an expression in b.
FubiniResult fubini_check(const Expression& f, const Expression& iota, double affine_density,
                          double mu_scale, std::uint64_t samples, std::uint64_t seed);

struct WeylResult {
  double lhs = 0;  // Monte Carlo integral over R^3
  double lhs_stderr = 0;
  double rhs = 0;  // (1/|W|) * integral over R of 4 pi r^2 f(|r|), |W| = 2
  double rhs_error = 0;  // quadrature error estimate
  double relative_error = 0;  // |lhs - rhs| / |rhs| (0 when both vanish)
};
/// f is an expression in r = |x|.
WeylResult weyl_su2_check(const Expression& f, std::uint64_t samples, std::uint64_t seed);

struct MassEstimate {
  double value = 0;
  double stderr_ = 0;
};
/// Liouville mass of S^2 x S^2 with pr1*w - pr2*w, each sphere of area A.
MassEstimate pair_groupoid_mass(double area, std::uint64_t samples, std::uint64_t seed);

}  // namespace affinekit
