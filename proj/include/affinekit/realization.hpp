#pragma once

// Period lattices of isotropic realizations given by explicit moment maps on
// (R^{2n}, sum dx_i ^ dp_i). Coordinates are ordered (x_1..x_n, p_1..p_n).

#include <cstdint>
#include <string>
#include <vector>

#include "affinekit/expr.hpp"

namespace affinekit {

struct MomentSystem {
  std::string name;
  std::size_t n = 0;                  // degrees of freedom; phase dimension 2n
  std::vector<Expression> mu;         // k components in the 2n coordinates
  std::vector<double> box_lo, box_hi; // domain box, per coordinate

  std::size_t k() const { return mu.size(); }
  std::size_t phase_dim() const { return 2 * n; }
  static std::vector<std::string> coordinate_names(std::size_t n);
};

/// Builds a system from component texts, checks k <= n and that the components
/// Poisson-commute (finite-difference bracket below 1e-6 at 100 seeded points).
MomentSystem make_system(std::string name, std::size_t n, const std::vector<std::string>& mu,
                         double box_half_width = 10.0);
/// "oscillator", "oscillator2", "free_particle", "anharmonic" (H + H^2).
MomentSystem builtin_system(const std::string& name);
std::vector<std::string> builtin_system_names();
/// The system with moment map c * mu.
MomentSystem rescaled(const MomentSystem& sys, double c);

/// Largest finite-difference Poisson bracket between components at seeded points.
double involutivity_residual(const MomentSystem& sys, std::size_t samples, std::uint64_t seed);

/// sigma(alpha) at z: sum_a alpha_a X_{mu_a} with X_H = (dH/dp, -dH/dx).
std::vector<double> sigma(const MomentSystem& sys, const std::vector<double>& alpha,
                          const std::vector<double>& z);

/// Max-norm gap between sigma(alpha) and a finite-difference Hamiltonian vector field
/// of alpha . mu over seeded random (alpha, point) pairs. Throws DomainViolation
/// when the moment map is not finite at a sample point.
double moment_condition_check(const MomentSystem& sys, std::size_t samples, std::uint64_t seed);

/// Time-one flow of sigma(alpha) from z; throws NonCompactFiber when it leaves the box.
std::vector<double> flow(const MomentSystem& sys, const std::vector<double>& alpha,
                         const std::vector<double>& z);

/// A point of mu^{-1}(b) found by seeded Gauss-Newton; throws DomainViolation.
std::vector<double> fiber_point(const MomentSystem& sys, const std::vector<double>& b,
                                std::uint64_t seed);

struct PeriodSearch {
  double tol = 1e-8;      // accepted return distance
  double radius = 8.0;    // search alpha in [-radius, radius]^k
  double step = 0.2;      // grid spacing
};

struct PeriodLatticeEstimate {
  std::vector<double> base;
  std::vector<double> fiber_point;
  std::vector<std::vector<double>> generators;  // k vectors
  std::vector<double> residuals;                // return distance per generator
  std::size_t candidates = 0;                   // distinct periods found in the window
};

/// Throws NonCompactFiber or NoReturnFound.
PeriodLatticeEstimate period_lattice(const MomentSystem& sys, const std::vector<double>& b,
                                     std::uint64_t seed, const PeriodSearch& search = {});

}  // namespace affinekit
