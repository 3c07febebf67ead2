#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "affinekit/exact.hpp"
#include "affinekit/normal_form.hpp"

namespace affinekit {

/// Discrete subgroup of R^q given by Q-linearly independent basis vectors
/// (independence is checked over the symbol expansion).
class Lattice {
 public:
  Lattice(std::size_t dim, std::vector<ExactVector> basis);
  static Lattice standard(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return basis_.size(); }
  const std::vector<ExactVector>& basis() const { return basis_; }
  bool is_rational() const;
  /// Basis vectors as rows; throws NonRationalLattice.
  RatMatrix basis_matrix() const;

 private:
  std::size_t dim_;
  std::vector<ExactVector> basis_;
};

/// Closure H = V + D of a subgroup: V the largest subspace contained in it
/// (the cospan), D a lattice complementing V.
struct SubgroupDecomposition {
  std::vector<ExactVector> cospan_basis;    // R-linearly independent
  std::vector<ExactVector> discrete_basis;  // HNF-canonical
  std::size_t z_rank = 0;                   // rank of the finitely generated group itself
  bool used_symbol_assertion = false;       // verdict relied on Q-independence of symbols
};

/// Closed subgroup of R^q generated by finitely many vectors.
class ClosedSubgroup {
 public:
  ClosedSubgroup(std::size_t dim, std::vector<ExactVector> generators);
  /// Subgroup with a known decomposition: span of `cospan` plus Z-span of `discrete`.
  static ClosedSubgroup from_decomposition(std::size_t dim, std::vector<ExactVector> cospan,
                                           std::vector<ExactVector> discrete);

  std::size_t dim() const { return dim_; }
  const std::vector<ExactVector>& generators() const { return generators_; }
  /// Computed once per value (copies share the cache); safe to call concurrently.
  const SubgroupDecomposition& decomposition() const;

 private:
  struct Cache {
    std::once_flag once;
    SubgroupDecomposition value;
  };

  std::size_t dim_;
  std::vector<ExactVector> generators_;
  std::shared_ptr<Cache> cache_;
};

Lattice dual_lattice(const Lattice& L);

/// Basis of the real linear hull of the generators.
std::vector<ExactVector> span(const ClosedSubgroup& C);
/// Basis of the largest linear subspace contained in the closed subgroup.
std::vector<ExactVector> cospan(const ClosedSubgroup& C);

struct DiscretenessVerdict {
  bool discrete = false;
  std::vector<ExactVector> basis;            // Z-basis when discrete
  std::vector<ExactVector> cospan_witness;   // nonzero cospan when not discrete
  std::string provenance;
};
DiscretenessVerdict is_discrete(const ClosedSubgroup& C);

/// Rank of the discrete part of the closed subgroup.
std::size_t discrete_rank(const ClosedSubgroup& C);

enum class IndexFailure { NotContained, RankDrop };
struct FiniteIndex {
  std::optional<Integer> index;
  std::optional<IndexFailure> failure;
};
FiniteIndex finite_index(const Lattice& sub, const Lattice& sup);

/// Whether v lies in a discrete closed subgroup; throws InvalidInput when C is not discrete.
bool contains(const ClosedSubgroup& C, const ExactVector& v);

/// Dual closed subgroup {xi : xi(h) in Z for all h in C} for rational C.
ClosedSubgroup dual_group(const ClosedSubgroup& C);

// Rational subspace helpers (vectors must be rational).
std::vector<ExactVector> annihilator(const std::vector<ExactVector>& subspace, std::size_t dim);
bool same_subspace(const std::vector<ExactVector>& a, const std::vector<ExactVector>& b,
                   std::size_t dim);

/// Rank of the real span, treating irrational symbols as generic values.
std::size_t real_rank(const std::vector<ExactVector>& vectors);

/// HNF-canonical Z-basis of the group generated by `vectors` (Q-independent result).
std::vector<ExactVector> z_basis(const std::vector<ExactVector>& vectors, std::size_t dim);

}  // namespace affinekit
