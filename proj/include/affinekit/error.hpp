#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace affinekit {

enum class ErrorKind {
  InvalidInput,
  DimMismatch,
  NotFullRank,
  NonRationalLattice,
  RankDeficient,
  InvalidPath,
  NotALoop,
  BaseMismatch,
  InconsistentCrossing,
  SubsetViolation,
  InconsistentGrid,
  DomainViolation,
  NonCompactFiber,
  NoReturnFound,
  MissingSimplex,
  NotACocycle,
  LiftInconsistent,
  UnsupportedCoefficients,
};

std::string_view to_string(ErrorKind kind);

// Computation verdicts (as opposed to malformed input) map to CLI exit code 3.
bool is_computation_failure(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace affinekit
