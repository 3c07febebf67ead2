#include "affinekit/error.hpp"

namespace affinekit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::NotFullRank: return "NotFullRank";
    case ErrorKind::NonRationalLattice: return "NonRationalLattice";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::InvalidPath: return "InvalidPath";
    case ErrorKind::NotALoop: return "NotALoop";
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::InconsistentCrossing: return "InconsistentCrossing";
    case ErrorKind::SubsetViolation: return "SubsetViolation";
    case ErrorKind::InconsistentGrid: return "InconsistentGrid";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::NonCompactFiber: return "NonCompactFiber";
    case ErrorKind::NoReturnFound: return "NoReturnFound";
    case ErrorKind::MissingSimplex: return "MissingSimplex";
    case ErrorKind::NotACocycle: return "NotACocycle";
    case ErrorKind::LiftInconsistent: return "LiftInconsistent";
    case ErrorKind::UnsupportedCoefficients: return "UnsupportedCoefficients";
  }
  return "Unknown";
}

bool is_computation_failure(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonCompactFiber:
    case ErrorKind::NoReturnFound:
    case ErrorKind::NotACocycle:
    case ErrorKind::NotFullRank:
    case ErrorKind::RankDeficient:
    case ErrorKind::LiftInconsistent:
      return true;
    default:
      return false;
  }
}

}  // namespace affinekit
