#include "flatmink/error.hpp"

namespace flatmink {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DegenerateTriple: return "DegenerateTriple";
    case ErrorKind::ParallelPoints: return "ParallelPoints";
    case ErrorKind::NotAdmissibleForEitherHalf: return "NotAdmissibleForEitherHalf";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::BadParam: return "BadParam";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::BranchPoint: return "BranchPoint";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::IdenticalCircles: return "IdenticalCircles";
    case ErrorKind::PointNotOnCircle: return "PointNotOnCircle";
    case ErrorKind::PointOnCircle: return "PointOnCircle";
    case ErrorKind::NotNormalised: return "NotNormalised";
    case ErrorKind::MixedHalves: return "MixedHalves";
  }
  return "Unknown";
}

}  // namespace flatmink
