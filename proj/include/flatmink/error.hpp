#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flatmink {

enum class ErrorKind {
  DegenerateTriple,
  ParallelPoints,
  NotAdmissibleForEitherHalf,
  UnknownName,
  BadParam,
  DomainError,
  NoConvergence,
  BranchPoint,
  InvalidParams,
  IdenticalCircles,
  PointNotOnCircle,
  PointOnCircle,
  NotNormalised,
  MixedHalves,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Exception carrying a machine-readable kind; the CLI maps it to a JSON diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace flatmink
