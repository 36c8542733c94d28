#pragma once

// Joining, intersecting and touching circles of M(f1,f2;f3,f4).
//
// Positive-half requests are mirrored through (x,y) -> (-x,y), solved by the
// negative-half code over (f3,f4) and mirrored back. Inside the negative half
// several cases are reduced to others by the half-turn (x,y) -> (-x,-y), which
// exchanges the roles of the convex and concave generators.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "flatmink/circles.hpp"
#include "flatmink/parallel.hpp"
#include "flatmink/torus.hpp"

namespace flatmink {

/// Membership residual above which a solver attaches a conditioning warning.
inline constexpr double kJoinResidualTolerance = 1e-6;

struct CaseTrace {
  int half = -1;
  AdmissibleKind type = AdmissibleKind::Type5;  // join only
  /// Case number of the constructive argument used; 0 for the degenerate
  /// line solutions (collinear triple, q on the tangent line).
  int case_index = 0;
  std::string note;
};

struct JoinSolution {
  Circle circle;
  std::array<double, 3> residuals{};
  CaseTrace trace;
  std::vector<std::string> warnings;
};

/// The circle of the plane through three pairwise nonparallel points.
/// Throws ParallelPoints, NoConvergence.
JoinSolution join(const PlaneSpec& plane, const TorusPoint& p1, const TorusPoint& p2,
                  const TorusPoint& p3);

struct IntersectionSet {
  std::vector<TorusPoint> points;  // finite points by x, then infinite ones
  bool tangential = false;
  /// Some bracket predicted by the limits could not be confirmed.
  bool unresolved = false;

  std::size_t size() const noexcept { return points.size(); }
};

/// Common points of two circles. Curves of one half must share generators.
/// Throws IdenticalCircles.
IntersectionSet intersect(const Circle& c, const Circle& d);

struct TouchSolution {
  Circle circle;
  CaseTrace trace;
};

/// The circle through p and q that touches c at p.
/// Throws PointNotOnCircle, PointOnCircle, ParallelPoints, NoConvergence.
TouchSolution touch_solution(const PlaneSpec& plane, const Circle& c, const TorusPoint& p,
                             const TorusPoint& q);
Circle touch(const PlaneSpec& plane, const Circle& c, const TorusPoint& p, const TorusPoint& q);

/// Image of a point under (x,y) -> (x + beta, alpha*y + gamma).
TorusPoint apply_phi_infinity(const TorusPoint& p, double alpha, double beta, double gamma);
/// Points of c at infinity.
std::vector<TorusPoint> infinite_points(const Circle& c);

struct FuzzOptions {
  /// Parameter agreement required of two solutions that must coincide.
  double parameter_tolerance = 1e-8;
  Exec exec = Exec::Parallel;
};

struct FuzzViolation {
  std::uint64_t trial = 0;
  std::string axiom;  // J-exist, J-unique, T-exist, T-unique, Cap
  std::string message;
};

struct FuzzReport {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<FuzzViolation> violations;  // ascending by trial
  std::size_t checks = 0;
};

/// Randomised check of the joining and touching axioms. Every trial draws a
/// half, a circle and points on it, and exercises join, touch and intersect.
FuzzReport fuzz_axioms(const PlaneSpec& plane, std::size_t trials, std::uint64_t seed,
                       const FuzzOptions& opts = {});

}  // namespace flatmink
