#pragma once

// Difference functions of two circle generators and their roots.
//
//   Check(x) =  a1 f1(x+b1) + c1 - a2 f1(x+b2) - c2   on (max(-b1,-b2), inf)
//   Hat(x)   = -a1 f2(-x-b1) + c1 + a2 f2(-x-b2) - c2  on (-inf, min(-b1,-b2))
//
// Both are analysed in the offset u > 0 from the finite end of the domain,
// where they take the common form a1 f(u+d1) - a2 f(u+d2) + C with
// min(d1, d2) = 0 (Hat up to an overall sign).

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flatmink/circles.hpp"
#include "flatmink/parallel.hpp"

namespace flatmink {

/// Relative size of |d| at an extremum, measured against the magnitude of its
/// terms, below which the extremum is reported as a tangential root.
inline constexpr double kTangencyBand = 1e-10;

enum class DiffKind { Check, Hat };

class DiffFunction {
 public:
  /// Throws InvalidParams unless a1, a2 > 0 and (a1,b1,c1) != (a2,b2,c2).
  DiffFunction(DiffKind kind, double a1, double b1, double c1, double a2, double b2, double c2,
               GeneratorRef gen);

  DiffKind kind() const noexcept { return kind_; }
  double a1() const noexcept { return a1_; }
  double b1() const noexcept { return b1_; }
  double c1() const noexcept { return c1_; }
  double a2() const noexcept { return a2_; }
  double b2() const noexcept { return b2_; }
  double c2() const noexcept { return c2_; }
  const GeneratorRef& generators() const noexcept { return gen_; }
  /// f1 for Check, f2 for Hat.
  const ShFunction& generator() const noexcept;

  /// Direct evaluation of the defining formula at x in the open domain.
  double operator()(double x) const;
  /// Value at offset u > 0 from the finite end, computed without forming x.
  double at_offset(double u) const;
  /// Sum of the magnitudes of the terms at offset u: the scale of rounding in at_offset.
  double magnitude_at_offset(double u) const;
  /// x for offset u: lower() + u for Check, upper() - u for Hat.
  double offset_to_x(double u) const;

  double lower() const noexcept;  // -inf for Hat
  double upper() const noexcept;  // +inf for Check

  /// Single-function form a f(y+b) + c - f(y) after dividing by a2.
  struct Reduced {
    double a;
    double b;
    double c;
  };
  Reduced reduced() const noexcept;

  // Offset form a1 f(u + d1) - a2 f(u + d2) + C, Hat = -(offset form).
  double d1() const noexcept { return d1_; }
  double d2() const noexcept { return d2_; }
  double offset_constant() const noexcept { return C_; }
  double orientation() const noexcept { return kind_ == DiffKind::Check ? 1.0 : -1.0; }

 private:
  double core(double u) const;

  DiffKind kind_;
  double a1_, b1_, c1_, a2_, b2_, c2_;
  GeneratorRef gen_;
  double d1_ = 0.0, d2_ = 0.0, C_ = 0.0;
  double shift_ = 0.0;  // max(-b1,-b2) for Check, min(-b1,-b2) for Hat
};

struct Root {
  double location = 0.0;  // x
  double offset = 0.0;    // u
  bool sign_change = true;
  bool derivative_zero = false;
  /// The limit at the finite end and the sign at the smallest normal offset
  /// bracket a crossing in (0, DBL_MIN); offset and location are that floor.
  bool below_resolution = false;
};

struct RootReport {
  std::vector<Root> roots;  // ascending in x
  std::string case_label;
  std::optional<double> critical;  // x where the derivative vanishes
  /// A bracket predicted by the limits could not be confirmed numerically.
  bool unresolved = false;

  int count() const noexcept { return static_cast<int>(roots.size()); }
  int tangent_count() const noexcept;
};

/// Unique zero of the derivative, located through the monotone auxiliary
/// h(u) = ln|f'(u+d1)| + ln(a1/a2) - ln|f'(u+d2)|.
std::optional<double> critical_point(const DiffFunction& d);

RootReport analyze_roots(const DiffFunction& d);

/// Message describing the first root-structure clause the observed counts
/// contradict, if any. `count` includes tangential roots.
std::optional<std::string> single_clause_violation(const DiffFunction& d, int count, int tangent_count);
/// Joint clauses for the Check/Hat pair of one circle pair.
std::optional<std::string> paired_clause_violation(const DiffFunction& check, const RootReport& rc,
                                                   const DiffFunction& hat, const RootReport& rh);

struct ScanOptions {
  int points = 16384;  // geometric grid on [min_offset, max_offset]
  double min_offset = 1e-12;
  double max_offset = 1e12;
  int tail_points = 1024;  // each of [1e-300, min_offset) and (max_offset, 1e300]
};

struct ScanCount {
  int crossings = 0;
  int touches = 0;
  int total() const noexcept { return crossings + touches; }
};

/// Brute-force root count on a geometric offset grid, with golden-section
/// refinement of every grid extremum that does not already straddle zero.
/// Values within kTangencyBand of zero count as zero; a run of them between
/// equal signs is a touch, between opposite signs a crossing.
ScanCount dense_scan_roots(const DiffFunction& d, const ScanOptions& opts = {});

struct CaseTableViolation {
  std::uint64_t trial = 0;
  std::array<double, 6> params{};  // a1, b1, c1, a2, b2, c2
  std::string message;
};

struct CaseTableReport {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<CaseTableViolation> violations;  // ascending by trial
  std::map<std::string, std::size_t> check_labels;
  std::map<std::string, std::size_t> hat_labels;
};

/// Random (a1,b1,c1,a2,b2,c2) draws; every trial checks the clause table for
/// Check and Hat, their joint clauses, and agreement with dense_scan_roots.
CaseTableReport verify_case_table(const ShFunction& f1, const ShFunction& f2, std::size_t trials,
                                  std::uint64_t seed, Exec exec = Exec::Parallel,
                                  const ScanOptions& scan = {});

/// Parameters drawn for trial `trial` of verify_case_table.
std::array<double, 6> case_table_parameters(std::uint64_t seed, std::uint64_t trial);

}  // namespace flatmink
