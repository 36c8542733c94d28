#pragma once

// Points of the torus S^1 x S^1 with S^1 modelled as R u {inf}.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

namespace flatmink {

/// A coordinate on S^1: a finite real or the single point at infinity.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  ExtendedReal(double v);  // throws DomainError for NaN / +-inf

  static constexpr ExtendedReal infinity() { return ExtendedReal(Tag{}); }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr bool is_finite() const noexcept { return !infinite_; }
  /// Precondition: is_finite().
  constexpr double value() const noexcept { return value_; }

  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

  /// Position on S^1 under the chart t -> 2 atan(t), inf -> pi.
  double chart_angle() const noexcept { return infinite_ ? std::numbers::pi : 2.0 * std::atan(value_); }

  std::string to_string() const;

 private:
  struct Tag {};
  constexpr explicit ExtendedReal(Tag) : infinite_(true) {}

  double value_ = 0.0;
  bool infinite_ = false;
};

inline const ExtendedReal kInf = ExtendedReal::infinity();

struct TorusPoint {
  ExtendedReal x;
  ExtendedReal y;

  friend constexpr bool operator==(const TorusPoint&, const TorusPoint&) = default;

  bool is_finite() const noexcept { return x.is_finite() && y.is_finite(); }
  std::string to_string() const;
};

/// Same vertical.
bool parallel_plus(const TorusPoint& p, const TorusPoint& q) noexcept;
/// Same horizontal.
bool parallel_minus(const TorusPoint& p, const TorusPoint& q) noexcept;
bool parallel(const TorusPoint& p, const TorusPoint& q) noexcept;

/// +1 when (a, b, c) is counterclockwise on S^1, -1 otherwise.
/// Throws DegenerateTriple when two arguments coincide.
int cyclic_orientation(const ExtendedReal& a, const ExtendedReal& b, const ExtendedReal& c);

enum class AdmissibleKind { Type1 = 1, Type2, Type3, Type4, Type5 };

/// Admissible-position type of a point triple. `roles[i]` is the index of the
/// input point playing canonical role p_{i+1} of the type template:
///   Type1: p1 = (inf,inf), p2, p3 finite
///   Type2: p1 finite, p2 = (inf, y2), p3 = (x3, inf)
///   Type3: p1, p2 finite, p3 = (x3, inf)
///   Type4: p1, p2 finite, p3 = (inf, y3)
///   Type5: all finite
struct AdmissibleType {
  AdmissibleKind kind;
  std::array<int, 3> roles;

  friend bool operator==(const AdmissibleType&, const AdmissibleType&) = default;
};

/// Template type of a pairwise nonparallel triple, irrespective of half.
AdmissibleType position_type(const TorusPoint& p1, const TorusPoint& p2, const TorusPoint& p3);

/// Returns the admissible type when the triple can be joined by a circle of the
/// requested half (-1 negative / orientation-reversing, +1 positive), nullopt
/// otherwise. Throws ParallelPoints when some pair is parallel.
std::optional<AdmissibleType> classify_admissible(const TorusPoint& p1, const TorusPoint& p2,
                                                  const TorusPoint& p3, int half);

/// The half (-1 or +1) that joins the triple. Exactly one does for nonparallel points.
int joining_half(const TorusPoint& p1, const TorusPoint& p2, const TorusPoint& p3);

}  // namespace flatmink
