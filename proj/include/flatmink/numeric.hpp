#pragma once

// Bracketed one-dimensional root finding shared by every solver in the library.
// Only sign information is used: no derivatives, no interpolation.

#include <cmath>
#include <limits>
#include <optional>

namespace flatmink::numeric {

inline constexpr int kMaxBisectIterations = 2200;
inline constexpr int kExpansionSteps = 64;
inline constexpr double kExpansionFactor = 4.0;

inline int sign_of(double v) noexcept { return (v > 0) - (v < 0); }

/// Midpoint that halves the bracket in log scale when it spans orders of magnitude.
inline double split_point(double lo, double hi) noexcept {
  if (lo > 0 && hi > kExpansionFactor * lo) return std::sqrt(lo) * std::sqrt(hi);
  if (hi < 0 && lo < kExpansionFactor * hi) return -std::sqrt(-lo) * std::sqrt(-hi);
  return lo + 0.5 * (hi - lo);
}

/// Bisection on an open bracket (lo, hi). The caller supplies the sign of fn
/// at (or in the limit toward) lo; the sign at hi is assumed opposite. The
/// endpoints are never evaluated. Stops when the bracket collapses to
/// adjacent doubles or fn hits an exact zero.
template <class Fn>
double bisect(Fn&& fn, double lo, double hi, int sign_lo) {
  double best = split_point(lo, hi);
  double best_abs = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < kMaxBisectIterations; ++iter) {
    const double mid = split_point(lo, hi);
    if (!(mid > lo && mid < hi)) break;
    const double v = fn(mid);
    if (std::abs(v) < best_abs) {
      best_abs = std::abs(v);
      best = mid;
    }
    const int s = sign_of(v);
    if (s == 0) return mid;
    if (s == sign_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return best;
}

/// Probes x = end + side * d for d = start, start/4, start/16, ... until fn has
/// the requested sign. `side` is +1 when the domain lies to the right of `end`.
/// After kExpansionSteps the step shrinks by 2^16 per probe down to the
/// smallest normal double, so roots pinned against a singular end are found.
template <class Fn>
std::optional<double> probe_toward_finite_end(Fn&& fn, double end, int side, double start,
                                              int wanted_sign) {
  const double toward = side > 0 ? INFINITY : -INFINITY;
  const double first = std::nextafter(end, toward);
  double d = start;
  for (int k = 0; d >= std::numeric_limits<double>::min(); ++k) {
    double x = end + side * d;
    if (x == end) x = first;
    if (sign_of(fn(x)) == wanted_sign) return x;
    if (x == first) break;
    d /= k < kExpansionSteps ? kExpansionFactor : 65536.0;
  }
  return std::nullopt;
}

/// Probes x = origin + side * start * 4^k until fn has the requested sign.
template <class Fn>
std::optional<double> probe_toward_infinity(Fn&& fn, double origin, int side, double start,
                                            int wanted_sign) {
  double d = start;
  for (int k = 0; k < kExpansionSteps; ++k, d *= kExpansionFactor) {
    const double x = origin + side * d;
    if (!std::isfinite(x)) break;
    if (sign_of(fn(x)) == wanted_sign) return x;
  }
  return std::nullopt;
}

}  // namespace flatmink::numeric
