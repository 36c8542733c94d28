#pragma once

// Random circles and points used by the fuzzers, tests and benchmarks.

#include <array>

#include "flatmink/circles.hpp"
#include "flatmink/rng.hpp"
#include "flatmink/torus.hpp"

namespace flatmink {

/// a log-uniform in [0.2, 5], b and c uniform in [-3, 3]; lines with |s| in
/// [0.2, 5]. `half` is -1, +1, or 0 for a fair coin.
Circle random_circle(const PlaneSpec& plane, CounterRng& rng, int half = 0,
                     double line_probability = 0.15);

/// A point of c; finite points sit 0.05..20 away from the branch point.
TorusPoint random_point_on(const Circle& c, CounterRng& rng, double infinite_probability = 0.2);

/// Coordinates uniform in [-10, 10], each infinite with the given probability.
TorusPoint random_point(CounterRng& rng, double infinite_probability = 0.1);

/// Three pairwise nonparallel points following the template of `type` with
/// random coordinates, in random order. Admissible for exactly one half.
std::array<TorusPoint, 3> random_triple(AdmissibleKind type, CounterRng& rng);

}  // namespace flatmink
