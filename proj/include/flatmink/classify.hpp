#pragma once

// Normalisation, power-law detection, group dimension, Klein-Kroll type and
// isomorphism up to the coordinate changes A1..A4 and their flipped versions.

#include <array>
#include <optional>
#include <string>

#include "flatmink/circles.hpp"
#include "flatmink/parallel.hpp"

namespace flatmink {

/// Rescales (f1,f2) by 1/f1(1) and (f3,f4) by 1/f3(1). The circle set is
/// unchanged; only the parameter a of each curve absorbs the factor.
PlaneSpec normalise(const PlaneSpec& plane);

struct PowerFit {
  double r = 0.0;
  double residual = 0.0;  // max |ln f(x) + r ln x| on the grid
};

/// Least-squares fit of ln f = -r ln x (no intercept) on 129 geometric points
/// spanning [1e-4, 1e4].
PowerFit fit_power(const ShFunction& f);
/// r > 0 when f(x) = x^(-r) with fit residual < 1e-8.
std::optional<double> detect_power(const ShFunction& f);

enum class KleinKroll { VII_F_23, III_C_19, III_C_1 };
std::string to_string(KleinKroll k);

struct ClassificationReport {
  int group_dimension = 3;
  KleinKroll klein_kroll = KleinKroll::III_C_1;
  /// (r1, s1, r2, s2) with f2 = x^(-r1)/s1 and f4 = x^(-r2)/s2.
  std::optional<std::array<double, 4>> detected_exponents;
  /// Fit residuals of f1, f3 and the pointwise gaps of f2, f4 to their
  /// predicted power laws; infinity where a fit was not attempted.
  std::array<double, 4> evidence{};
};

/// Throws NotNormalised.
ClassificationReport classify_plane(const PlaneSpec& plane);

/// A1 = identity, A2 = (x,-y), A3 = (-x,y), A4 = (-x,-y); the primed versions
/// are composed with the flip (x,y) -> (y,x).
enum class Transform { A1, A2, A3, A4, A1p, A2p, A3p, A4p };
std::string to_string(Transform t);

/// Generators of the image of the plane under a transform.
PlaneSpec transform_plane(const PlaneSpec& plane, Transform t);
/// The plane with g1(x) = f1(x/r)/f1(1/r), g2(x) = f2(x/r)/f1(1/r) and the
/// same with (f3, f4) over f3(1/r): the image under (x,y) -> (r x, s y).
PlaneSpec rescale_plane(const PlaneSpec& plane, double r);

struct IsoWitness {
  Transform transform = Transform::A1;
  double r = 1.0;
  double residual = 0.0;
};

struct IsoOptions {
  int min_exponent = -40;  // r brackets [2^k, 2^(k+1)]
  int max_exponent = 40;
  int grid_points = 64;
  double grid_lo = 1e-3;
  double grid_hi = 1e3;
  double tolerance = 1e-6;
  Exec exec = Exec::Parallel;
};

/// Relative gap between rescale_plane(f, r) and g on the verification grid.
double rescale_residual(const PlaneSpec& f, const PlaneSpec& g, double r, const IsoOptions& opts = {});

/// First transform (in enum order) and r > 0 for which g agrees with the
/// rescaled transform of f. Candidate r come from the scalar consequences of
/// (I) swept over [2^min_exponent, 2^(max_exponent+1)]; flipped transforms are
/// tried only when g is a power plane. Throws NotNormalised.
std::optional<IsoWitness> isomorphic(const PlaneSpec& f, const PlaneSpec& g, const IsoOptions& opts = {});

/// The transform-and-r search of isomorphic() without the classicality
/// pre-test. Throws NotNormalised.
std::optional<IsoWitness> sweep_transforms(const PlaneSpec& f, const PlaneSpec& g, const IsoOptions& opts = {});

}  // namespace flatmink
