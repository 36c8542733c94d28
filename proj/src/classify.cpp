#include "flatmink/classify.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "flatmink/error.hpp"
#include "flatmink/numeric.hpp"

namespace flatmink {

namespace {

constexpr double kIdentityTolerance = 1e-8;
constexpr int kFitPoints = 129;
constexpr int kSubBrackets = 8;
constexpr double kZeroBand = 1e-12;

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> xs(n);
  const double l0 = std::log(lo), l1 = std::log(hi);
  for (int k = 0; k < n; ++k) xs[k] = std::exp(l0 + (l1 - l0) * k / (n - 1));
  return xs;
}

void require_normalised(const PlaneSpec& p, const char* what) {
  if (!p.normalised()) throw Error(ErrorKind::NotNormalised, std::string(what) + " needs a normalised plane");
}

// max |g(x) / (k x^-r) - 1| on the fit grid.
double power_gap(const ShFunction& g, double k, double r) {
  double worst = 0;
  for (double x : geometric_grid(1e-4, 1e4, kFitPoints)) {
    worst = std::max(worst, std::abs(g(x) / (k * std::pow(x, -r)) - 1.0));
  }
  return worst;
}

double relative_gap(double got, double want) {
  if (!std::isfinite(got) || !std::isfinite(want)) return std::numeric_limits<double>::infinity();
  return std::abs(got - want) / std::max(std::abs(want), std::numeric_limits<double>::min());
}

double safe_log(const ShFunction& f, double x) {
  try {
    return std::log(f(x));
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

// Scalar consequences of (I) for normalised f, g; each vanishes at every
// admissible r. Index 0 is g1(r) f1(1/r) = 1.
double condition_one(const PlaneSpec& f, const PlaneSpec& g, int which, double r) {
  switch (which) {
    case 0: return safe_log(g.f1(), r) + safe_log(f.f1(), 1.0 / r);
    case 1: return safe_log(g.f3(), r) + safe_log(f.f3(), 1.0 / r);
    case 2: return safe_log(g.f2(), 1.0) + safe_log(f.f1(), 1.0 / r) - safe_log(f.f2(), 1.0 / r);
    default: return safe_log(g.f4(), 1.0) + safe_log(f.f3(), 1.0 / r) - safe_log(f.f4(), 1.0 / r);
  }
}

constexpr int kConditions = 4;

}  // namespace

PlaneSpec normalise(const PlaneSpec& plane) {
  const double k1 = plane.f1()(1.0), k3 = plane.f3()(1.0);
  if (k1 == 1.0 && k3 == 1.0) return plane;
  return PlaneSpec(plane.f1().scaled(1.0 / k1), plane.f2().scaled(1.0 / k1), plane.f3().scaled(1.0 / k3),
                   plane.f4().scaled(1.0 / k3));
}

PowerFit fit_power(const ShFunction& f) {
  double sxy = 0, sxx = 0;
  const auto xs = geometric_grid(1e-4, 1e4, kFitPoints);
  std::vector<double> lf(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double lx = std::log(xs[k]);
    lf[k] = std::log(f(xs[k]));
    sxy += lx * lf[k];
    sxx += lx * lx;
  }
  PowerFit fit;
  fit.r = -sxy / sxx;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double e = std::abs(lf[k] + fit.r * std::log(xs[k]));
    fit.residual = std::isfinite(e) ? std::max(fit.residual, e) : std::numeric_limits<double>::infinity();
  }
  return fit;
}

std::optional<double> detect_power(const ShFunction& f) {
  const PowerFit fit = fit_power(f);
  if (fit.residual < kIdentityTolerance && fit.r > 0) return fit.r;
  return std::nullopt;
}

std::string to_string(KleinKroll k) {
  switch (k) {
    case KleinKroll::VII_F_23: return "VII.F.23";
    case KleinKroll::III_C_19: return "III.C.19";
    case KleinKroll::III_C_1: return "III.C.1";
  }
  return "?";
}

ClassificationReport classify_plane(const PlaneSpec& plane) {
  require_normalised(plane, "classify_plane");
  ClassificationReport rep;
  const double inf = std::numeric_limits<double>::infinity();
  rep.evidence = {inf, inf, inf, inf};
  const PowerFit fit1 = fit_power(plane.f1());
  const PowerFit fit3 = fit_power(plane.f3());
  rep.evidence[0] = fit1.residual;
  rep.evidence[2] = fit3.residual;
  const bool p1 = fit1.residual < kIdentityTolerance && fit1.r > 0;
  const bool p3 = fit3.residual < kIdentityTolerance && fit3.r > 0;
  if (p1) {
    const double s1 = 1.0 / plane.f2()(1.0);
    rep.evidence[1] = power_gap(plane.f2(), 1.0 / s1, fit1.r);
  }
  if (p3) {
    const double s2 = 1.0 / plane.f4()(1.0);
    rep.evidence[3] = power_gap(plane.f4(), 1.0 / s2, fit3.r);
  }
  const bool power = p1 && p3 && rep.evidence[1] < kIdentityTolerance && rep.evidence[3] < kIdentityTolerance;
  if (!power) return rep;
  const std::array<double, 4> q{fit1.r, 1.0 / plane.f2()(1.0), fit3.r, 1.0 / plane.f4()(1.0)};
  auto is_one = [](double v) { return std::abs(v - 1.0) <= kIdentityTolerance; };
  if (is_one(q[0]) && is_one(q[1]) && is_one(q[2]) && is_one(q[3])) {
    rep.group_dimension = 6;
    rep.klein_kroll = KleinKroll::VII_F_23;
    return rep;
  }
  rep.group_dimension = 4;
  rep.detected_exponents = q;
  const bool gh = std::abs(q[0] - q[2]) <= kIdentityTolerance * std::max(1.0, q[0]) && is_one(q[1]) && is_one(q[3]);
  rep.klein_kroll = gh ? KleinKroll::III_C_19 : KleinKroll::III_C_1;
  return rep;
}

std::string to_string(Transform t) {
  static const char* const names[] = {"A1", "A2", "A3", "A4", "A1'", "A2'", "A3'", "A4'"};
  return names[static_cast<int>(t)];
}

PlaneSpec transform_plane(const PlaneSpec& p, Transform t) {
  const int idx = static_cast<int>(t);
  PlaneSpec base = p;
  if (idx >= 4) {
    // Flip (x,y) -> (y,x).
    const ShFunction i3 = inverse_function(p.f3()), i4 = inverse_function(p.f4());
    const double k = 1.0 / i4(1.0);
    base = PlaneSpec(inverse_function(p.f1()), inverse_function(p.f2()), i4.scaled(k), i3.scaled(k));
  }
  const ShFunction &f1 = base.f1(), &f2 = base.f2(), &f3 = base.f3(), &f4 = base.f4();
  switch (idx % 4) {
    case 0: return base;
    case 1: {
      const double k4 = 1.0 / f4(1.0), k2 = 1.0 / f2(1.0);
      return PlaneSpec(f4.scaled(k4), f3.scaled(k4), f2.scaled(k2), f1.scaled(k2));
    }
    case 2: return PlaneSpec(f3, f4, f1, f2);
    default: {
      const double k2 = 1.0 / f2(1.0), k4 = 1.0 / f4(1.0);
      return PlaneSpec(f2.scaled(k2), f1.scaled(k2), f4.scaled(k4), f3.scaled(k4));
    }
  }
}

PlaneSpec rescale_plane(const PlaneSpec& p, double r) {
  if (!(r > 0) || !std::isfinite(r)) throw Error(ErrorKind::BadParam, "rescale needs r > 0");
  const double k1 = 1.0 / p.f1()(1.0 / r), k3 = 1.0 / p.f3()(1.0 / r);
  return PlaneSpec(p.f1().dilated(r).scaled(k1), p.f2().dilated(r).scaled(k1), p.f3().dilated(r).scaled(k3),
                   p.f4().dilated(r).scaled(k3));
}

double rescale_residual(const PlaneSpec& f, const PlaneSpec& g, double r, const IsoOptions& opts) {
  const double d1 = f.f1()(1.0 / r), d3 = f.f3()(1.0 / r);
  double worst = 0;
  try {
    for (double x : geometric_grid(opts.grid_lo, opts.grid_hi, opts.grid_points)) {
      worst = std::max(worst, relative_gap(g.f1()(x), f.f1()(x / r) / d1));
      worst = std::max(worst, relative_gap(g.f2()(x), f.f2()(x / r) / d1));
      worst = std::max(worst, relative_gap(g.f3()(x), f.f3()(x / r) / d3));
      worst = std::max(worst, relative_gap(g.f4()(x), f.f4()(x / r) / d3));
    }
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
  return std::isnan(worst) ? std::numeric_limits<double>::infinity() : worst;
}

std::optional<IsoWitness> isomorphic(const PlaneSpec& f, const PlaneSpec& g, const IsoOptions& opts) {
  require_normalised(f, "isomorphic");
  require_normalised(g, "isomorphic");
  // An isomorphism moving (inf,inf) exists only between classical planes.
  const bool cf = classify_plane(f).group_dimension == 6;
  const bool cg = classify_plane(g).group_dimension == 6;
  if (cf != cg) return std::nullopt;
  if (cf) return IsoWitness{Transform::A1, 1.0, rescale_residual(f, g, 1.0, opts)};
  return sweep_transforms(f, g, opts);
}

std::optional<IsoWitness> sweep_transforms(const PlaneSpec& f, const PlaneSpec& g, const IsoOptions& opts) {
  require_normalised(f, "sweep_transforms");
  require_normalised(g, "sweep_transforms");
  // The flip carries a plane of this family onto another one only when the
  // generators are power laws.
  const bool flippable = classify_plane(g).group_dimension >= 4;
  constexpr int kTransforms = 8;
  std::vector<std::optional<IsoWitness>> found(kTransforms);
  for_each_index(kTransforms, opts.exec, [&](std::size_t ti) {
    const auto t = static_cast<Transform>(ti);
    if (ti >= 4 && !flippable) return;
    PlaneSpec gt = g;
    try {
      gt = transform_plane(g, t);
    } catch (const Error&) {
      return;
    }
    // r = 1 first, then every sign change and near zero of the sweep.
    std::vector<double> candidates{1.0};
    for (int which = 0; which < kConditions; ++which) {
      auto h = [&](double r) { return condition_one(f, gt, which, r); };
      // h(1) = 0 for the first two conditions, so every bracket [2^k, 2^(k+1)]
      // is split into kSubBrackets geometric pieces; otherwise a root next to
      // r = 1 hides behind the exact zero at the bracket end.
      std::vector<double> near_zero, crossing;
      bool degenerate = true;
      for (int k = opts.min_exponent; k <= opts.max_exponent; ++k) {
        for (int j = 0; j < kSubBrackets; ++j) {
          const double lo = std::exp2(k + static_cast<double>(j) / kSubBrackets);
          const double hi = std::exp2(k + static_cast<double>(j + 1) / kSubBrackets);
          const double hl = h(lo), hh = h(hi);
          if (!std::isfinite(hl) || !std::isfinite(hh)) continue;
          if (std::abs(hl) > kZeroBand) degenerate = false;
          if (std::abs(hl) <= kZeroBand && lo != 1.0) near_zero.push_back(lo);
          if ((hl < 0 && hh > 0) || (hl > 0 && hh < 0)) {
            crossing.push_back(numeric::bisect(h, lo, hi, numeric::sign_of(hl)));
          }
        }
      }
      // A condition that vanishes on the whole sweep (power laws) says nothing about r.
      if (degenerate) continue;
      candidates.insert(candidates.end(), crossing.begin(), crossing.end());
      candidates.insert(candidates.end(), near_zero.begin(), near_zero.end());
    }
    for (double r : candidates) {
      const double res = rescale_residual(f, gt, r, opts);
      if (res <= opts.tolerance) {
        found[ti] = IsoWitness{t, r, res};
        return;
      }
    }
  });
  for (const auto& w : found) {
    if (w) return w;
  }
  return std::nullopt;
}

}  // namespace flatmink
