#include <cmath>
#include <limits>

#include "flatmink/error.hpp"
#include "flatmink/functions.hpp"

namespace flatmink {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double central_difference(const ShFunction& f, double x, double rel_step) {
  const double h = x * rel_step;
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double relative_error(double approx, double exact) {
  const double denom = std::max(std::abs(exact), std::numeric_limits<double>::min());
  return std::abs(approx - exact) / denom;
}

// Strict convexity of sampled values v over grid x: consecutive slopes must
// increase by more than the rounding floor of the slopes themselves.
// Returns (passed, worst normalized increment, witness).
struct ConvexityResult {
  bool passed = true;
  double worst = std::numeric_limits<double>::infinity();
  double witness = 0.0;
  // Every failing increment lies within the rounding margin.
  bool below_resolution = true;
};

ConvexityResult strictly_convex(const std::vector<double>& x, const std::vector<double>& v) {
  ConvexityResult out;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i + 2 < n; ++i) {
    const double dx0 = x[i + 1] - x[i];
    const double dx1 = x[i + 2] - x[i + 1];
    const double s0 = (v[i + 1] - v[i]) / dx0;
    const double s1 = (v[i + 2] - v[i + 1]) / dx1;
    const double floor0 = 4.0 * kEps * (std::abs(v[i]) + std::abs(v[i + 1])) / dx0;
    const double floor1 = 4.0 * kEps * (std::abs(v[i + 1]) + std::abs(v[i + 2])) / dx1;
    const double margin = floor0 + floor1;
    const double increment = s1 - s0;
    const double scale = std::abs(s0) + std::abs(s1);
    const double normalized = scale > 0 ? increment / scale : increment;
    if (!std::isfinite(increment) || !(increment > margin)) {
      if (!(increment >= -margin)) out.below_resolution = false;
      if (out.passed || !std::isfinite(normalized) || normalized < out.worst) {
        out.worst = std::isfinite(normalized) ? normalized : -std::numeric_limits<double>::infinity();
        out.witness = x[i + 1];
      }
      out.passed = false;
    } else if (out.passed && normalized < out.worst) {
      out.worst = normalized;
      out.witness = x[i + 1];
    }
  }
  return out;
}

// Below this f is treated as underflowed: differences and ratios of such
// values carry no digits.
constexpr double kValueFloor = 1e-250;

// cfg with grid_max lowered, if needed, to where f(x + max b) is still above
// kValueFloor. Left alone when even the low end of the grid fails.
CheckerConfig representable(const ShFunction& f, CheckerConfig cfg) {
  double bmax = 0.0;
  for (double b : cfg.limit_b_values) bmax = std::max(bmax, b);
  auto ok = [&](double x) {
    const double v = f(x + bmax);
    return std::isfinite(v) && v >= kValueFloor && std::isfinite(f(x));
  };
  const double floor_x = 16.0 * cfg.grid_min;
  if (ok(cfg.grid_max) || floor_x >= cfg.grid_max || !ok(floor_x)) return cfg;
  double lo = std::log(floor_x), hi = std::log(cfg.grid_max);
  for (int k = 0; k < 200 && hi - lo > 1e-12; ++k) {
    const double mid = 0.5 * (lo + hi);
    (ok(std::exp(mid)) ? lo : hi) = mid;
  }
  cfg.grid_max = std::exp(lo);
  return cfg;
}

}  // namespace

void CheckerConfig::validate() const {
  if (!(grid_min > 0) || !(grid_max > grid_min) || grid_points < 16 || !(tolerance > 0) ||
      !std::isfinite(grid_max)) {
    throw Error(ErrorKind::BadParam,
                "checker config needs grid_min > 0, grid_max > grid_min, grid_points >= 16, "
                "tolerance > 0");
  }
}

std::vector<double> CheckerConfig::grid() const {
  std::vector<double> xs(static_cast<std::size_t>(grid_points));
  const double lmin = std::log(grid_min);
  const double step = (std::log(grid_max) - lmin) / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) xs[i] = std::exp(lmin + step * i);
  xs.front() = grid_min;
  xs.back() = grid_max;
  return xs;
}

CheckReport check_strongly_hyperbolic(const ShFunction& f, const CheckerConfig& requested) {
  requested.validate();
  const CheckerConfig cfg = representable(f, requested);
  const double horizon = cfg.grid_max;
  for (double b : cfg.limit_b_values) {
    if (!(horizon + b > 0)) {
      throw Error(ErrorKind::DomainError, "limit probe x + b <= 0 for b = " + std::to_string(b));
    }
  }

  const auto xs = cfg.grid();
  std::vector<double> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = f(xs[i]);

  CheckReport report;
  report.function = f.name();
  report.grid_max = cfg.grid_max;
  const double tol = cfg.tolerance;

  // 1: f > 0, f -> +inf at 0+, f -> 0 at +inf. A limit is accepted when the
  // threshold is reached or the function still moves by a relative factor of
  // at least `tol` across the last decade of the grid.
  {
    auto& c = report.conditions[0];
    c.index = 1;
    c.name = "limits at 0+ and +inf";
    bool positive = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!(fs[i] > 0) || !std::isfinite(fs[i])) {
        positive = false;
        c.witness = xs[i];
        c.note = "f not a finite positive value";
        break;
      }
    }
    const double lo = cfg.grid_min;
    const double hi = cfg.grid_max;
    const double f_lo = fs.front();
    const double f_hi = fs.back();
    const double rise = f_lo / f(std::min(10.0 * lo, hi)) - 1.0;
    const double fall = f(std::max(hi / 10.0, lo)) / f_hi - 1.0;
    const bool zero_end = f_lo > 1.0 / tol || rise >= tol;
    const bool inf_end = f_hi < tol || fall >= tol;
    c.passed = positive && zero_end && inf_end;
    c.worst_residual = std::min(zero_end ? std::max(rise, f_lo * tol - 1.0) : rise,
                                inf_end ? std::max(fall, 1.0 - f_hi / tol) : fall);
    if (positive) {
      if (!zero_end) {
        c.witness = lo;
        c.note = "f does not diverge toward 0+";
      } else if (!inf_end) {
        c.witness = hi;
        c.note = "f does not vanish toward +inf";
      }
    }
  }

  // 2: strict convexity of f.
  {
    auto& c = report.conditions[1];
    c.index = 2;
    c.name = "strict convexity";
    const auto r = strictly_convex(xs, fs);
    c.passed = r.passed;
    c.worst_residual = r.worst;
    c.witness = r.witness;
    if (!r.passed && r.below_resolution) c.note = "curvature below rounding resolution";
  }

  // 3: f(x + b) / f(x) -> 1.
  {
    auto& c = report.conditions[2];
    c.index = 3;
    c.name = "translation ratio limit";
    c.passed = true;
    c.worst_residual = 0.0;
    for (double b : cfg.limit_b_values) {
      const double ratio = f(horizon + b) / f(horizon);
      const double residual = std::abs(ratio - 1.0);
      if (!(residual <= c.worst_residual)) {
        c.worst_residual = std::isfinite(residual) ? residual : std::numeric_limits<double>::infinity();
        c.witness = b;
        c.note = "ratio f(X+b)/f(X) = " + std::to_string(ratio);
      }
      if (!(residual <= tol)) c.passed = false;
    }
  }

  // 4: differentiability; the supplied derivative must match a symmetric
  // difference. Black-box derivatives are compared against a 10x wider step.
  {
    auto& c = report.conditions[3];
    c.index = 4;
    c.name = "differentiability";
    c.passed = true;
    c.worst_residual = 0.0;
    for (double x : xs) {
      const double reference =
          f.analytic_derivative() ? f.derivative(x) : central_difference(f, x, 1e-5);
      const double fd = central_difference(f, x, 1e-6);
      const double err = relative_error(fd, reference);
      if (!(err <= c.worst_residual)) {
        c.worst_residual = std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
        c.witness = x;
      }
      if (!(err <= tol)) c.passed = false;
    }
  }

  // 5: ln|f'| strictly convex; f' must be negative wherever sampled.
  {
    auto& c = report.conditions[4];
    c.index = 5;
    c.name = "strict convexity of ln|f'|";
    std::vector<double> logs(xs.size());
    bool negative = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double d = f.derivative(xs[i]);
      if (!(d < 0) || !std::isfinite(d)) {
        negative = false;
        c.witness = xs[i];
        c.note = "f' not negative";
        break;
      }
      logs[i] = std::log(-d);
    }
    if (negative) {
      const auto r = strictly_convex(xs, logs);
      c.passed = r.passed;
      c.worst_residual = r.worst;
      c.witness = r.witness;
      if (!r.passed && r.below_resolution) c.note = "curvature below rounding resolution";
    } else {
      c.passed = false;
      c.worst_residual = -std::numeric_limits<double>::infinity();
    }
  }

  report.overall = true;
  for (const auto& c : report.conditions) report.overall = report.overall && c.passed;
  return report;
}

LimitLemmaReport check_limit_lemma(const ShFunction& f, const CheckerConfig& requested,
                                   const LimitLemmaOptions& opts) {
  requested.validate();
  const CheckerConfig cfg = representable(f, requested);
  const double X = cfg.grid_max;
  const double tol = cfg.tolerance;
  if (opts.s == 0 || opts.t == 0) throw Error(ErrorKind::BadParam, "offsets s and t must be nonzero");
  if (!(X + opts.s > 0) || !(X + opts.t > 0)) {
    throw Error(ErrorKind::DomainError, "limit lemma probe leaves the domain");
  }
  LimitLemmaReport report;
  report.horizon = X;

  // 1: f'(X) / f'(X + b) -> 1 for b > 0.
  {
    auto& p = report.parts[0];
    p.index = 1;
    p.target = 1.0;
    double b = 1.0;
    for (double cand : cfg.limit_b_values) {
      if (cand > 0) {
        b = cand;
        break;
      }
    }
    p.value = f.derivative(X) / f.derivative(X + b);
    p.residual = std::abs(p.value - 1.0);
  }
  // 2: f'(X) / f(X) -> 0.
  {
    auto& p = report.parts[1];
    p.index = 2;
    p.target = 0.0;
    p.value = f.derivative(X) / f(X);
    p.residual = std::abs(p.value);
  }
  const double fX = f(X);
  // 3: (f(X + s) - f(X)) / f'(X) -> s.
  {
    auto& p = report.parts[2];
    p.index = 3;
    p.target = opts.s;
    p.value = (f(X + opts.s) - fX) / f.derivative(X);
    p.residual = std::abs(p.value - opts.s) / std::abs(opts.s);
  }
  // 4: (f(X + s) - f(X)) / (f(X + t) - f(X)) -> s / t.
  {
    auto& p = report.parts[3];
    p.index = 4;
    p.target = opts.s / opts.t;
    p.value = (f(X + opts.s) - fX) / (f(X + opts.t) - fX);
    p.residual = std::abs(p.value - p.target) / std::abs(p.target);
  }
  // 5: liminf f'/f = -inf at 0+; witnessed by the lowest decade of the grid.
  {
    auto& p = report.parts[4];
    p.index = 5;
    p.target = -1.0 / tol;
    double lowest = std::numeric_limits<double>::infinity();
    for (double x : cfg.grid()) {
      if (x > 10.0 * cfg.grid_min) break;
      lowest = std::min(lowest, f.derivative(x) / f(x));
    }
    p.value = lowest;
    p.residual = lowest - p.target;
    p.passed = lowest <= p.target;
  }
  for (int i = 0; i < 4; ++i) report.parts[i].passed = report.parts[i].residual <= tol;
  report.overall = true;
  for (const auto& p : report.parts) report.overall = report.overall && p.passed;
  return report;
}

}  // namespace flatmink
