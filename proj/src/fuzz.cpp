#include <cmath>
#include <optional>

#include "flatmink/error.hpp"
#include "flatmink/incidence.hpp"
#include "flatmink/sampling.hpp"

namespace flatmink {

namespace {

constexpr int kMaxDraws = 64;

bool pairwise_nonparallel(const std::vector<TorusPoint>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (parallel(pts[i], pts[j])) return false;
    }
  }
  return true;
}

// Finite points at the same place up to the solver's precision.
bool same_point(const TorusPoint& p, const TorusPoint& q) {
  auto close = [](const ExtendedReal& a, const ExtendedReal& b) {
    if (a.is_infinite() || b.is_infinite()) return a == b;
    return std::abs(a.value() - b.value()) <= 1e-6 * (1 + std::abs(a.value()));
  };
  return close(p.x, q.x) && close(p.y, q.y);
}

struct Trial {
  std::vector<FuzzViolation> violations;
  std::size_t checks = 0;
};

class TrialRunner {
 public:
  TrialRunner(const PlaneSpec& plane, std::uint64_t seed, std::uint64_t trial, const FuzzOptions& opts)
      : plane_(plane), rng_(seed, trial), trial_(trial), opts_(opts) {}

  Trial run() {
    guarded("J-exist", [this] { join_exists(); });
    guarded("J-unique", [this] { join_unique(); });
    guarded("T-exist", [this] { touch_checks(); });
    guarded("Cap", [this] { cap(); });
    return std::move(out_);
  }

 private:
  template <class Fn>
  void guarded(const char* axiom, Fn&& fn) {
    ++out_.checks;
    try {
      fn();
    } catch (const std::exception& e) {
      fail(axiom, std::string("exception: ") + e.what());
    }
  }

  void fail(const char* axiom, std::string message) {
    out_.violations.push_back({trial_, axiom, std::move(message)});
  }

  void join_exists() {
    const auto type = static_cast<AdmissibleKind>(1 + trial_ % 5);
    const auto t = random_triple(type, rng_);
    const JoinSolution s = join(plane_, t[0], t[1], t[2]);
    for (double r : s.residuals) {
      if (!(r <= kJoinResidualTolerance)) {
        fail("J-exist", "residual " + std::to_string(r) + " for " + to_string(s.circle));
        return;
      }
    }
  }

  void join_unique() {
    const Circle c = random_circle(plane_, rng_);
    std::vector<TorusPoint> pts;
    for (int k = 0; k < kMaxDraws && pts.size() < 4; ++k) {
      pts.push_back(random_point_on(c, rng_));
      if (!pairwise_nonparallel(pts)) pts.pop_back();
    }
    if (pts.size() < 4) return;
    const Circle j1 = join(plane_, pts[0], pts[1], pts[2]).circle;
    const Circle j2 = join(plane_, pts[1], pts[2], pts[3]).circle;
    const double dist = parameter_distance(j1, j2);
    if (!(dist <= opts_.parameter_tolerance)) {
      fail("J-unique", to_string(j1) + " vs " + to_string(j2));
    }
  }

  void touch_checks() {
    const int family = static_cast<int>(trial_ % 4);
    const int half = rng_.coin() ? -1 : 1;
    const Circle c = random_circle(plane_, rng_, half, family == 0 ? 1.0 : (family == 3 ? 0.15 : 0.0));
    TorusPoint p;
    if (family == 0) {
      p = {kInf, kInf};
    } else if (family == 1) {
      p = infinite_points(c)[0];
    } else if (family == 2) {
      p = infinite_points(c)[1];
    } else {
      p = random_point_on(c, rng_, 0.0);
    }
    std::optional<TorusPoint> q;
    for (int k = 0; k < kMaxDraws && !q; ++k) {
      const TorusPoint cand = random_point(rng_, 0.15);
      if (!parallel(p, cand) && !contains(c, cand, 1e-6)) q = cand;
    }
    if (!q) return;
    const Circle d = touch(plane_, c, p, *q);
    if (!(residual(d, p) <= 1e-6) || !(residual(d, *q) <= 1e-6)) {
      fail("T-exist", to_string(d) + " misses p or q");
      return;
    }
    const IntersectionSet meet = intersect(c, d);
    if (meet.size() != 1 || !same_point(meet.points[0], p)) {
      fail("T-exist", "intersection of " + to_string(c) + " and " + to_string(d) + " is not {" +
                          p.to_string() + "}");
      return;
    }
    ++out_.checks;
    touch_unique(c, p, d);
  }

  // A second tangent circle through p and another point of d must be d.
  void touch_unique(const Circle& c, const TorusPoint& p, const Circle& d) {
    std::optional<TorusPoint> q2;
    for (int k = 0; k < kMaxDraws && !q2; ++k) {
      const TorusPoint cand = random_point_on(d, rng_, 0.3);
      if (!parallel(p, cand) && !contains(c, cand, 1e-6)) q2 = cand;
    }
    if (q2) {
      const Circle d2 = touch(plane_, c, p, *q2);
      if (!(parameter_distance(d, d2) <= opts_.parameter_tolerance)) {
        fail("T-unique", "re-solve through " + q2->to_string() + " gives " + to_string(d2) +
                             " instead of " + to_string(d));
      }
    }
  }

  void cap() {
    const int half = rng_.coin() ? -1 : 1;
    const Circle c1 = random_circle(plane_, rng_, half);
    const Circle c2 = random_circle(plane_, rng_, half);
    const IntersectionSet s = intersect(c1, c2);
    if (s.size() > 2) fail("Cap", std::to_string(s.size()) + " common points");
  }

  const PlaneSpec& plane_;
  CounterRng rng_;
  std::uint64_t trial_;
  const FuzzOptions& opts_;
  Trial out_;
};

}  // namespace

FuzzReport fuzz_axioms(const PlaneSpec& plane, std::size_t trials, std::uint64_t seed,
                       const FuzzOptions& opts) {
  std::vector<Trial> results(trials);
  for_each_index(trials, opts.exec, [&](std::size_t i) {
    results[i] = TrialRunner(plane, seed, i, opts).run();
  });
  FuzzReport report;
  report.trials = trials;
  report.seed = seed;
  for (auto& r : results) {
    report.checks += r.checks;
    for (auto& v : r.violations) report.violations.push_back(std::move(v));
  }
  return report;
}

}  // namespace flatmink
