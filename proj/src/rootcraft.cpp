#include "flatmink/rootcraft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flatmink/error.hpp"
#include "flatmink/numeric.hpp"
#include "flatmink/rng.hpp"

namespace flatmink {

using numeric::sign_of;

DiffFunction::DiffFunction(DiffKind kind, double a1, double b1, double c1, double a2, double b2,
                           double c2, GeneratorRef gen)
    : kind_(kind), a1_(a1), b1_(b1), c1_(c1), a2_(a2), b2_(b2), c2_(c2), gen_(std::move(gen)) {
  if (!(a1 > 0) || !(a2 > 0)) throw Error(ErrorKind::InvalidParams, "difference function needs a1, a2 > 0");
  for (double v : {a1, b1, c1, a2, b2, c2}) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidParams, "parameters must be finite");
  }
  if (a1 == a2 && b1 == b2 && c1 == c2) {
    throw Error(ErrorKind::InvalidParams, "difference of identical generators");
  }
  if (!gen_) throw Error(ErrorKind::InvalidParams, "difference function without generators");
  if (kind == DiffKind::Check) {
    const double m = std::min(b1, b2);
    d1_ = b1 - m;
    d2_ = b2 - m;
    C_ = c1 - c2;
    shift_ = -m;
  } else {
    const double m = std::max(b1, b2);
    d1_ = m - b1;
    d2_ = m - b2;
    C_ = c2 - c1;
    shift_ = -m;
  }
}

const ShFunction& DiffFunction::generator() const noexcept {
  return kind_ == DiffKind::Check ? gen_->convex : gen_->concave;
}

double DiffFunction::operator()(double x) const {
  if (kind_ == DiffKind::Check) {
    const ShFunction& f = gen_->convex;
    return a1_ * f(x + b1_) + c1_ - a2_ * f(x + b2_) - c2_;
  }
  const ShFunction& f = gen_->concave;
  return -a1_ * f(-x - b1_) + c1_ + a2_ * f(-x - b2_) - c2_;
}

double DiffFunction::core(double u) const {
  const ShFunction& f = generator();
  // Equal offsets: fold the two singular terms before they overflow.
  if (d1_ == d2_) return (a1_ - a2_) * f(u + d1_) + C_;
  return a1_ * f(u + d1_) - a2_ * f(u + d2_) + C_;
}

double DiffFunction::at_offset(double u) const { return orientation() * core(u); }

double DiffFunction::magnitude_at_offset(double u) const {
  const ShFunction& f = generator();
  return a1_ * f(u + d1_) + a2_ * f(u + d2_) + std::abs(C_);
}

double DiffFunction::offset_to_x(double u) const {
  return kind_ == DiffKind::Check ? shift_ + u : shift_ - u;
}

double DiffFunction::lower() const noexcept {
  return kind_ == DiffKind::Check ? shift_ : -std::numeric_limits<double>::infinity();
}

double DiffFunction::upper() const noexcept {
  return kind_ == DiffKind::Check ? std::numeric_limits<double>::infinity() : shift_;
}

DiffFunction::Reduced DiffFunction::reduced() const noexcept {
  const double b = kind_ == DiffKind::Check ? b1_ - b2_ : b2_ - b1_;
  return {a1_ / a2_, b, C_ / a2_};
}

int RootReport::tangent_count() const noexcept {
  int n = 0;
  for (const auto& r : roots) n += r.derivative_zero ? 1 : 0;
  return n;
}

namespace {

// Signs of the reduced form a f(y+b) + c - f(y); d1 - d2 equals the reduced b.
struct Signs {
  int a;  // sign(a1 - a2)
  int b;  // sign(d1 - d2)
  int c;  // sign(C)
};

Signs signs_of(const DiffFunction& d) {
  return {sign_of(d.a1() - d.a2()), sign_of(d.d1() - d.d2()), sign_of(d.offset_constant())};
}

int limit_at_zero(const Signs& s) {
  if (s.b < 0) return +1;  // a1 f(u) is the singular term
  if (s.b > 0) return -1;
  if (s.a != 0) return s.a;
  return s.c;
}

int limit_at_infinity(const Signs& s) {
  if (s.c != 0) return s.c;
  if (s.a != 0) return s.a;
  return -s.b;
}

std::optional<double> critical_offset(const DiffFunction& d) {
  const Signs s = signs_of(d);
  const bool exists = (s.b < 0 && s.a < 0) || (s.b > 0 && s.a > 0);
  if (!exists) return std::nullopt;
  const ShFunction& f = d.generator();
  const double log_ratio = std::log(d.a1() / d.a2());
  auto h = [&](double u) {
    return std::log(-f.derivative(u + d.d1())) - std::log(-f.derivative(u + d.d2())) + log_ratio;
  };
  // h runs from sign(-b) * inf at 0+ to ln(a1/a2) at infinity.
  const int near_zero = s.b < 0 ? +1 : -1;
  const auto lo = numeric::probe_toward_finite_end(h, 0.0, +1, 1.0, near_zero);
  const auto hi = numeric::probe_toward_infinity(h, 0.0, +1, 1.0, -near_zero);
  if (!lo || !hi) return std::nullopt;
  return numeric::bisect(h, *lo, *hi, near_zero);
}

double core_value(const DiffFunction& d, double u) { return d.orientation() * d.at_offset(u); }

std::string sign_summary(const Signs& s) {
  auto rel = [](int v, const char* name, const char* ref) {
    return std::string(name) + (v > 0 ? ">" : v < 0 ? "<" : "=") + ref;
  };
  return rel(s.a, "a", "1") + ", " + rel(s.b, "b", "0") + ", " + rel(s.c, "c", "0");
}

std::string clause_label(const Signs& s, int count, int tangent) {
  std::string clause;
  const bool bz = s.b == 0;
  const bool cz = s.c == 0;
  if (bz && cz) {
    clause = "b=c=0: no roots";
  } else if (bz != cz) {
    if (s.a == 0) {
      clause = "a=1, one of b,c zero: no roots";
    } else {
      clause = count == 1 ? "one of b,c zero: one crossing root" : "one of b,c zero: no root";
    }
  } else if (count == 2) {
    clause = "b,c nonzero: two crossing roots";
  } else if (count == 1 && tangent == 1) {
    clause = "b,c nonzero: one tangential root";
  } else if (count == 1) {
    clause = "b,c nonzero: one crossing root";
  } else {
    clause = "b,c nonzero: no roots";
  }
  return clause + "; " + sign_summary(s);
}

}  // namespace

std::optional<double> critical_point(const DiffFunction& d) {
  const auto u = critical_offset(d);
  if (!u) return std::nullopt;
  return d.offset_to_x(*u);
}

RootReport analyze_roots(const DiffFunction& d) {
  RootReport report;
  const Signs s = signs_of(d);
  const int l0 = limit_at_zero(s);
  const int linf = limit_at_infinity(s);
  auto core = [&d](double u) { return core_value(d, u); };
  std::vector<Root> found;

  auto crossing = [&](double u) {
    found.push_back(Root{d.offset_to_x(u), u, true, false});
  };
  auto probe_left = [&](double limit, int want) {
    return numeric::probe_toward_finite_end(core, 0.0, +1, std::min(1.0, 0.5 * limit), want);
  };
  auto probe_right = [&](double origin, int want) {
    return numeric::probe_toward_infinity(core, origin, +1, 1.0, want);
  };
  // The probe toward u = 0 stops at DBL_MIN; a crossing closer to the end than
  // that is certified by the analytic limit l0 and the sign at the floor.
  auto below_floor = [&]() {
    const double u = std::numeric_limits<double>::min();
    if (sign_of(core(u)) != -l0) return false;
    found.push_back(Root{d.offset_to_x(u), u, true, false, true});
    return true;
  };

  const auto ucrit = (s.b == 0) ? std::nullopt : critical_offset(d);
  if (ucrit) report.critical = d.offset_to_x(*ucrit);

  if (s.b == 0 && s.a == 0) {
    // Constant difference C != 0.
  } else if (!ucrit) {
    if (l0 != linf) {
      const auto lo = probe_left(std::numeric_limits<double>::infinity(), l0);
      const auto hi = probe_right(0.0, linf);
      if (lo && hi) {
        crossing(numeric::bisect(core, *lo, *hi, l0));
      } else if (!(hi && below_floor())) {
        report.unresolved = true;
      }
    }
  } else {
    const double uc = *ucrit;
    const double vc = core(uc);
    // b1 < b2 (offset form) puts a minimum at uc, b1 > b2 a maximum.
    const int extremum_side = s.b < 0 ? +1 : -1;
    const bool in_band = std::abs(vc) <= kTangencyBand * d.magnitude_at_offset(uc);
    if (in_band && l0 == extremum_side && linf == extremum_side) {
      found.push_back(Root{d.offset_to_x(uc), uc, false, true});
    } else {
      const int sc = vc == 0 ? -extremum_side : sign_of(vc);
      if (sc != l0) {
        if (const auto lo = probe_left(uc, l0)) {
          crossing(numeric::bisect(core, *lo, uc, l0));
        } else if (!below_floor()) {
          report.unresolved = true;
        }
      }
      if (sc != linf) {
        if (const auto hi = probe_right(uc, linf)) {
          crossing(numeric::bisect(core, uc, *hi, sc));
        } else {
          report.unresolved = true;
        }
      }
    }
  }

  std::sort(found.begin(), found.end(),
            [](const Root& p, const Root& q) { return p.location < q.location; });
  report.roots = std::move(found);
  report.case_label = clause_label(s, report.count(), report.tangent_count());
  return report;
}

std::optional<std::string> single_clause_violation(const DiffFunction& d, int count, int tangent) {
  const Signs s = signs_of(d);
  const int A = s.a, B = s.b, C = s.c;
  const std::string where = std::string(d.kind() == DiffKind::Check ? "check" : "hat") + " (" +
                            sign_summary(s) + "): ";
  if (count > 2) return where + "more than two roots";
  if (B == 0 && C == 0) {
    if (count != 0) return where + "b=c=0 admits no roots";
    return std::nullopt;
  }
  if ((B == 0) != (C == 0)) {
    if (A == 0) {
      if (count != 0) return where + "a=1 with one of b,c zero admits no roots";
      return std::nullopt;
    }
    const bool root = (A > 0 && B > 0 && C == 0) || (A > 0 && B == 0 && C < 0) ||
                      (A < 0 && B < 0 && C == 0) || (A < 0 && B == 0 && C > 0);
    if (tangent != 0) return where + "one of b,c zero admits no tangential root";
    if (count != (root ? 1 : 0)) {
      return where + (root ? "expected exactly one crossing root" : "expected no root");
    }
    return std::nullopt;
  }
  const bool pair_signs = (A < 0 && B < 0 && C > 0) || (A > 0 && B > 0 && C < 0);
  if (count == 2) {
    if (tangent != 0) return where + "two roots must both cross";
    if (!pair_signs) return where + "two roots need a<1,b<0,c>0 or a>1,b>0,c<0";
  } else if (count == 1 && tangent == 1) {
    if (!pair_signs) return where + "a tangential root needs a<1,b<0,c>0 or a>1,b>0,c<0";
  } else if (count == 1) {
    if (B * C <= 0) return where + "one crossing root needs bc>0";
  } else if (B * C >= 0) {
    return where + "no roots needs bc<0";
  }
  return std::nullopt;
}

std::optional<std::string> paired_clause_violation(const DiffFunction& check, const RootReport& rc,
                                                   const DiffFunction& hat, const RootReport& rh) {
  const int nc = rc.count(), nh = rh.count();
  const int tc = rc.tangent_count(), th = rh.tangent_count();
  if (nc + nh > 2) return std::string("check and hat together have more than two roots");
  const bool same_b = check.b1() == check.b2();
  const bool same_c = check.c1() == check.c2();
  const bool same_a = check.a1() == check.a2();
  (void)hat;
  if (same_b != same_c) {
    if (same_a) {
      if (nc != 0 || nh != 0) return std::string("equal a with exactly one of b,c equal admits no roots");
      return std::nullopt;
    }
    const bool check_only = nc == 1 && tc == 0 && nh == 0;
    const bool hat_only = nh == 1 && th == 0 && nc == 0;
    if (!(check_only || hat_only)) {
      return std::string("exactly one of check, hat must have a single crossing root");
    }
    return std::nullopt;
  }
  if (!same_b && !same_c) {
    auto joint = [](int n1, int t1, int n2, int t2) {
      const bool two = n1 == 2 && t1 == 0 && n2 == 0;
      const bool touch = n1 == 1 && t1 == 1 && n2 == 0;
      const bool split = n1 == 1 && t1 == 0 && n2 == 1 && t2 == 0;
      return two || touch || split;
    };
    if (nc >= 1 && !joint(nc, tc, nh, th)) return std::string("check-first joint clause violated");
    if (nh >= 1 && !joint(nh, th, nc, tc)) return std::string("hat-first joint clause violated");
  }
  return std::nullopt;
}

ScanCount dense_scan_roots(const DiffFunction& d, const ScanOptions& opts) {
  if (opts.points < 3 || opts.tail_points < 0 || !(opts.min_offset > 1e-300) ||
      !(opts.max_offset > opts.min_offset) || !(opts.max_offset < 1e300)) {
    throw Error(ErrorKind::BadParam, "scan needs >= 3 points on an offset range inside (1e-300, 1e300)");
  }
  std::vector<double> lu;
  auto append = [&lu](double lo, double hi, int n, bool closed) {
    const int m = closed ? n - 1 : n;
    for (int k = 0; k < n; ++k) lu.push_back(lo + (hi - lo) * k / m);
  };
  const double lmin = std::log(opts.min_offset), lmax = std::log(opts.max_offset);
  append(std::log(1e-300), lmin, opts.tail_points, false);
  append(lmin, lmax, opts.points, true);
  const std::size_t tail_start = lu.size();
  append(lmax, std::log(1e300), opts.tail_points + 1, true);
  lu.erase(lu.begin() + static_cast<std::ptrdiff_t>(tail_start));  // lmax twice

  const std::size_t n = lu.size();
  std::vector<double> v(n);
  std::vector<int> s(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = std::exp(lu[k]);
    v[k] = d.at_offset(u);
    s[k] = std::abs(v[k]) <= kTangencyBand * d.magnitude_at_offset(u) ? 0 : sign_of(v[k]);
  }

  ScanCount out;
  // The end u -> 0+ as a sample before the grid: f(0+) = +inf, so the term
  // with the smaller shift dominates, or a1 - a2 when the shifts agree.
  int at_end = 0;
  if (d.d1() != d.d2()) {
    at_end = d.d1() < d.d2() ? +1 : -1;
  } else if (d.a1() != d.a2()) {
    at_end = d.a1() > d.a2() ? +1 : -1;
  } else {
    at_end = sign_of(d.offset_constant());
  }
  at_end *= static_cast<int>(d.orientation());
  // Sign pattern between consecutive nonzero samples.
  // The end sample only ever adds a crossing: near u = 0 the band swallows
  // the samples of a folded core, which is no evidence of a touch.
  int prev_sign = at_end;
  bool prev_is_end = true;
  std::size_t gap = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (s[k] == 0) {
      ++gap;
      continue;
    }
    if (prev_sign != 0) {
      if (prev_sign != s[k]) {
        ++out.crossings;
      } else if (gap > 0 && !prev_is_end) {
        ++out.touches;
      }
    }
    prev_sign = s[k];
    prev_is_end = false;
    gap = 0;
  }
  // Extrema hidden between samples.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const int sk = s[k];
    if (sk == 0 || s[k - 1] != sk || s[k + 1] != sk) continue;
    if (!(std::abs(v[k]) < std::abs(v[k - 1]) && std::abs(v[k]) <= std::abs(v[k + 1]))) continue;
    double lo = lu[k - 1], hi = lu[k + 1];
    auto g = [&](double l) { return sk * d.at_offset(std::exp(l)); };
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double g1 = g(x1), g2 = g(x2);
    for (int it = 0; it < 120 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
      if (g1 < g2) {
        hi = x2;
        x2 = x1;
        g2 = g1;
        x1 = hi - phi * (hi - lo);
        g1 = g(x1);
      } else {
        lo = x1;
        x1 = x2;
        g1 = g2;
        x2 = lo + phi * (hi - lo);
        g2 = g(x2);
      }
    }
    const double at = g1 < g2 ? x1 : x2;
    const double best = std::min(g1, g2);
    if (std::abs(best) <= kTangencyBand * d.magnitude_at_offset(std::exp(at))) {
      ++out.touches;
    } else if (best < 0) {
      out.crossings += 2;
    }
  }
  return out;
}

std::array<double, 6> case_table_parameters(std::uint64_t seed, std::uint64_t trial) {
  CounterRng rng(seed, trial);
  double a1 = rng.log_uniform(0.2, 5.0), a2 = rng.log_uniform(0.2, 5.0);
  double b1 = rng.uniform(-3.0, 3.0), b2 = rng.uniform(-3.0, 3.0);
  double c1 = rng.uniform(-3.0, 3.0), c2 = rng.uniform(-3.0, 3.0);
  // Force the boundary clauses of the case table often enough to matter.
  switch (rng.below(8)) {
    case 0: b2 = b1; break;
    case 1: c2 = c1; break;
    case 2: a2 = a1; break;
    case 3: a2 = a1; b2 = b1; break;
    case 4: a2 = a1; c2 = c1; break;
    default: break;
  }
  return {a1, b1, c1, a2, b2, c2};
}

namespace {

struct TrialOutcome {
  std::vector<std::string> messages;
  std::string check_label;
  std::string hat_label;
};

void check_one(const DiffFunction& d, const RootReport& r, const ScanOptions& scan,
               std::vector<std::string>& messages) {
  const char* name = d.kind() == DiffKind::Check ? "check" : "hat";
  if (r.unresolved) messages.push_back(std::string(name) + ": unresolved bracket");
  if (auto v = single_clause_violation(d, r.count(), r.tangent_count())) messages.push_back(*v);
  for (const auto& root : r.roots) {
    // Certified by a sign bracket, not by a residual; the dense scan still counts it.
    if (root.below_resolution) {
      if (root.offset > std::numeric_limits<double>::min()) {
        messages.push_back(std::string(name) + ": below-resolution root at a normal offset");
      }
      continue;
    }
    const double res = std::abs(d.at_offset(root.offset));
    const double bound = 1e-9 * (1.0 + std::abs(d.c1() - d.c2()));
    const double band = kTangencyBand * d.magnitude_at_offset(root.offset);
    if (res > std::max(bound, band)) {
      messages.push_back(std::string(name) + ": root residual " + std::to_string(res));
    }
  }
  const ScanCount oracle = dense_scan_roots(d, scan);
  if (oracle.total() != r.count()) {
    messages.push_back(std::string(name) + ": " + std::to_string(r.count()) +
                       " roots, dense scan finds " + std::to_string(oracle.total()));
  }
}

}  // namespace

CaseTableReport verify_case_table(const ShFunction& f1, const ShFunction& f2, std::size_t trials,
                                  std::uint64_t seed, Exec exec, const ScanOptions& scan) {
  const auto gen = std::make_shared<const GeneratorPair>(GeneratorPair{f1, f2});
  std::vector<TrialOutcome> outcomes(trials);
  for_each_index(trials, exec, [&](std::size_t i) {
    TrialOutcome& out = outcomes[i];
    const auto p = case_table_parameters(seed, i);
    try {
      const DiffFunction check(DiffKind::Check, p[0], p[1], p[2], p[3], p[4], p[5], gen);
      const DiffFunction hat(DiffKind::Hat, p[0], p[1], p[2], p[3], p[4], p[5], gen);
      const RootReport rc = analyze_roots(check);
      const RootReport rh = analyze_roots(hat);
      out.check_label = rc.case_label;
      out.hat_label = rh.case_label;
      check_one(check, rc, scan, out.messages);
      check_one(hat, rh, scan, out.messages);
      if (auto v = paired_clause_violation(check, rc, hat, rh)) out.messages.push_back(*v);
    } catch (const std::exception& e) {
      out.messages.push_back(std::string("exception: ") + e.what());
    }
  });
  CaseTableReport report;
  report.trials = trials;
  report.seed = seed;
  for (std::size_t i = 0; i < trials; ++i) {
    const auto& out = outcomes[i];
    if (!out.check_label.empty()) ++report.check_labels[out.check_label];
    if (!out.hat_label.empty()) ++report.hat_labels[out.hat_label];
    for (const auto& m : out.messages) {
      report.violations.push_back({i, case_table_parameters(seed, i), m});
    }
  }
  return report;
}

}  // namespace flatmink
