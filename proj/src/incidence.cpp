#include "flatmink/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "flatmink/error.hpp"
#include "flatmink/numeric.hpp"
#include "flatmink/rootcraft.hpp"

namespace flatmink {

using numeric::bisect;
using numeric::probe_toward_finite_end;
using numeric::probe_toward_infinity;
using numeric::sign_of;

namespace {

constexpr double kInfValue = std::numeric_limits<double>::infinity();

// Generators of the negative half being solved over; the half-turn swaps them.
struct Gen {
  const ShFunction& F;  // convex branch
  const ShFunction& G;  // concave branch
};

Gen swap(const Gen& g) { return {g.G, g.F}; }

// Circle parameters before they are attached to a half and a generator pair.
struct Raw {
  bool line = false;
  double a = 0, b = 0, c = 0;
  double s = 0, t = 0;
};

Raw make_line(double s, double t) {
  Raw r;
  r.line = true;
  r.s = s;
  r.t = t;
  return r;
}

Raw make_curve(double a, double b, double c) {
  Raw r;
  r.a = a;
  r.b = b;
  r.c = c;
  return r;
}

// Image under (x,y) -> (-x,-y), expressed over the swapped generators.
Raw half_turn(Raw r) {
  if (r.line) {
    r.t = -r.t;
  } else {
    r.b = -r.b;
    r.c = -r.c;
  }
  return r;
}

// Image under (x,y) -> (x+dx, y+dy).
Raw translate(Raw r, double dx, double dy) {
  if (r.line) {
    r.t += dy - r.s * dx;
  } else {
    r.b -= dx;
    r.c += dy;
  }
  return r;
}

struct P {
  double x, y;
};

P neg(P p) { return {-p.x, -p.y}; }

Circle to_circle(const Raw& r, const GeneratorRef& gen, int half) {
  const bool ok = r.line ? (std::isfinite(r.s) && std::isfinite(r.t) && r.s < 0)
                         : (std::isfinite(r.a) && std::isfinite(r.b) && std::isfinite(r.c) && r.a > 0);
  if (!ok) throw Error(ErrorKind::NoConvergence, "solver produced invalid circle parameters");
  Circle c = r.line ? Circle{NegLine{r.s, r.t}} : Circle{NegCurve{r.a, r.b, r.c, gen}};
  return half < 0 ? c : mirror(c);
}

TorusPoint mirror_point(const TorusPoint& p) {
  return {p.x.is_finite() ? ExtendedReal(-p.x.value()) : kInf, p.y};
}

[[noreturn]] void no_bracket(const char* what) {
  throw Error(ErrorKind::NoConvergence, std::string("no sign change found for ") + what);
}

// Root of fn on (0, inf) given its sign near 0 and the opposite sign far out.
template <class Fn>
double solve_half_line(Fn&& fn, int sign_near_zero, const char* what) {
  const auto lo = probe_toward_finite_end(fn, 0.0, +1, 1.0, sign_near_zero);
  const auto hi = probe_toward_infinity(fn, 0.0, +1, 1.0, -sign_near_zero);
  if (!lo || !hi) no_bracket(what);
  return bisect(fn, *lo, *hi, sign_near_zero);
}

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kMinNormal = std::numeric_limits<double>::min();

struct Split {
  double v, w;  // v + w = width
};

// Root of fn(v, w) over v in (0, width), w = width - v. The half of the bracket
// holding the root is searched in its own short variable so that a root
// pinned against either end keeps full relative precision.
template <class Fn>
Split bisect_split(Fn&& fn, double width, int sign_near_zero) {
  const double h = 0.5 * width;
  const int s = sign_of(fn(h, width - h));
  if (s == 0) return {h, width - h};
  if (s != sign_near_zero) {
    const double v = bisect([&](double x) { return fn(x, width - x); }, 0.0, h, sign_near_zero);
    return {v, width - v};
  }
  const double w = bisect([&](double x) { return fn(width - x, x); }, 0.0, width - h, -sign_near_zero);
  return {width - w, w};
}

// ---------------------------------------------------------------- joining

Raw join_type1(P p, P q) {
  if (p.x > q.x) std::swap(p, q);
  const double s = (q.y - p.y) / (q.x - p.x);
  return make_line(s, p.y - s * p.x);
}

Raw join_type2(const Gen& g, P p1, double y2, double x3, CaseTrace& tr) {
  const double u = p1.x - x3;
  if (u > 0) {
    tr.case_index = 1;
    return make_curve((p1.y - y2) / g.F(u), -x3, y2);
  }
  tr.case_index = 2;
  return make_curve((y2 - p1.y) / g.G(-u), -x3, y2);
}

Raw join_type3(const Gen& g, P p1, P p2, double x3, CaseTrace& tr) {
  if (p1.x < p2.x) std::swap(p1, p2);
  const double u1 = p1.x - x3, u2 = p2.x - x3;
  auto phi = [&g](double u) { return u > 0 ? g.F(u) : -g.G(-u); };
  tr.case_index = u2 > 0 ? 1 : (u1 > 0 ? 2 : 3);
  const double f1 = phi(u1), f2 = phi(u2);
  const double a = (p1.y - p2.y) / (f1 - f2);
  return make_curve(a, -x3, p2.y - a * f2);
}

// Points relative to the horizontal of p3, i.e. p3 = (inf, 0).
Raw join_type4(const Gen& g, P p1, P p2, CaseTrace& tr, bool rotated) {
  if (p1.y < p2.y) std::swap(p1, p2);
  if (p2.y > 0) {
    // Both on the convex branch: F(x1+b)/F(x2+b) = y1/y2 with x1 < x2.
    if (!rotated) tr.case_index = 1;
    const double gap = p2.x - p1.x;
    const double target = std::log(p1.y / p2.y);
    auto fn = [&](double v) { return std::log(g.F(v)) - std::log(g.F(v + gap)) - target; };
    const double v = solve_half_line(fn, +1, "type 4 convex pair");
    return make_curve(p1.y / g.F(v), v - p1.x, 0.0);
  }
  if (p1.y < 0) {
    tr.case_index = 3;
    return half_turn(join_type4(swap(g), neg(p1), neg(p2), tr, true));
  }
  // p1 on the convex branch, p2 on the concave one, branch point between.
  tr.case_index = 2;
  const double width = p1.x - p2.x;
  const double target = std::log(p1.y / -p2.y);
  auto fn = [&](double v, double w) { return std::log(g.F(v)) - std::log(g.G(w)) - target; };
  const Split r = bisect_split(fn, width, +1);
  const double b = r.w < r.v ? -(p2.x + r.w) : r.v - p1.x;
  return make_curve(p1.y / g.F(r.v), b, 0.0);
}

Raw join_type5(const Gen& g, std::array<P, 3> p, CaseTrace& tr, std::vector<std::string>& warnings,
               bool rotated) {
  std::sort(p.begin(), p.end(), [](const P& l, const P& r) { return l.x < r.x; });
  const double X1 = p[1].x - p[0].x, Y1 = p[1].y - p[0].y;
  const double X2 = p[2].x - p[0].x, Y2 = p[2].y - p[0].y;
  auto line_through = [&]() {
    const double s = Y2 / X2;
    return make_line(s, p[0].y - s * p[0].x);
  };
  if (Y1 < 0 && Y2 < Y1) {
    const double cross = X1 * Y2 - Y1 * X2;
    // Rounding bound of cross from the input coordinates.
    const double err = 64 * kEps *
                       (std::abs(X1) * (std::abs(p[2].y) + std::abs(p[0].y)) +
                        std::abs(X2) * (std::abs(p[1].y) + std::abs(p[0].y)) +
                        std::abs(Y2) * (std::abs(p[1].x) + std::abs(p[0].x)) +
                        std::abs(Y1) * (std::abs(p[2].x) + std::abs(p[0].x)));
    if (std::abs(cross) <= err) {
      tr.case_index = 0;
      tr.note = "collinear";
      return line_through();
    }
    if (cross < 0) {
      tr.case_index = 4;
      std::array<P, 3> q{neg(p[0]), neg(p[1]), neg(p[2])};
      return half_turn(join_type5(swap(g), q, tr, warnings, true));
    }
    // Convex branch through all three: g(b) = y2/y1 with g(0+) = 1, g(inf) = x2/x1.
    if (!rotated) tr.case_index = 1;
    const double target = Y2 / Y1;
    // Branch point closer to p0 than any double: only phi = F(b) matters.
    const double phi = (g.F(X2) - target * g.F(X1)) / (1.0 - target);
    if (std::isfinite(phi) && phi >= g.F(kMinNormal)) {
      tr.note = "branch point pinned to an input point";
      const double a = Y1 / (g.F(X1) - phi);
      return translate(make_curve(a, 0.0, -a * phi), p[0].x, p[0].y);
    }
    auto fn = [&](double b) {
      const double fb = g.F(b);
      return (g.F(X2 + b) - fb) / (g.F(X1 + b) - fb) - target;
    };
    const auto lo = probe_toward_finite_end(fn, 0.0, +1, 1.0, -1);
    const auto hi = probe_toward_infinity(fn, 0.0, +1, 1.0, +1);
    if (!lo || !hi) {
      warnings.push_back("ConditioningWarning: nearly collinear triple, line through the outer points");
      tr.note = "line fallback";
      return line_through();
    }
    const double b = bisect(fn, *lo, *hi, -1);
    const double a = Y1 / (g.F(X1 + b) - g.F(b));
    return translate(make_curve(a, b, -a * g.F(b)), p[0].x, p[0].y);
  }
  if (Y1 > Y2 && Y2 > 0) {
    // p0 on the concave branch, p1 and p2 on the convex one; v = x1 + b in (0, x1).
    if (!rotated) tr.case_index = 2;
    const double target = Y2 / Y1;
    const double gap = X2 - X1;
    // Branch point within the smallest double of p0 or of p1: solve for the
    // generator value at the pinned end instead.
    const double gl_pinned = (target * g.F(X1) - g.F(X2)) / (1.0 - target);
    if (std::isfinite(gl_pinned) && gl_pinned >= g.G(kMinNormal)) {
      tr.note = "branch point pinned to an input point";
      const double a = Y1 / (g.F(X1) + gl_pinned);
      return translate(make_curve(a, 0.0, a * gl_pinned), p[0].x, p[0].y);
    }
    const double gw = g.G(X1);
    const double fv_pinned = (g.F(gap) + gw) / target - gw;
    if (std::isfinite(fv_pinned) && fv_pinned >= g.F(kMinNormal)) {
      tr.note = "branch point pinned to an input point";
      const double a = Y1 / (fv_pinned + gw);
      return translate(make_curve(a, -X1, a * gw), p[0].x, p[0].y);
    }
    auto fn = [&](double v, double w) {
      const double gl = g.G(w);
      return (g.F(gap + v) + gl) / (g.F(v) + gl) - target;
    };
    const Split r = bisect_split(fn, X1, -1);
    const double gl = g.G(r.w);
    const double a = Y1 / (g.F(r.v) + gl);
    return translate(make_curve(a, -r.w, a * gl), p[0].x, p[0].y);
  }
  if (Y2 > 0 && Y1 < 0) {
    tr.case_index = 3;
    std::array<P, 3> q{neg(p[0]), neg(p[1]), neg(p[2])};
    return half_turn(join_type5(swap(g), q, tr, warnings, true));
  }
  throw Error(ErrorKind::NotAdmissibleForEitherHalf, "finite triple is not orientation reversing");
}

// ---------------------------------------------------------------- intersecting

struct ConvexRoots {
  std::vector<double> v;
  bool tangent = false;
  bool unresolved = false;
};

// Zeros on (0, end) of a strictly convex e with e -> +inf at both ends
// (end may be +inf). de is its derivative, scale(v) the rounding scale of e.
template <class E, class D, class S>
ConvexRoots convex_roots(E&& e, D&& de, S&& scale, double end) {
  ConvexRoots out;
  double vm;
  if (std::isfinite(end)) {
    vm = bisect(de, 0.0, end, -1);
  } else {
    const auto lo = probe_toward_finite_end(de, 0.0, +1, 1.0, -1);
    const auto hi = probe_toward_infinity(de, 0.0, +1, 1.0, +1);
    if (!lo || !hi) {
      out.unresolved = true;
      return out;
    }
    vm = bisect(de, *lo, *hi, -1);
  }
  const double em = e(vm);
  if (std::abs(em) <= kTangencyBand * scale(vm)) {
    out.v.push_back(vm);
    out.tangent = true;
    return out;
  }
  if (em > 0) return out;
  out.v.push_back(bisect(e, 0.0, vm, +1));
  if (std::isfinite(end)) {
    out.v.push_back(bisect(e, vm, end, -1));
  } else if (const auto hi = probe_toward_infinity(e, vm, +1, 1.0, +1)) {
    out.v.push_back(bisect(e, vm, *hi, -1));
  } else {
    out.unresolved = true;
  }
  return out;
}

// e(u) = a H(u) - s u + k on u > 0 with s < 0.
ConvexRoots convex_line_roots(const ShFunction& H, double a, double s, double k) {
  auto e = [&](double u) { return a * H(u) - s * u + k; };
  auto de = [&](double u) { return a * H.derivative(u) - s; };
  auto scale = [&](double u) { return a * H(u) + std::abs(s * u) + std::abs(k); };
  return convex_roots(e, de, scale, kInfValue);
}

struct Finite {
  std::vector<double> xs;
  bool unresolved = false;
};

void curve_line(const NegCurve& k, const NegLine& l, Finite& out) {
  const Gen g{k.gen->convex, k.gen->concave};
  // Convex branch, u = x + b: a F(u) + c - s(u - b) - t.
  const double kc = k.c + l.s * k.b - l.t;
  const ConvexRoots r1 = convex_line_roots(g.F, k.a, l.s, kc);
  for (double u : r1.v) out.xs.push_back(u - k.b);
  // Concave branch, w = -x - b, negated: a G(w) - s w + (t - c - s b).
  const ConvexRoots r2 = convex_line_roots(g.G, k.a, l.s, -kc);
  for (double w : r2.v) out.xs.push_back(-w - k.b);
  out.unresolved = out.unresolved || r1.unresolved || r2.unresolved;
}

void curve_curve(const NegCurve& k1, const NegCurve& k2, Finite& out) {
  const GeneratorRef& gen = k1.gen;
  for (DiffKind kind : {DiffKind::Check, DiffKind::Hat}) {
    const DiffFunction d(kind, k1.a, k1.b, k1.c, k2.a, k2.b, k2.c, gen);
    const RootReport r = analyze_roots(d);
    for (const auto& root : r.roots) out.xs.push_back(root.location);
    out.unresolved = out.unresolved || r.unresolved;
  }
  if (k1.b == k2.b) return;
  // Between the branch points one curve is on its convex branch, the other on
  // its concave branch: m(v) = ai F(v) + aj G(W - v) + ci - cj, v = x - L.
  const NegCurve& ki = k1.b > k2.b ? k1 : k2;  // branch point L = -bi
  const NegCurve& kj = k1.b > k2.b ? k2 : k1;
  const double L = -ki.b, W = ki.b - kj.b;
  const Gen g{gen->convex, gen->concave};
  const double dc = ki.c - kj.c;
  auto m = [&](double v) { return ki.a * g.F(v) + kj.a * g.G(W - v) + dc; };
  auto dm = [&](double v) { return ki.a * g.F.derivative(v) - kj.a * g.G.derivative(W - v); };
  auto scale = [&](double v) { return ki.a * g.F(v) + kj.a * g.G(W - v) + std::abs(ki.c) + std::abs(kj.c); };
  const ConvexRoots r = convex_roots(m, dm, scale, W);
  for (double v : r.v) out.xs.push_back(L + v);
  out.unresolved = out.unresolved || r.unresolved;
}

Finite negative_finite(const Circle& c, const Circle& d) {
  Finite out;
  const auto* l1 = std::get_if<NegLine>(&c);
  const auto* l2 = std::get_if<NegLine>(&d);
  const auto* k1 = std::get_if<NegCurve>(&c);
  const auto* k2 = std::get_if<NegCurve>(&d);
  if (l1 && l2) {
    if (l1->s != l2->s) out.xs.push_back((l2->t - l1->t) / (l1->s - l2->s));
  } else if (k1 && l2) {
    curve_line(*k1, *l2, out);
  } else if (l1 && k2) {
    curve_line(*k2, *l1, out);
  } else {
    curve_curve(*k1, *k2, out);
  }
  return out;
}

// Circles of opposite halves: on every interval between branch points the
// difference (negative minus positive) is strictly decreasing.
Finite cross_half_finite(const Circle& neg_c, const Circle& pos_c) {
  Finite out;
  std::vector<double> cuts;
  if (auto bp = branch_point(neg_c)) cuts.push_back(*bp);
  if (auto bp = branch_point(pos_c)) cuts.push_back(*bp);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto e = [&](double x) { return eval_finite(neg_c, x) - eval_finite(pos_c, x); };
  std::vector<double> ends{-kInfValue};
  ends.insert(ends.end(), cuts.begin(), cuts.end());
  ends.push_back(kInfValue);
  for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
    const double lo = ends[i], hi = ends[i + 1];
    std::optional<double> left, right;
    if (std::isfinite(lo) && std::isfinite(hi)) {
      const double half_width = 0.5 * (hi - lo);
      left = probe_toward_finite_end(e, lo, +1, half_width, +1);
      right = probe_toward_finite_end(e, hi, -1, half_width, -1);
    } else if (std::isfinite(lo)) {
      left = probe_toward_finite_end(e, lo, +1, 1.0, +1);
      right = probe_toward_infinity(e, lo, +1, 1.0, -1);
    } else if (std::isfinite(hi)) {
      left = probe_toward_infinity(e, hi, -1, 1.0, +1);
      right = probe_toward_finite_end(e, hi, -1, 1.0, -1);
    } else {
      left = probe_toward_infinity(e, 0.0, -1, 1.0, +1);
      right = probe_toward_infinity(e, 0.0, +1, 1.0, -1);
    }
    // Next to a cut the difference tends to +inf on the right and -inf on the
    // left, so a failed probe there means the crossing is within one ulp.
    if (!left && std::isfinite(lo)) {
      out.xs.push_back(std::nextafter(lo, kInfValue));
    } else if (!right && std::isfinite(hi)) {
      out.xs.push_back(std::nextafter(hi, -kInfValue));
    } else if (left && right && *left < *right) {
      out.xs.push_back(bisect(e, *left, *right, +1));
    }
  }
  return out;
}

bool same_circle(const Circle& c, const Circle& d) {
  return c.index() == d.index() && parameters(c) == parameters(d);
}

// ---------------------------------------------------------------- touching

// Circle through the origin with slope s there and through q (translated).
Raw constructive_touch(const Gen& g, double s, const TorusPoint& q, CaseTrace& tr, bool rotated) {
  auto set_case = [&](int k) {
    if (!rotated) tr.case_index = k;
  };
  if (q.x.is_infinite() && q.y.is_infinite()) {
    set_case(0);
    tr.note = "q = (inf,inf): tangent line";
    return make_line(s, 0.0);
  }
  if (q.y.is_infinite()) {
    set_case(1);
    const double xq = q.x.value();
    if (xq < 0) {
      const double b = -xq;
      const double a = s / g.F.derivative(b);
      return make_curve(a, b, -a * g.F(b));
    }
    const double a = s / g.G.derivative(xq);
    return make_curve(a, -xq, a * g.G(xq));
  }
  if (q.x.is_infinite()) {
    set_case(2);
    const double yq = q.y.value();
    if (yq < 0) {
      const double target = s / yq;
      auto fn = [&](double b) { return g.F.derivative(b) / g.F(b) + target; };
      const double b = solve_half_line(fn, -1, "touch with q = (inf, y)");
      return make_curve(-yq / g.F(b), b, yq);
    }
    const double target = s / yq;
    auto fn = [&](double w) { return g.G.derivative(w) / g.G(w) - target; };
    const double w = solve_half_line(fn, -1, "touch with q = (inf, y)");
    return make_curve(yq / g.G(w), -w, yq);
  }
  const double xq = q.x.value(), yq = q.y.value();
  const double on_line = s * xq;
  if (std::abs(yq - on_line) <= 1e-12 * (std::abs(yq) + std::abs(on_line))) {
    set_case(0);
    tr.note = "q on the tangent line";
    return make_line(s, 0.0);
  }
  const bool convex_pair = (xq > 0 && on_line < yq && yq < 0) || (xq < 0 && yq > on_line);
  if (convex_pair) {
    // Both on the convex branch: (F(xq+b) - F(b)) / F'(b) = yq / s.
    set_case(3);
    const double target = yq / s;
    const double shift = std::max(-xq, 0.0);
    auto fn = [&](double u) {
      const double b = u + shift;
      return (g.F(xq + b) - g.F(b)) / g.F.derivative(b) - target;
    };
    const double u = solve_half_line(fn, -1, "touch, convex pair");
    const double b = u + shift;
    const double a = s / g.F.derivative(b);
    return make_curve(a, b, -a * g.F(b));
  }
  if (xq < 0 && yq < 0) {
    // p convex, q concave, branch point in (xq, 0).
    set_case(4);
    const double width = -xq;
    const double target = -yq / s;
    auto fn = [&](double b, double w) { return (g.G(w) + g.F(b)) / g.F.derivative(b) - target; };
    const double b = bisect_split(fn, width, +1).v;
    const double a = s / g.F.derivative(b);
    return make_curve(a, b, -a * g.F(b));
  }
  // Concave pair (case 5) and p concave with q convex (case 6) become cases 3
  // and 4 after the half-turn.
  set_case(xq > 0 && yq > 0 ? 6 : 5);
  const TorusPoint qr{ExtendedReal(-xq), ExtendedReal(-yq)};
  return half_turn(constructive_touch(swap(g), s, qr, tr, true));
}

}  // namespace

// ---------------------------------------------------------------- public API

TorusPoint apply_phi_infinity(const TorusPoint& p, double alpha, double beta, double gamma) {
  if (!(alpha > 0)) throw Error(ErrorKind::BadParam, "group element needs alpha > 0");
  return {p.x.is_finite() ? ExtendedReal(p.x.value() + beta) : kInf,
          p.y.is_finite() ? ExtendedReal(alpha * p.y.value() + gamma) : kInf};
}

std::vector<TorusPoint> infinite_points(const Circle& c) {
  if (is_line(c)) return {TorusPoint{kInf, kInf}};
  const auto bp = branch_point(c);
  const double cc = parameters(c)[2];
  return {TorusPoint{ExtendedReal(*bp), kInf}, TorusPoint{kInf, ExtendedReal(cc)}};
}

JoinSolution join(const PlaneSpec& plane, const TorusPoint& p1, const TorusPoint& p2,
                  const TorusPoint& p3) {
  const std::array<TorusPoint, 3> in{p1, p2, p3};
  const int half = joining_half(p1, p2, p3);
  const auto type = classify_admissible(p1, p2, p3, half);
  if (!type) throw Error(ErrorKind::NotAdmissibleForEitherHalf, "triple admits no half");
  std::array<TorusPoint, 3> q;
  for (int i = 0; i < 3; ++i) {
    q[i] = in[type->roles[i]];
    if (half > 0) q[i] = mirror_point(q[i]);
  }
  const GeneratorRef& gen = plane.half(half);
  const Gen g{gen->convex, gen->concave};
  JoinSolution sol{NegLine{}, {}, {}, {}};
  sol.trace.half = half;
  sol.trace.type = type->kind;
  auto fin = [](const TorusPoint& p) { return P{p.x.value(), p.y.value()}; };
  Raw r;
  switch (type->kind) {
    case AdmissibleKind::Type1:
      sol.trace.case_index = 1;
      r = join_type1(fin(q[1]), fin(q[2]));
      break;
    case AdmissibleKind::Type2:
      r = join_type2(g, fin(q[0]), q[1].y.value(), q[2].x.value(), sol.trace);
      break;
    case AdmissibleKind::Type3:
      r = join_type3(g, fin(q[0]), fin(q[1]), q[2].x.value(), sol.trace);
      break;
    case AdmissibleKind::Type4: {
      const double y3 = q[2].y.value();
      const P a{q[0].x.value(), q[0].y.value() - y3}, b{q[1].x.value(), q[1].y.value() - y3};
      r = translate(join_type4(g, a, b, sol.trace, false), 0.0, y3);
      break;
    }
    case AdmissibleKind::Type5:
      r = join_type5(g, {fin(q[0]), fin(q[1]), fin(q[2])}, sol.trace, sol.warnings, false);
      break;
  }
  sol.circle = to_circle(r, gen, half);
  for (int i = 0; i < 3; ++i) {
    sol.residuals[i] = residual(sol.circle, in[i]);
    if (!(sol.residuals[i] <= kJoinResidualTolerance)) {
      sol.warnings.push_back("ConditioningWarning: residual " + std::to_string(sol.residuals[i]) +
                             " at " + in[i].to_string());
    }
  }
  return sol;
}

IntersectionSet intersect(const Circle& c, const Circle& d) {
  validate(c);
  validate(d);
  if (same_circle(c, d)) throw Error(ErrorKind::IdenticalCircles, "intersect needs distinct circles");
  IntersectionSet out;
  const int hc = half_of(c), hd = half_of(d);
  Finite fin;
  if (hc != hd) {
    fin = hc < 0 ? cross_half_finite(c, d) : cross_half_finite(d, c);
  } else if (hc < 0) {
    fin = negative_finite(c, d);
  } else {
    fin = negative_finite(mirror(c), mirror(d));
    for (double& x : fin.xs) x = -x;
  }
  std::sort(fin.xs.begin(), fin.xs.end());
  // y from the circle whose branch point is farther away, where it is flatter.
  auto gap = [](const Circle& k, double x) {
    const auto bp = branch_point(k);
    return bp ? std::abs(x - *bp) : kInfValue;
  };
  for (double x : fin.xs) {
    const Circle& flat = gap(c, x) >= gap(d, x) ? c : d;
    double y = eval_finite(flat, x);
    if (!std::isfinite(y)) {
      // A crossing closer to a common branch point than one ulp: both curves
      // sit at the same offset there, so a1 F + c1 = a2 F + c2 fixes y.
      const auto pc = parameters(c), pd = parameters(d);
      if (pc.size() == 3 && pd.size() == 3 && pc[1] == pd[1] && pc[0] != pd[0]) {
        y = (pc[0] * pd[2] - pd[0] * pc[2]) / (pc[0] - pd[0]);
      }
    }
    if (!std::isfinite(y)) {
      throw Error(ErrorKind::NoConvergence, "intersection at x = " + std::to_string(x) + " has no finite value");
    }
    out.points.push_back({ExtendedReal(x), ExtendedReal(y)});
  }
  const auto inf_d = infinite_points(d);
  for (const auto& p : infinite_points(c)) {
    if (std::find(inf_d.begin(), inf_d.end(), p) != inf_d.end()) out.points.push_back(p);
  }
  out.unresolved = fin.unresolved;
  out.tangential = hc == hd && out.points.size() == 1;
  return out;
}

TouchSolution touch_solution(const PlaneSpec& plane, const Circle& c, const TorusPoint& p,
                             const TorusPoint& q) {
  validate(c);
  if (!contains(c, p)) throw Error(ErrorKind::PointNotOnCircle, "p is not on the circle");
  if (parallel(p, q)) throw Error(ErrorKind::ParallelPoints, "p and q are parallel");
  if (contains(c, q)) throw Error(ErrorKind::PointOnCircle, "q lies on the circle");
  const int half = half_of(c);
  const Circle cn = half < 0 ? c : mirror(c);
  const TorusPoint pn = half < 0 ? p : mirror_point(p);
  const TorusPoint qn = half < 0 ? q : mirror_point(q);
  const GeneratorRef& gen = plane.half(half);
  const Gen g{gen->convex, gen->concave};
  TouchSolution sol{NegLine{}, {}};
  sol.trace.half = half;
  Raw r;
  if (pn.x.is_infinite() && pn.y.is_infinite()) {
    // Parallel line through q.
    const double s = std::get<NegLine>(cn).s;
    sol.trace.note = "p = (inf,inf)";
    sol.trace.case_index = 1;
    r = make_line(s, qn.y.value() - s * qn.x.value());
  } else if (pn.y.is_infinite()) {
    const auto& k = std::get<NegCurve>(cn);
    sol.trace.note = "p = (-b,inf)";
    double c1;
    if (qn.x.is_infinite()) {
      sol.trace.case_index = 1;
      c1 = qn.y.value();
    } else if (qn.x.value() > -k.b) {
      sol.trace.case_index = 2;
      c1 = qn.y.value() - k.a * g.F(qn.x.value() + k.b);
    } else {
      sol.trace.case_index = 3;
      c1 = qn.y.value() + k.a * g.G(-qn.x.value() - k.b);
    }
    r = make_curve(k.a, k.b, c1);
  } else if (pn.x.is_infinite()) {
    const auto& k = std::get<NegCurve>(cn);
    sol.trace.note = "p = (inf,c)";
    double b1;
    if (qn.y.is_infinite()) {
      sol.trace.case_index = 1;
      b1 = -qn.x.value();
    } else if (qn.y.value() > k.c) {
      sol.trace.case_index = 2;
      b1 = invert(g.F, (qn.y.value() - k.c) / k.a) - qn.x.value();
    } else {
      sol.trace.case_index = 3;
      b1 = -qn.x.value() - invert(g.G, (k.c - qn.y.value()) / k.a);
    }
    r = make_curve(k.a, b1, k.c);
  } else {
    const double xp = pn.x.value(), yp = pn.y.value();
    const double s = tangent_slope(cn, xp);
    const TorusPoint rel{qn.x.is_finite() ? ExtendedReal(qn.x.value() - xp) : kInf,
                         qn.y.is_finite() ? ExtendedReal(qn.y.value() - yp) : kInf};
    sol.trace.note = "p finite";
    r = translate(constructive_touch(g, s, rel, sol.trace, false), xp, yp);
    // An infinite q fixes b or c exactly; undo the rounding of the round trip.
    if (!r.line && qn.y.is_infinite() && qn.x.is_finite()) r.b = -qn.x.value();
    if (!r.line && qn.x.is_infinite() && qn.y.is_finite()) r.c = qn.y.value();
  }
  sol.circle = to_circle(r, gen, half);
  return sol;
}

Circle touch(const PlaneSpec& plane, const Circle& c, const TorusPoint& p, const TorusPoint& q) {
  return touch_solution(plane, c, p, q).circle;
}

}  // namespace flatmink
