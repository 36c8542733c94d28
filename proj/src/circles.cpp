#include "flatmink/circles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "flatmink/error.hpp"

namespace flatmink {

namespace {

constexpr double kInfValue = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double neg_curve_value(double a, double b, double c, const GeneratorPair& g, double x) {
  const double u = x + b;
  if (u > 0) return a * g.convex(u) + c;
  if (u < 0) return -a * g.concave(-u) + c;
  return kInfValue;
}

double neg_curve_slope(double a, double b, const GeneratorPair& g, double x) {
  const double u = x + b;
  if (u > 0) return a * g.convex.derivative(u);
  if (u < 0) return a * g.concave.derivative(-u);
  throw Error(ErrorKind::BranchPoint, "tangent slope requested at the branch point x = " +
                                          std::to_string(x));
}

double rel_gap(double p, double q) {
  return std::abs(p - q) / std::max({1.0, std::abs(p), std::abs(q)});
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

GeneratorRef swapped(const GeneratorRef& g) {
  return std::make_shared<const GeneratorPair>(GeneratorPair{g->concave, g->convex});
}

PlaneSpec::PlaneSpec(ShFunction f1, ShFunction f2, ShFunction f3, ShFunction f4)
    : neg_(std::make_shared<const GeneratorPair>(GeneratorPair{std::move(f1), std::move(f2)})),
      pos_(std::make_shared<const GeneratorPair>(GeneratorPair{std::move(f3), std::move(f4)})) {}

PlaneSpec PlaneSpec::classical() {
  const ShFunction r = catalog("reciprocal_power", {{"i", 1.0}});
  return PlaneSpec(r, r, r, r);
}

const GeneratorRef& PlaneSpec::half(int h) const {
  if (h == -1) return neg_;
  if (h == +1) return pos_;
  throw Error(ErrorKind::BadParam, "half must be -1 or +1");
}

bool PlaneSpec::normalised() const {
  return std::abs(f1()(1.0) - 1.0) <= 1e-12 && std::abs(f3()(1.0) - 1.0) <= 1e-12;
}

NegCurve PlaneSpec::neg_curve(double a, double b, double c) const { return NegCurve{a, b, c, neg_}; }

PosCurve PlaneSpec::pos_curve(double a, double b, double c) const { return PosCurve{a, b, c, pos_}; }

int half_of(const Circle& c) noexcept {
  return (std::holds_alternative<NegCurve>(c) || std::holds_alternative<NegLine>(c)) ? -1 : +1;
}

bool is_line(const Circle& c) noexcept {
  return std::holds_alternative<NegLine>(c) || std::holds_alternative<PosLine>(c);
}

std::vector<double> parameters(const Circle& c) {
  return std::visit(Overloaded{
                        [](const NegCurve& k) { return std::vector<double>{k.a, k.b, k.c}; },
                        [](const PosCurve& k) { return std::vector<double>{k.a, k.b, k.c}; },
                        [](const NegLine& l) { return std::vector<double>{l.s, l.t}; },
                        [](const PosLine& l) { return std::vector<double>{l.s, l.t}; },
                    },
                    c);
}

double parameter_distance(const Circle& c, const Circle& d) {
  if (c.index() != d.index()) return kInfValue;
  const auto p = parameters(c);
  const auto q = parameters(d);
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, rel_gap(p[i], q[i]));
  return worst;
}

bool same_parameters(const Circle& c, const Circle& d) {
  return c.index() == d.index() && parameters(c) == parameters(d);
}

void validate(const Circle& c) {
  for (double v : parameters(c)) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidParams, "circle parameters must be finite");
  }
  std::visit(Overloaded{
                 [](const NegCurve& k) {
                   if (!(k.a > 0)) throw Error(ErrorKind::InvalidParams, "curve needs a > 0");
                   if (!k.gen) throw Error(ErrorKind::InvalidParams, "curve without generators");
                 },
                 [](const PosCurve& k) {
                   if (!(k.a > 0)) throw Error(ErrorKind::InvalidParams, "curve needs a > 0");
                   if (!k.gen) throw Error(ErrorKind::InvalidParams, "curve without generators");
                 },
                 [](const NegLine& l) {
                   if (!(l.s < 0)) throw Error(ErrorKind::InvalidParams, "negative line needs s < 0");
                 },
                 [](const PosLine& l) {
                   if (!(l.s > 0)) throw Error(ErrorKind::InvalidParams, "positive line needs s > 0");
                 },
             },
             c);
}

double eval_finite(const Circle& c, double x) {
  return std::visit(Overloaded{
                        [x](const NegCurve& k) { return neg_curve_value(k.a, k.b, k.c, *k.gen, x); },
                        [x](const PosCurve& k) { return neg_curve_value(k.a, k.b, k.c, *k.gen, -x); },
                        [x](const NegLine& l) { return l.s * x + l.t; },
                        [x](const PosLine& l) { return l.s * x + l.t; },
                    },
                    c);
}

ExtendedReal eval_circle(const Circle& c, const ExtendedReal& x) {
  if (x.is_infinite()) {
    return std::visit(Overloaded{
                          [](const NegCurve& k) { return ExtendedReal(k.c); },
                          [](const PosCurve& k) { return ExtendedReal(k.c); },
                          [](const NegLine&) { return kInf; },
                          [](const PosLine&) { return kInf; },
                      },
                      c);
  }
  const double y = eval_finite(c, x.value());
  if (std::isinf(y)) return kInf;
  return ExtendedReal(y);
}

std::optional<double> branch_point(const Circle& c) {
  return std::visit(Overloaded{
                        [](const NegCurve& k) -> std::optional<double> { return -k.b; },
                        [](const PosCurve& k) -> std::optional<double> { return k.b; },
                        [](const NegLine&) -> std::optional<double> { return std::nullopt; },
                        [](const PosLine&) -> std::optional<double> { return std::nullopt; },
                    },
                    c);
}

namespace {

// x with (x, y) on the negative-half curve, or infinity for y = c.
double neg_curve_preimage(double a, double b, double c, const GeneratorPair& g, double y) {
  const double r = (y - c) / a;
  if (r > 0 && std::isfinite(r)) return invert(g.convex, r) - b;
  if (r < 0 && std::isfinite(r)) return -b - invert(g.concave, -r);
  return kInfValue;
}

double relative_gap(double got, double want) {
  if (std::isinf(got)) return kInfValue;
  return std::abs(got - want) / (1.0 + std::abs(want));
}

}  // namespace

// Circles are graphs of homeomorphisms, so a point may be checked along
// either axis. Near a branch point the vertical error of a point one ulp off
// is unbounded while the horizontal one stays at rounding level.
double residual(const Circle& c, const TorusPoint& p) {
  const ExtendedReal y = eval_circle(c, p.x);
  if (p.y.is_infinite() || y.is_infinite()) {
    if (y == p.y) return 0.0;
    if (p.x.is_infinite() || p.y.is_infinite()) return kInfValue;
  } else {
    const double vertical = relative_gap(y.value(), p.y.value());
    if (vertical == 0.0 || p.x.is_infinite()) return vertical;
  }
  const double x = p.x.value(), v = p.y.value();
  const double pre = std::visit(
      Overloaded{
          [v](const NegCurve& k) { return neg_curve_preimage(k.a, k.b, k.c, *k.gen, v); },
          [v](const PosCurve& k) { return -neg_curve_preimage(k.a, k.b, k.c, *k.gen, v); },
          [v](const NegLine& l) { return (v - l.t) / l.s; },
          [v](const PosLine& l) { return (v - l.t) / l.s; },
      },
      c);
  const double horizontal = relative_gap(pre, x);
  if (y.is_infinite()) return horizontal;
  return std::min(relative_gap(y.value(), v), horizontal);
}

bool contains(const Circle& c, const TorusPoint& p, double tol) {
  if (!(tol > 0)) throw Error(ErrorKind::BadParam, "membership tolerance must be > 0");
  return residual(c, p) <= tol;
}

double tangent_slope(const Circle& c, double x) {
  return std::visit(Overloaded{
                        [x](const NegCurve& k) { return neg_curve_slope(k.a, k.b, *k.gen, x); },
                        [x](const PosCurve& k) { return -neg_curve_slope(k.a, k.b, *k.gen, -x); },
                        [](const NegLine& l) { return l.s; },
                        [](const PosLine& l) { return l.s; },
                    },
                    c);
}

Circle apply_phi_infinity(const Circle& c, double alpha, double beta, double gamma) {
  if (!(alpha > 0)) throw Error(ErrorKind::BadParam, "group element needs alpha > 0");
  return std::visit(
      Overloaded{
          [&](const NegCurve& k) -> Circle {
            return NegCurve{alpha * k.a, k.b - beta, alpha * k.c + gamma, k.gen};
          },
          [&](const PosCurve& k) -> Circle {
            return PosCurve{alpha * k.a, k.b + beta, alpha * k.c + gamma, k.gen};
          },
          [&](const NegLine& l) -> Circle {
            return NegLine{alpha * l.s, alpha * (l.t - l.s * beta) + gamma};
          },
          [&](const PosLine& l) -> Circle {
            return PosLine{alpha * l.s, alpha * (l.t - l.s * beta) + gamma};
          },
      },
      c);
}

Circle mirror(const Circle& c) {
  return std::visit(Overloaded{
                        [](const NegCurve& k) -> Circle { return PosCurve{k.a, k.b, k.c, k.gen}; },
                        [](const PosCurve& k) -> Circle { return NegCurve{k.a, k.b, k.c, k.gen}; },
                        [](const NegLine& l) -> Circle { return PosLine{-l.s, l.t}; },
                        [](const PosLine& l) -> Circle { return NegLine{-l.s, l.t}; },
                    },
                    c);
}

Circle rotate_half_turn(const Circle& c) {
  return std::visit(Overloaded{
                        [](const NegCurve& k) -> Circle {
                          return NegCurve{k.a, -k.b, -k.c, swapped(k.gen)};
                        },
                        [](const PosCurve& k) -> Circle {
                          return PosCurve{k.a, -k.b, -k.c, swapped(k.gen)};
                        },
                        [](const NegLine& l) -> Circle { return NegLine{l.s, -l.t}; },
                        [](const PosLine& l) -> Circle { return PosLine{l.s, -l.t}; },
                    },
                    c);
}

std::string to_string(const Circle& c) {
  return std::visit(
      Overloaded{
          [](const NegCurve& k) { return "NegCurve(" + fmt(k.a) + ", " + fmt(k.b) + ", " + fmt(k.c) + ")"; },
          [](const PosCurve& k) { return "PosCurve(" + fmt(k.a) + ", " + fmt(k.b) + ", " + fmt(k.c) + ")"; },
          [](const NegLine& l) { return "NegLine(" + fmt(l.s) + ", " + fmt(l.t) + ")"; },
          [](const PosLine& l) { return "PosLine(" + fmt(l.s) + ", " + fmt(l.t) + ")"; },
      },
      c);
}

}  // namespace flatmink
