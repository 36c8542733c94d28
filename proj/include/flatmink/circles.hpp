#pragma once

// Circles of M(f1,f2;f3,f4): the negative half is built from (f1,f2), the
// positive half is its mirror image under (x,y) -> (-x,y) built from (f3,f4).

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "flatmink/functions.hpp"
#include "flatmink/torus.hpp"

namespace flatmink {

/// The two generators of one half: `convex` shapes the branch right of the
/// branch point, `concave` the branch left of it.
struct GeneratorPair {
  ShFunction convex;
  ShFunction concave;
};

using GeneratorRef = std::shared_ptr<const GeneratorPair>;

/// Same pair with roles exchanged; describes a half after the rotation (x,y) -> (-x,-y).
GeneratorRef swapped(const GeneratorRef& g);

/// x > -b: a*F(x+b)+c; x < -b: -a*G(-x-b)+c; plus (-b,inf) and (inf,c).
struct NegCurve {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  GeneratorRef gen;
};

/// y = s*x + t with s < 0, plus (inf,inf).
struct NegLine {
  double s = -1.0;
  double t = 0.0;
};

/// Mirror of NegCurve(a,b,c) over (f3,f4): y = NegCurve(a,b,c)(-x).
/// Infinite points (b,inf) and (inf,c).
struct PosCurve {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  GeneratorRef gen;
};

/// y = s*x + t with s > 0, plus (inf,inf).
struct PosLine {
  double s = 1.0;
  double t = 0.0;
};

using Circle = std::variant<NegCurve, NegLine, PosCurve, PosLine>;

class PlaneSpec {
 public:
  PlaneSpec(ShFunction f1, ShFunction f2, ShFunction f3, ShFunction f4);

  /// The plane with every generator equal to 1/x.
  static PlaneSpec classical();

  const ShFunction& f1() const noexcept { return neg_->convex; }
  const ShFunction& f2() const noexcept { return neg_->concave; }
  const ShFunction& f3() const noexcept { return pos_->convex; }
  const ShFunction& f4() const noexcept { return pos_->concave; }

  const GeneratorRef& negative() const noexcept { return neg_; }
  const GeneratorRef& positive() const noexcept { return pos_; }
  /// -1 -> negative(), +1 -> positive().
  const GeneratorRef& half(int h) const;

  /// f1(1) = f3(1) = 1 within 1e-12.
  bool normalised() const;

  NegCurve neg_curve(double a, double b, double c) const;
  PosCurve pos_curve(double a, double b, double c) const;

 private:
  GeneratorRef neg_;
  GeneratorRef pos_;
};

/// -1 for the negative half, +1 for the positive half.
int half_of(const Circle& c) noexcept;
bool is_line(const Circle& c) noexcept;

/// (a,b,c) for curves, (s,t) for lines.
std::vector<double> parameters(const Circle& c);

/// Largest of |p - q| / max(1, |p|, |q|) over the parameters; infinity when
/// the circles differ in half or family.
double parameter_distance(const Circle& c, const Circle& d);

/// Same variant alternative and bitwise-equal parameters.
bool same_parameters(const Circle& c, const Circle& d);

/// Checks a > 0 and the slope sign; throws InvalidParams.
void validate(const Circle& c);

ExtendedReal eval_circle(const Circle& c, const ExtendedReal& x);

/// Value on a branch at finite x; +inf at the branch point of a curve.
double eval_finite(const Circle& c, double x);

/// Finite x where the circle passes through infinity (the branch point), if any.
std::optional<double> branch_point(const Circle& c);

bool contains(const Circle& c, const TorusPoint& p, double tol = 1e-9);

/// Membership residual: the smaller of |eval(x) - y| / (1 + |y|) and the
/// same gap measured along x through the inverse branch; 0 or +inf for
/// infinite points.
double residual(const Circle& c, const TorusPoint& p);

/// Throws BranchPoint at the branch point of a curve.
double tangent_slope(const Circle& c, double x);

/// Image under (x,y) -> (x + beta, alpha*y + gamma), alpha > 0.
Circle apply_phi_infinity(const Circle& c, double alpha, double beta, double gamma);

/// Image under (x,y) -> (-x, y); exchanges the halves and keeps the generator
/// reference, so the point set is mirrored exactly. Involution.
Circle mirror(const Circle& c);

/// Image under (x,y) -> (-x,-y). Stays in its half; curves switch to the
/// swapped() generators.
Circle rotate_half_turn(const Circle& c);

std::string to_string(const Circle& c);

}  // namespace flatmink
