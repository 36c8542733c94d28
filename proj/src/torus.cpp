#include "flatmink/torus.hpp"

#include <sstream>

#include "flatmink/error.hpp"

namespace flatmink {

ExtendedReal::ExtendedReal(double v) : value_(v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::DomainError, "finite coordinate expected, got " + std::to_string(v));
  }
}

std::string ExtendedReal::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream out;
  out.precision(17);
  out << value_;
  return out.str();
}

std::string TorusPoint::to_string() const { return "(" + x.to_string() + ", " + y.to_string() + ")"; }

bool parallel_plus(const TorusPoint& p, const TorusPoint& q) noexcept { return p.x == q.x; }

bool parallel_minus(const TorusPoint& p, const TorusPoint& q) noexcept { return p.y == q.y; }

bool parallel(const TorusPoint& p, const TorusPoint& q) noexcept {
  return parallel_plus(p, q) || parallel_minus(p, q);
}

namespace {

// The chart 2 atan(t) is increasing on R and sends inf to the top of the
// range, so the cyclic order of chart angles is the order of this key.
bool less_on_chart(const ExtendedReal& a, const ExtendedReal& b) noexcept {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  return a.value() < b.value();
}

}  // namespace

int cyclic_orientation(const ExtendedReal& a, const ExtendedReal& b, const ExtendedReal& c) {
  if (a == b || b == c || a == c) {
    throw Error(ErrorKind::DegenerateTriple,
                "cyclic orientation of coinciding points " + a.to_string() + ", " + b.to_string() +
                    ", " + c.to_string());
  }
  const bool ab = less_on_chart(a, b);
  const bool bc = less_on_chart(b, c);
  const bool ca = less_on_chart(c, a);
  // Exactly the three rotations of an increasing sequence are counterclockwise.
  if ((ab && bc) || (bc && ca) || (ca && ab)) return +1;
  return -1;
}

AdmissibleType position_type(const TorusPoint& p1, const TorusPoint& p2, const TorusPoint& p3) {
  const std::array<const TorusPoint*, 3> pts{&p1, &p2, &p3};
  int both = -1;
  int x_inf = -1;
  int y_inf = -1;
  for (int i = 0; i < 3; ++i) {
    const bool xi = pts[i]->x.is_infinite();
    const bool yi = pts[i]->y.is_infinite();
    if (xi && yi) both = i;
    else if (xi) x_inf = i;
    else if (yi) y_inf = i;
  }
  auto rest = [](int skip_a, int skip_b) {
    std::array<int, 3> out{};
    int k = 0;
    for (int i = 0; i < 3; ++i) {
      if (i != skip_a && i != skip_b) out[k++] = i;
    }
    return out;
  };
  if (both >= 0) {
    const auto r = rest(both, -1);
    return {AdmissibleKind::Type1, {both, r[0], r[1]}};
  }
  if (x_inf >= 0 && y_inf >= 0) {
    const auto r = rest(x_inf, y_inf);
    return {AdmissibleKind::Type2, {r[0], x_inf, y_inf}};
  }
  if (y_inf >= 0) {
    const auto r = rest(y_inf, -1);
    return {AdmissibleKind::Type3, {r[0], r[1], y_inf}};
  }
  if (x_inf >= 0) {
    const auto r = rest(x_inf, -1);
    return {AdmissibleKind::Type4, {r[0], r[1], x_inf}};
  }
  return {AdmissibleKind::Type5, {0, 1, 2}};
}

std::optional<AdmissibleType> classify_admissible(const TorusPoint& p1, const TorusPoint& p2,
                                                  const TorusPoint& p3, int half) {
  if (parallel(p1, p2) || parallel(p1, p3) || parallel(p2, p3)) {
    throw Error(ErrorKind::ParallelPoints, "points " + p1.to_string() + ", " + p2.to_string() +
                                               ", " + p3.to_string() + " are not pairwise nonparallel");
  }
  if (half != -1 && half != +1) throw Error(ErrorKind::BadParam, "half must be -1 or +1");
  const int ox = cyclic_orientation(p1.x, p2.x, p3.x);
  const int oy = cyclic_orientation(p1.y, p2.y, p3.y);
  const bool joinable = half < 0 ? ox == -oy : ox == oy;
  if (!joinable) return std::nullopt;
  return position_type(p1, p2, p3);
}

int joining_half(const TorusPoint& p1, const TorusPoint& p2, const TorusPoint& p3) {
  return classify_admissible(p1, p2, p3, -1) ? -1 : +1;
}

}  // namespace flatmink
