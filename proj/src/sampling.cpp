#include "flatmink/sampling.hpp"

#include <algorithm>

#include "flatmink/incidence.hpp"

namespace flatmink {

Circle random_circle(const PlaneSpec& plane, CounterRng& rng, int half, double line_probability) {
  if (half == 0) half = rng.coin() ? -1 : 1;
  if (rng.coin(line_probability)) {
    const double s = rng.log_uniform(0.2, 5.0);
    const double t = rng.uniform(-3.0, 3.0);
    if (half < 0) return NegLine{-s, t};
    return PosLine{s, t};
  }
  const double a = rng.log_uniform(0.2, 5.0);
  const double b = rng.uniform(-3.0, 3.0);
  const double c = rng.uniform(-3.0, 3.0);
  if (half < 0) return plane.neg_curve(a, b, c);
  return plane.pos_curve(a, b, c);
}

TorusPoint random_point_on(const Circle& c, CounterRng& rng, double infinite_probability) {
  if (rng.coin(infinite_probability)) {
    const auto inf = infinite_points(c);
    return inf[rng.below(inf.size())];
  }
  double x;
  if (const auto bp = branch_point(c)) {
    const double off = rng.log_uniform(0.05, 20.0);
    x = rng.coin() ? *bp + off : *bp - off;
  } else {
    x = rng.uniform(-10.0, 10.0);
  }
  return {ExtendedReal(x), ExtendedReal(eval_finite(c, x))};
}

TorusPoint random_point(CounterRng& rng, double infinite_probability) {
  auto coord = [&]() {
    if (rng.coin(infinite_probability)) return kInf;
    return ExtendedReal(rng.uniform(-10.0, 10.0));
  };
  const ExtendedReal x = coord();
  return {x, coord()};
}

std::array<TorusPoint, 3> random_triple(AdmissibleKind type, CounterRng& rng) {
  // Distinct coordinates are drawn by rejection; collisions are measure zero.
  auto distinct = [&rng](int n) {
    std::array<double, 3> v{};
    for (int i = 0; i < n; ++i) {
      bool again = true;
      while (again) {
        v[i] = rng.uniform(-10.0, 10.0);
        again = std::find(v.begin(), v.begin() + i, v[i]) != v.begin() + i;
      }
    }
    return v;
  };
  const auto xs = distinct(3);
  const auto ys = distinct(3);
  auto fin = [](double x, double y) { return TorusPoint{ExtendedReal(x), ExtendedReal(y)}; };
  std::array<TorusPoint, 3> p;
  switch (type) {
    case AdmissibleKind::Type1:
      p = {TorusPoint{kInf, kInf}, fin(xs[0], ys[0]), fin(xs[1], ys[1])};
      break;
    case AdmissibleKind::Type2:
      p = {fin(xs[0], ys[0]), TorusPoint{kInf, ExtendedReal(ys[1])}, TorusPoint{ExtendedReal(xs[1]), kInf}};
      break;
    case AdmissibleKind::Type3:
      p = {fin(xs[0], ys[0]), fin(xs[1], ys[1]), TorusPoint{ExtendedReal(xs[2]), kInf}};
      break;
    case AdmissibleKind::Type4:
      p = {fin(xs[0], ys[0]), fin(xs[1], ys[1]), TorusPoint{kInf, ExtendedReal(ys[2])}};
      break;
    case AdmissibleKind::Type5:
      p = {fin(xs[0], ys[0]), fin(xs[1], ys[1]), fin(xs[2], ys[2])};
      break;
  }
  static constexpr std::array<std::array<int, 3>, 6> kPerms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  const auto& perm = kPerms[rng.below(6)];
  return {p[perm[0]], p[perm[1]], p[perm[2]]};
}

}  // namespace flatmink
