#include <gtest/gtest.h>

#include <cmath>

#include "flatmink/classify.hpp"
#include "flatmink/error.hpp"
#include "flatmink/incidence.hpp"
#include "flatmink/rng.hpp"
#include "flatmink/sampling.hpp"

using namespace flatmink;

namespace {

ShFunction power(double r) { return catalog("hartmann_power", {{"r", r}}); }
ShFunction reciprocal() { return catalog("reciprocal_power", {{"i", 1}}); }

PlaneSpec hartmann(double r1, double s1, double r2, double s2) {
  return PlaneSpec(power(r1), power(r1).scaled(1.0 / s1), power(r2), power(r2).scaled(1.0 / s2));
}

PlaneSpec mixed_plane() {
  return PlaneSpec(catalog("reciprocal_x_plus_arctan"), catalog("arcsinh_reciprocal"),
                   catalog("reciprocal_power_sum", {{"n", 3}}), reciprocal());
}

PlaneSpec arctan_plane() {
  return normalise(PlaneSpec(catalog("reciprocal_x_plus_arctan"), reciprocal(), reciprocal(), reciprocal()));
}

std::vector<PlaneSpec> sample_planes() {
  const PlaneSpec mixed = normalise(mixed_plane());
  return {PlaneSpec::classical(),
          hartmann(2, 1, 2, 1),
          hartmann(2, 2, 3, 0.5),
          mixed,
          arctan_plane(),
          rescale_plane(mixed, 3.0),
          normalise(transform_plane(mixed, Transform::A2)),
          normalise(transform_plane(mixed, Transform::A3)),
          normalise(PlaneSpec(catalog("arcsinh_reciprocal"), reciprocal(), reciprocal(),
                              catalog("reciprocal_power_sum", {{"n", 2}}))),
          rescale_plane(hartmann(0.5, 1, 1.5, 2), 0.25)};
}

}  // namespace

TEST(Normalise, ScalesByValueAtOne) {
  const PlaneSpec p(reciprocal().scaled(2), reciprocal().scaled(3), reciprocal(), reciprocal());
  const PlaneSpec n = normalise(p);
  EXPECT_TRUE(n.normalised());
  EXPECT_DOUBLE_EQ(n.f1()(4.0), 0.25);
  EXPECT_DOUBLE_EQ(n.f2()(4.0), 0.375);
  const PlaneSpec s = normalise(PlaneSpec(catalog("reciprocal_power_sum", {{"n", 2}}), reciprocal(), reciprocal(),
                                          reciprocal()));
  EXPECT_DOUBLE_EQ(s.f1()(1.0), 1.0);
  EXPECT_DOUBLE_EQ(s.f1()(2.0), 0.5 * (0.5 + 0.25));
}

TEST(Normalise, Idempotent) {
  const PlaneSpec once = normalise(mixed_plane());
  const PlaneSpec twice = normalise(once);
  for (double x : {0.01, 0.5, 1.0, 7.0, 300.0}) {
    EXPECT_EQ(once.f1()(x), twice.f1()(x));
    EXPECT_EQ(once.f2()(x), twice.f2()(x));
    EXPECT_EQ(once.f3()(x), twice.f3()(x));
    EXPECT_EQ(once.f4()(x), twice.f4()(x));
  }
}

TEST(Normalise, PreservesJoinPointSets) {
  const PlaneSpec p = mixed_plane();
  const PlaneSpec n = normalise(p);
  CounterRng rng(3, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto t = random_triple(static_cast<AdmissibleKind>(1 + trial % 5), rng);
    const Circle a = join(p, t[0], t[1], t[2]).circle;
    const Circle b = join(n, t[0], t[1], t[2]).circle;
    ASSERT_EQ(branch_point(a).has_value(), branch_point(b).has_value());
    for (int k = 0; k < 6; ++k) {
      const TorusPoint q = random_point_on(a, rng, 0.0);
      EXPECT_LE(residual(b, q), 1e-6) << to_string(a) << " vs " << to_string(b) << " at " << q.to_string();
    }
  }
}

TEST(DetectPower, Examples) {
  EXPECT_NEAR(detect_power(reciprocal()).value(), 1.0, 1e-12);
  EXPECT_NEAR(detect_power(power(2.5)).value(), 2.5, 1e-10);
  EXPECT_FALSE(detect_power(catalog("reciprocal_x_plus_arctan")).has_value());
  EXPECT_FALSE(detect_power(catalog("reciprocal_power_sum", {{"n", 2}})).has_value());
  EXPECT_FALSE(detect_power(catalog("arcsinh_reciprocal")).has_value());
}

TEST(DetectPower, RecoversRandomExponents) {
  CounterRng rng(4, 0);
  for (int k = 0; k < 100; ++k) {
    const double r = rng.log_uniform(0.1, 10.0);
    const auto got = detect_power(power(r));
    ASSERT_TRUE(got.has_value()) << r;
    EXPECT_NEAR(*got, r, 1e-10);
  }
}

TEST(Classify, Matrix) {
  const auto classical = classify_plane(PlaneSpec::classical());
  EXPECT_EQ(classical.group_dimension, 6);
  EXPECT_EQ(classical.klein_kroll, KleinKroll::VII_F_23);
  EXPECT_FALSE(classical.detected_exponents.has_value());

  const auto gh = classify_plane(hartmann(2, 1, 2, 1));
  EXPECT_EQ(gh.group_dimension, 4);
  EXPECT_EQ(gh.klein_kroll, KleinKroll::III_C_19);
  ASSERT_TRUE(gh.detected_exponents.has_value());
  EXPECT_NEAR((*gh.detected_exponents)[0], 2.0, 1e-10);
  EXPECT_NEAR((*gh.detected_exponents)[1], 1.0, 1e-12);

  const auto s2 = classify_plane(hartmann(2, 2, 2, 1));
  EXPECT_EQ(s2.group_dimension, 4);
  EXPECT_EQ(s2.klein_kroll, KleinKroll::III_C_1);
  EXPECT_NEAR((*s2.detected_exponents)[1], 2.0, 1e-12);

  const auto mixed = classify_plane(normalise(mixed_plane()));
  EXPECT_EQ(mixed.group_dimension, 3);
  EXPECT_EQ(mixed.klein_kroll, KleinKroll::III_C_1);
  EXPECT_FALSE(mixed.detected_exponents.has_value());

  EXPECT_EQ(classify_plane(arctan_plane()).group_dimension, 3);
  // Unequal exponents on the two halves: still dimension 4, not generalised Hartmann (r,1;r,1).
  EXPECT_EQ(classify_plane(hartmann(2, 1, 3, 1)).klein_kroll, KleinKroll::III_C_1);
  // Powers on one half only.
  EXPECT_EQ(classify_plane(PlaneSpec(power(2), power(2), reciprocal(), catalog("arcsinh_reciprocal"))).group_dimension,
            3);
}

TEST(Classify, DimensionSixIffVIIF23) {
  for (const PlaneSpec& p : sample_planes()) {
    const auto rep = classify_plane(p);
    EXPECT_EQ(rep.group_dimension == 6, rep.klein_kroll == KleinKroll::VII_F_23);
    if (rep.group_dimension == 4) {
      ASSERT_TRUE(rep.detected_exponents.has_value());
    }
  }
}

TEST(Classify, RejectsUnnormalised) {
  try {
    classify_plane(PlaneSpec(reciprocal().scaled(2), reciprocal(), reciprocal(), reciprocal()));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotNormalised);
  }
}

TEST(Classify, InvariantUnderRescaling) {
  CounterRng rng(5, 0);
  for (const PlaneSpec& p : sample_planes()) {
    const double r = rng.log_uniform(0.2, 5.0);
    const auto a = classify_plane(p);
    const auto b = classify_plane(rescale_plane(p, r));
    EXPECT_EQ(a.group_dimension, b.group_dimension);
    EXPECT_EQ(a.klein_kroll, b.klein_kroll);
    ASSERT_EQ(a.detected_exponents.has_value(), b.detected_exponents.has_value());
    if (a.detected_exponents) {
      for (int i = 0; i < 4; ++i) EXPECT_NEAR((*a.detected_exponents)[i], (*b.detected_exponents)[i], 1e-8);
    }
  }
}

TEST(Isomorphic, Identity) {
  const PlaneSpec p = normalise(mixed_plane());
  const auto w = isomorphic(p, p);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->transform, Transform::A1);
  EXPECT_DOUBLE_EQ(w->r, 1.0);
  EXPECT_LE(w->residual, 1e-12);
}

TEST(Isomorphic, RecoversRescaling) {
  const PlaneSpec p = normalise(mixed_plane());
  for (double r : {2.0, 0.3, 17.0}) {
    const auto w = isomorphic(p, rescale_plane(p, r));
    ASSERT_TRUE(w.has_value()) << r;
    EXPECT_EQ(w->transform, Transform::A1);
    EXPECT_NEAR(w->r, r, 1e-6 * r);
    EXPECT_LE(w->residual, 1e-6);
  }
}

TEST(Isomorphic, FindsCoordinateChanges) {
  const PlaneSpec p = normalise(mixed_plane());
  for (Transform t : {Transform::A2, Transform::A3, Transform::A4}) {
    const PlaneSpec q = rescale_plane(normalise(transform_plane(p, t)), 1.5);
    const auto w = isomorphic(p, q);
    ASSERT_TRUE(w.has_value()) << to_string(t);
    EXPECT_EQ(w->transform, t);
    EXPECT_NEAR(w->r, 1.5, 1e-6);
    EXPECT_LE(w->residual, 1e-6);
  }
}

TEST(Isomorphic, FlipOnlyForPowerPlanes) {
  const PlaneSpec h = hartmann(2, 2, 3, 0.5);
  for (Transform t : {Transform::A1p, Transform::A2p, Transform::A3p, Transform::A4p}) {
    const PlaneSpec q = normalise(transform_plane(h, t));
    EXPECT_EQ(classify_plane(q).group_dimension, 4);
    const auto w = isomorphic(h, q);
    ASSERT_TRUE(w.has_value()) << to_string(t);
    EXPECT_GE(static_cast<int>(w->transform), 4) << to_string(w->transform);
    EXPECT_LE(w->residual, 1e-6);
  }
  // The generator substitution of the flip applied to a plane that is not a
  // power plane does not describe its image, so it yields no witness.
  const PlaneSpec p = normalise(mixed_plane());
  EXPECT_FALSE(isomorphic(p, normalise(transform_plane(p, Transform::A1p))).has_value());
}

TEST(Isomorphic, ClassicalVersusMixedRejected) {
  EXPECT_FALSE(isomorphic(PlaneSpec::classical(), normalise(mixed_plane())).has_value());
  EXPECT_FALSE(isomorphic(PlaneSpec::classical(), arctan_plane()).has_value());
  EXPECT_FALSE(isomorphic(hartmann(2, 1, 2, 1), hartmann(3, 1, 3, 1)).has_value());
  EXPECT_TRUE(isomorphic(PlaneSpec::classical(), PlaneSpec::classical()).has_value());
  // The sweep alone, without the classicality shortcut, rejects as well.
  EXPECT_FALSE(sweep_transforms(PlaneSpec::classical(), normalise(mixed_plane())).has_value());
  // The other way round only the far end of the r range matches: there every
  // generator of the rescaled mixed plane is 1/x up to rounding on the grid.
  const auto far = sweep_transforms(normalise(mixed_plane()), PlaneSpec::classical());
  ASSERT_TRUE(far.has_value());
  EXPECT_LT(far->r, 1e-9);
}

TEST(Isomorphic, ReflexiveAndSymmetric) {
  const auto planes = sample_planes();
  IsoOptions opts;
  opts.min_exponent = -20;
  opts.max_exponent = 20;
  for (std::size_t i = 0; i < planes.size(); ++i) {
    EXPECT_TRUE(isomorphic(planes[i], planes[i], opts).has_value()) << i;
    for (std::size_t j = i + 1; j < planes.size(); ++j) {
      EXPECT_EQ(isomorphic(planes[i], planes[j], opts).has_value(), isomorphic(planes[j], planes[i], opts).has_value())
          << i << " " << j;
    }
  }
  // Members 3, 5, 6 and 7 are images of one plane.
  EXPECT_TRUE(isomorphic(planes[3], planes[5], opts).has_value());
  EXPECT_TRUE(isomorphic(planes[5], planes[6], opts).has_value());
  EXPECT_TRUE(isomorphic(planes[6], planes[7], opts).has_value());
  EXPECT_FALSE(isomorphic(planes[3], planes[4], opts).has_value());
}

TEST(Isomorphic, SerialMatchesParallel) {
  const PlaneSpec p = normalise(mixed_plane());
  const PlaneSpec q = rescale_plane(normalise(transform_plane(p, Transform::A4)), 0.7);
  IsoOptions s;
  s.exec = Exec::Serial;
  const auto a = isomorphic(p, q, s);
  const auto b = isomorphic(p, q);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->transform, b->transform);
  EXPECT_EQ(a->r, b->r);
}
