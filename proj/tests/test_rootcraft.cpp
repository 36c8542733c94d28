#include <gtest/gtest.h>

#include <cmath>

#include "flatmink/error.hpp"
#include "flatmink/rng.hpp"
#include "flatmink/rootcraft.hpp"

using namespace flatmink;

namespace {

GeneratorRef reciprocal_pair() { return PlaneSpec::classical().negative(); }

GeneratorRef mixed_pair() {
  return std::make_shared<const GeneratorPair>(
      GeneratorPair{catalog("reciprocal_x_plus_arctan"), catalog("arcsinh_reciprocal")});
}

DiffFunction check(double a1, double b1, double c1, double a2, double b2, double c2,
                   GeneratorRef g = reciprocal_pair()) {
  return DiffFunction(DiffKind::Check, a1, b1, c1, a2, b2, c2, std::move(g));
}

DiffFunction hat(double a1, double b1, double c1, double a2, double b2, double c2,
                 GeneratorRef g = reciprocal_pair()) {
  return DiffFunction(DiffKind::Hat, a1, b1, c1, a2, b2, c2, std::move(g));
}

struct QuadraticRoots {
  int count = 0;
  bool ambiguous = false;  // discriminant or a root too close to call
};

// With f = 1/x both Check and Hat vanish where
//   a1 (x+b2) - a2 (x+b1) + (c1-c2)(x+b1)(x+b2) = 0,
// restricted to the respective domain.
QuadraticRoots reciprocal_oracle(const DiffFunction& d) {
  const double a1 = d.a1(), b1 = d.b1(), a2 = d.a2(), b2 = d.b2();
  const double C = d.c1() - d.c2();
  const double A = C;
  const double B = a1 - a2 + C * (b1 + b2);
  const double K = a1 * b2 - a2 * b1 + C * b1 * b2;
  std::vector<double> xs;
  QuadraticRoots out;
  if (A == 0) {
    if (B != 0) xs.push_back(-K / B);
  } else {
    const double disc = B * B - 4 * A * K;
    const double scale = B * B + std::abs(4 * A * K);
    if (std::abs(disc) <= 1e-9 * scale) out.ambiguous = true;
    if (disc >= 0) {
      const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
      if (q != 0) {
        xs.push_back(q / A);
        xs.push_back(K / q);
      } else {
        xs.push_back(0.0);
      }
    }
  }
  for (double x : xs) {
    const double gap = d.kind() == DiffKind::Check ? x - d.lower() : d.upper() - x;
    if (std::abs(gap) <= 1e-9 * (1 + std::abs(x))) out.ambiguous = true;
    if (gap > 0) ++out.count;
  }
  return out;
}

}  // namespace

TEST(DiffFunction, MatchesDefiningFormulas) {
  const auto g = mixed_pair();
  const ShFunction& f1 = g->convex;
  const ShFunction& f2 = g->concave;
  const DiffFunction c = check(2, 0.5, 1, 0.7, -1, -2, g);
  const DiffFunction h = hat(2, 0.5, 1, 0.7, -1, -2, g);
  EXPECT_DOUBLE_EQ(c.lower(), 1.0);
  EXPECT_DOUBLE_EQ(h.upper(), -0.5);
  for (double u : {1e-3, 0.1, 1.0, 7.0, 300.0}) {
    const double xc = c.offset_to_x(u);
    EXPECT_NEAR(c.at_offset(u), 2 * f1(xc + 0.5) + 1 - 0.7 * f1(xc - 1) + 2, 1e-12 * c.magnitude_at_offset(u));
    EXPECT_NEAR(c(xc), c.at_offset(u), 1e-12 * c.magnitude_at_offset(u));
    const double xh = h.offset_to_x(u);
    EXPECT_NEAR(h.at_offset(u), -2 * f2(-xh - 0.5) + 1 + 0.7 * f2(-xh + 1) + 2, 1e-12 * h.magnitude_at_offset(u));
  }
}

TEST(DiffFunction, RejectsBadParameters) {
  EXPECT_THROW(check(0, 0, 0, 1, 1, 1), Error);
  EXPECT_THROW(check(1, 0, 0, -1, 1, 1), Error);
  EXPECT_THROW(check(1, 2, 3, 1, 2, 3), Error);
  try {
    hat(1, 2, 3, 1, 2, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidParams);
  }
}

TEST(DiffFunction, ReducedFormDividesByA2) {
  const auto r = check(2, 1, 5, 4, 3, 1).reduced();
  EXPECT_DOUBLE_EQ(r.a, 0.5);
  EXPECT_DOUBLE_EQ(r.b, -2.0);
  EXPECT_DOUBLE_EQ(r.c, 1.0);
  const auto s = hat(2, 1, 5, 4, 3, 1).reduced();
  EXPECT_DOUBLE_EQ(s.b, 2.0);
  EXPECT_DOUBLE_EQ(s.c, -1.0);
}

TEST(CriticalPoint, NoneForEqualScales) {
  const DiffFunction d = check(1, 0, 0, 1, 1, 0);
  EXPECT_FALSE(critical_point(d).has_value());
  // h(x) = 2 ln((x+1)/x) never vanishes on a dense grid.
  for (double x = 1e-6; x < 1e6; x *= 1.01) {
    EXPECT_GT(2 * std::log((x + 1) / x), 0.0);
  }
}

TEST(CriticalPoint, ReciprocalClosedForm) {
  const auto x = critical_point(check(1, 0, 0, 4, 1, 0));
  ASSERT_TRUE(x.has_value());
  EXPECT_NEAR(*x, 1.0, 1e-12);
}

TEST(CriticalPoint, NoneForConstantDifference) {
  EXPECT_FALSE(critical_point(check(1, 0, 0, 1, 0, 3)).has_value());
  EXPECT_EQ(analyze_roots(check(1, 0, 0, 1, 0, 3)).count(), 0);
}

TEST(CriticalPoint, ReciprocalFamilyAgainstAlgebra) {
  // a1/(x+b1)^2 = a2/(x+b2)^2 on x > max(-b1,-b2) gives
  // x = (sqrt(a2) b1 - sqrt(a1) b2) / (sqrt(a1) - sqrt(a2)) when it lies in the domain.
  CounterRng rng(41, 0);
  for (int k = 0; k < 2000; ++k) {
    const double a1 = rng.log_uniform(0.2, 5), a2 = rng.log_uniform(0.2, 5);
    const double b1 = rng.uniform(-3, 3), b2 = rng.uniform(-3, 3);
    const DiffFunction d = check(a1, b1, 0, a2, b2, 1);
    const double s1 = std::sqrt(a1), s2 = std::sqrt(a2);
    const double x = (s2 * b1 - s1 * b2) / (s1 - s2);
    const bool inside = x > d.lower() + 1e-9 * (1 + std::abs(x));
    const auto got = critical_point(d);
    if (std::abs(s1 - s2) < 1e-6 || std::abs(x - d.lower()) < 1e-6 * (1 + std::abs(x))) continue;
    ASSERT_EQ(got.has_value(), inside) << a1 << " " << b1 << " " << a2 << " " << b2;
    if (inside) {
      EXPECT_NEAR(*got, x, 1e-9 * (1 + std::abs(x)));
    }
  }
}

TEST(AnalyzeRoots, EqualScalesDistinctShiftsHaveNoRoots) {
  const RootReport r = analyze_roots(check(1, 0, 0, 1, 2, 0));
  EXPECT_EQ(r.count(), 0);
  EXPECT_FALSE(r.unresolved);
}

TEST(AnalyzeRoots, SingleRootAtOne) {
  const RootReport r = analyze_roots(check(2, 0, 0, 1, 0, 1));
  ASSERT_EQ(r.count(), 1);
  EXPECT_NEAR(r.roots[0].location, 1.0, 1e-12);
  EXPECT_TRUE(r.roots[0].sign_change);
  EXPECT_FALSE(r.roots[0].derivative_zero);
  EXPECT_NE(r.case_label.find("one of b,c zero"), std::string::npos);
}

TEST(AnalyzeRoots, ShiftedPairObeysClausesAndDenseScan) {
  const DiffFunction d = check(1, 0, 0, 1, -1, -1);
  const RootReport r = analyze_roots(d);
  EXPECT_LE(r.count(), 2);
  EXPECT_FALSE(single_clause_violation(d, r.count(), r.tangent_count()).has_value());
  ScanOptions fine;
  fine.points = 1000000;
  EXPECT_EQ(dense_scan_roots(d, fine).total(), r.count());
  EXPECT_EQ(reciprocal_oracle(d).count, r.count());
}

TEST(AnalyzeRoots, TwoRootsAndTangency) {
  // 1/x - 4/(x+1) + C: minimum at x=1 with value 1 - 2 + C = C - 1.
  const RootReport two = analyze_roots(check(1, 0, 0.5, 4, 1, 0));
  ASSERT_EQ(two.count(), 2);
  for (const auto& root : two.roots) {
    EXPECT_TRUE(root.sign_change);
    EXPECT_FALSE(root.derivative_zero);
  }
  EXPECT_LT(two.roots[0].location, two.roots[1].location);
  const RootReport touch = analyze_roots(check(1, 0, 1, 4, 1, 0));
  ASSERT_EQ(touch.count(), 1);
  EXPECT_TRUE(touch.roots[0].derivative_zero);
  EXPECT_FALSE(touch.roots[0].sign_change);
  EXPECT_NEAR(touch.roots[0].location, 1.0, 1e-9);
  EXPECT_NE(touch.case_label.find("tangential"), std::string::npos);
  EXPECT_EQ(analyze_roots(check(1, 0, 1.5, 4, 1, 0)).count(), 0);
}

TEST(AnalyzeRoots, ReciprocalMatchesQuadraticOracle) {
  CounterRng rng(43, 0);
  int compared = 0;
  for (std::uint64_t k = 0; k < 20000; ++k) {
    const auto p = case_table_parameters(7, k);
    for (DiffKind kind : {DiffKind::Check, DiffKind::Hat}) {
      const DiffFunction d(kind, p[0], p[1], p[2], p[3], p[4], p[5], reciprocal_pair());
      const QuadraticRoots q = reciprocal_oracle(d);
      if (q.ambiguous) continue;
      ++compared;
      const RootReport r = analyze_roots(d);
      ASSERT_EQ(r.count(), q.count) << (kind == DiffKind::Check ? "check " : "hat ") << p[0] << ","
                                    << p[1] << "," << p[2] << "," << p[3] << "," << p[4] << "," << p[5];
    }
  }
  EXPECT_GT(compared, 30000);
}

TEST(AnalyzeRoots, RootsHaveSmallResidualAndClausesHold) {
  const auto g = mixed_pair();
  for (std::uint64_t k = 0; k < 3000; ++k) {
    const auto p = case_table_parameters(11, k);
    const DiffFunction c(DiffKind::Check, p[0], p[1], p[2], p[3], p[4], p[5], g);
    const DiffFunction h(DiffKind::Hat, p[0], p[1], p[2], p[3], p[4], p[5], g);
    const RootReport rc = analyze_roots(c);
    const RootReport rh = analyze_roots(h);
    EXPECT_FALSE(rc.unresolved);
    EXPECT_FALSE(rh.unresolved) << p[0] << "," << p[1] << "," << p[2] << "," << p[3] << "," << p[4] << "," << p[5];
    EXPECT_LE(rc.count() + rh.count(), 2);
    if (rc.count() == 2) {
      EXPECT_EQ(rh.count(), 0);
    }
    EXPECT_FALSE(single_clause_violation(c, rc.count(), rc.tangent_count()).has_value());
    EXPECT_FALSE(single_clause_violation(h, rh.count(), rh.tangent_count()).has_value());
    EXPECT_FALSE(paired_clause_violation(c, rc, h, rh).has_value());
    for (const auto* pair : {&rc, &rh}) {
      const DiffFunction& d = pair == &rc ? c : h;
      for (const auto& root : pair->roots) {
        EXPECT_LE(std::abs(d.at_offset(root.offset)), 1e-9 * (1 + std::abs(p[2] - p[5])) +
                                                   kTangencyBand * d.magnitude_at_offset(root.offset));
      }
    }
  }
}

TEST(ClauseChecks, FlagImpossibleCounts) {
  // b=c=0 in reduced form with a != 1.
  EXPECT_FALSE(single_clause_violation(check(2, 0, 0, 1, 0, 0), 0, 0).has_value());
  EXPECT_TRUE(single_clause_violation(check(2, 0, 0, 1, 0, 0), 1, 0).has_value());
  const DiffFunction bc_pos = check(2, 1, 1, 1, 0, 0);  // b>0, c>0
  EXPECT_TRUE(single_clause_violation(bc_pos, 0, 0).has_value());
  EXPECT_FALSE(single_clause_violation(bc_pos, 1, 0).has_value());
  EXPECT_TRUE(single_clause_violation(bc_pos, 2, 0).has_value());
  const DiffFunction two = check(1, 0, 0.5, 4, 1, 0);
  EXPECT_FALSE(single_clause_violation(two, 2, 0).has_value());
  EXPECT_TRUE(single_clause_violation(two, 3, 0).has_value());
}

TEST(DenseScan, CountsCrossingsAndTouches) {
  EXPECT_EQ(dense_scan_roots(check(1, 0, 0.5, 4, 1, 0)).crossings, 2);
  const ScanCount t = dense_scan_roots(check(1, 0, 1, 4, 1, 0));
  EXPECT_EQ(t.total(), 1);
  EXPECT_EQ(t.touches, 1);
  EXPECT_EQ(dense_scan_roots(check(1, 0, 2, 4, 1, 0)).total(), 0);
  ScanOptions bad;
  bad.points = 2;
  EXPECT_THROW(dense_scan_roots(check(1, 0, 2, 4, 1, 0), bad), Error);
}

TEST(CaseTable, ReciprocalHasNoViolations) {
  const auto g = reciprocal_pair();
  const CaseTableReport r = verify_case_table(g->convex, g->concave, 2000, 1);
  for (const auto& v : r.violations) ADD_FAILURE() << v.trial << ": " << v.message;
  EXPECT_EQ(r.trials, 2000u);
  std::size_t labelled = 0;
  for (const auto& [label, n] : r.check_labels) labelled += n;
  EXPECT_EQ(labelled, 2000u);
}

TEST(CaseTable, MixedGeneratorsHaveNoViolations) {
  const auto f = catalog("reciprocal_x_plus_arctan");
  const CaseTableReport r = verify_case_table(f, f, 1000, 2);
  for (const auto& v : r.violations) ADD_FAILURE() << v.trial << ": " << v.message;
}

TEST(CaseTable, SerialEqualsParallelAndIsDeterministic) {
  const auto g = mixed_pair();
  const auto s = verify_case_table(g->convex, g->concave, 200, 9, Exec::Serial);
  const auto p = verify_case_table(g->convex, g->concave, 200, 9, Exec::Parallel);
  EXPECT_EQ(s.check_labels, p.check_labels);
  EXPECT_EQ(s.hat_labels, p.hat_labels);
  EXPECT_EQ(s.violations.size(), p.violations.size());
  const auto one_a = verify_case_table(g->convex, g->concave, 1, 5);
  const auto one_b = verify_case_table(g->convex, g->concave, 1, 5);
  EXPECT_EQ(one_a.check_labels, one_b.check_labels);
  EXPECT_EQ(case_table_parameters(5, 0), case_table_parameters(5, 0));
  EXPECT_NE(case_table_parameters(5, 0), case_table_parameters(6, 0));
}

TEST(AnalyzeRoots, CrossingBelowDoubleResolution) {
  // Equal shifts and a1/a2 - 1 ~ 0.016 with the logarithmic arcsinh generator:
  // (a2 - a1) ln(2/u) + C = 0 puts the Hat root near u = e^-1458.
  const DiffFunction hat(DiffKind::Hat, 0.20317844980619457, 0.070121708498211976, 1.9729366158225163,
                         0.20003793465732669, 0.070121708498211976, -2.6029971067914781, mixed_pair());
  const RootReport r = analyze_roots(hat);
  EXPECT_FALSE(r.unresolved);
  ASSERT_EQ(r.count(), 1);
  EXPECT_TRUE(r.roots[0].below_resolution);
  EXPECT_TRUE(r.roots[0].sign_change);
  EXPECT_EQ(r.roots[0].location, -0.070121708498211976);
  EXPECT_FALSE(single_clause_violation(hat, r.count(), r.tangent_count()).has_value());
  EXPECT_EQ(dense_scan_roots(hat).total(), 1);
  // Same setting with a wider scale gap: the root is representable again.
  const DiffFunction wide(DiffKind::Hat, 0.3, 0.07, 1.97, 0.2, 0.07, -2.6, mixed_pair());
  const RootReport w = analyze_roots(wide);
  ASSERT_EQ(w.count(), 1);
  EXPECT_FALSE(w.roots[0].below_resolution);
  EXPECT_EQ(dense_scan_roots(wide).total(), 1);
}
