#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mhm/harness/rng.hpp"
#include "mhm/harness/sampling.hpp"
#include "mhm/lines.hpp"
#include "mhm/strip.hpp"
#include "oracle.hpp"

using namespace mhm;
using oracle::coord;
using oracle::P;
constexpr double inf = oracle::kInf;
const double e = std::exp(1.0);

namespace {

const MoebiusStructure& canon() {
  static const MoebiusStructure m = canonical_structure();
  return m;
}

PointPair cp(double a, double b) { return {P(a), P(b)}; }

// Harmonic conjugate of x with respect to (p, q) on the real line.
double conjugate(double p, double q, double x) { return (x * (p + q) - 2 * p * q) / (2 * x - p - q); }

void expect_chart(CirclePoint got, double want, double tol) {
  if (std::isinf(want)) {
    EXPECT_TRUE(std::isinf(coord(got)) || std::abs(coord(got)) > 1.0 / tol);
  } else {
    EXPECT_NEAR(coord(got), want, tol * std::max(1.0, std::abs(want)));
  }
}

}  // namespace

TEST(Rho, Examples) {
  expect_chart(rho(canon(), cp(0, inf), P(3)), -3, 1e-12);
  expect_chart(rho(canon(), cp(-1, 1), P(2)), 0.5, 1e-12);
  const PointPair a = cp(-1, 1);
  EXPECT_EQ(rho(canon(), a, a.p()), a.p());
  EXPECT_EQ(rho(canon(), a, a.q()), a.q());
}

TEST(Rho, MatchesHarmonicConjugate) {
  Rng rng(41);
  for (int i = 0; i < 2000; ++i) {
    const double p = rng.uniform(-10, 10), q = rng.uniform(-10, 10), x = rng.uniform(-10, 10);
    if (std::abs(p - q) < 1e-2 || std::abs(x - p) < 1e-2 || std::abs(x - q) < 1e-2 || std::abs(2 * x - p - q) < 1e-2)
      continue;
    const double want = conjugate(p, q, x);
    if (std::abs(want) > 1e4) continue;
    expect_chart(rho(canon(), cp(p, q), P(x)), want, 1e-8);
  }
}

TEST(Rho, InvolutionOnSnowflake) {
  const MoebiusStructure m = snowflake_structure(0.7);
  Rng rng(43);
  for (int i = 0; i < 500; ++i) {
    const HarmonicPair h = sample_harmonic(m, rng);
    EXPECT_LE(harmonic_defect(m, h.left, h.right), 1e-9);
    EXPECT_LE(angular_distance(rho(m, h.left, h.right.q()), h.right.p()), 1e-9);
  }
}

TEST(LineDistance, Examples) {
  const PointPair a = cp(0, inf);
  const HarmonicPair q{a, cp(1, -1)}, q1{a, cp(e, -e)}, q2{a, cp(e * e, -e * e)};
  EXPECT_EQ(line_distance(canon(), q, q), 0.0);
  EXPECT_NEAR(line_distance(canon(), q, q1), 1.0, 1e-12);
  EXPECT_NEAR(line_distance(canon(), q, q2), 2.0, 1e-12);
  EXPECT_NEAR(line_distance(canon(), q, q1) + line_distance(canon(), q1, q2), line_distance(canon(), q, q2), 1e-12);
}

TEST(LineDistance, NeedsACommonAxis) {
  const HarmonicPair q{cp(0, inf), cp(1, -1)}, q2{cp(-1, 1), cp(0, inf)};
  const HarmonicPair q3{cp(-2, 2), cp(0, inf)};
  EXPECT_NO_THROW(line_distance(canon(), q2, q3));  // share (0, inf)
  const HarmonicPair q4{cp(-3, 3), cp(1, 9)};
  EXPECT_THROW(line_distance(canon(), q, q4), Error);
}

TEST(LinePoint, Examples) {
  const Line line{cp(0, inf), cp(1, -1)};
  EXPECT_TRUE(same_harmonic(line_point(canon(), line, 0.0), line.basepoint()));
  const HarmonicPair p = line_point(canon(), line, 1.0);
  EXPECT_TRUE(same_pair(p.left, line.axis));
  const double c1 = std::abs(coord(p.right.p())), c2 = std::abs(coord(p.right.q()));
  EXPECT_NEAR(c1, e, 1e-10);
  EXPECT_NEAR(c2, e, 1e-10);
}

TEST(LinePoint, IsometryOnRandomLines) {
  Rng rng(47);
  for (int i = 0; i < 300; ++i) {
    const HarmonicPair h = sample_harmonic(canon(), rng);
    const Line line{h.left, h.right};
    const double t1 = rng.uniform(-5, 5), t2 = rng.uniform(-5, 5);
    const double d = line_distance(canon(), line_point(canon(), line, t1), line_point(canon(), line, t2));
    EXPECT_NEAR(d, std::abs(t1 - t2), 1e-8);
  }
}

TEST(LineCoordinate, SignPointsTowardSecondAxisEndpoint) {
  const PointPair a = cp(0, inf);
  const CirclePoint toward = a.q();
  const HarmonicPair m1 = move_along(canon(), a, cp(1, -1), toward, 1.0);
  // moving toward the endpoint increases the coordinate
  EXPECT_NEAR(line_coordinate(canon(), a, cp(1, -1), m1.right), 1.0, 1e-10);
  const HarmonicPair m2 = move_along(canon(), a, cp(1, -1), a.p(), 1.0);
  EXPECT_NEAR(line_coordinate(canon(), a, cp(1, -1), m2.right), -1.0, 1e-10);
}

TEST(Perpendicular, SymmetricExample) {
  const Perpendicular s = common_perpendicular(canon(), cp(1, -1), cp(e, -e));
  EXPECT_TRUE(same_pair(s.pair(), cp(0, inf), Tolerance{1e-9}));
  EXPECT_LT(harmonic_defect(canon(), s.pair(), cp(1, -1)), 1e-9);
  EXPECT_LT(harmonic_defect(canon(), s.pair(), cp(e, -e)), 1e-9);
}

TEST(Perpendicular, HalfPlaneGeodesicOracle) {
  // The geodesic orthogonal to the semicircles over [1,2] and [4,8] has
  // centre c with (c-1)(c-2) = (c-4)(c-8), i.e. c = 10/3, radius^2 = 28/9.
  const double c = 10.0 / 3.0, r = std::sqrt(28.0) / 3.0;
  const Perpendicular s = common_perpendicular(canon(), cp(1, 2), cp(4, 8));
  EXPECT_NEAR(coord(s.v), c - r, 1e-9);
  EXPECT_NEAR(coord(s.w), c + r, 1e-9);
  EXPECT_LT(harmonic_defect(canon(), s.pair(), cp(1, 2)), 1e-9);
  EXPECT_LT(harmonic_defect(canon(), s.pair(), cp(4, 8)), 1e-9);
}

TEST(Perpendicular, RejectsSharedOrSeparatingPairs) {
  try {
    common_perpendicular(canon(), cp(1, 2), cp(1, 2));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::not_strong_causal);
  }
  EXPECT_THROW(common_perpendicular(canon(), cp(0, 2), cp(1, 3)), Error);
}

TEST(Perpendicular, IndependentOfSearchPath) {
  Rng rng(53);
  LineOptions plain;
  plain.bisection.accelerate = false;
  for (int i = 0; i < 300; ++i) {
    const auto [b, b2] = sample_strong_causal(rng);
    const Perpendicular s = common_perpendicular(canon(), b, b2);
    const Perpendicular t = common_perpendicular(canon(), b, b2, plain);
    const Perpendicular r = common_perpendicular(canon(), b2, b);
    EXPECT_LE(std::max(angular_distance(s.v, t.v), angular_distance(s.w, t.w)), 1e-8);
    EXPECT_LE(std::max(angular_distance(s.v, r.w), angular_distance(s.w, r.v)), 1e-8);
    EXPECT_TRUE(arc_between(b.p(), b.q(), b2.p()).strictly_contains(s.v));
  }
}

TEST(Strip, SymmetricExample) {
  const Strip p = make_strip(canon(), cp(-1, 1), cp(-e * e, e * e));
  EXPECT_TRUE(same_pair(p.s(), cp(0, inf), Tolerance{1e-9}));
  expect_chart(p.w, inf, 1e-9);
  EXPECT_NEAR(p.width, 2.0, 1e-10);
  EXPECT_NEAR(p.h / p.g, e * e, 1e-8);
  // The chordal chart at the remote point is the line scaled by 1/2.
  EXPECT_NEAR(p.g, 0.5, 1e-10);
}

TEST(Strip, ThinExample) {
  const Strip p = make_strip(canon(), cp(-1, 1), cp(-1.1, 1.1));
  EXPECT_NEAR(p.width, std::log(1.1), 1e-10);
  EXPECT_TRUE(is_narrow(canon(), p));
  EXPECT_FALSE(is_narrow(canon(), make_strip(canon(), cp(-1, 1), cp(-std::pow(e, 4), std::pow(e, 4)))));
  EXPECT_TRUE(is_narrow(canon(), make_strip(canon(), cp(-1, 1), cp(-1 - 1e-9, 1 + 1e-9))));
}

TEST(Strip, LabelingAndInvariants) {
  Rng rng(59);
  for (int i = 0; i < 300; ++i) {
    const Strip p = sample_strip(canon(), rng);
    EXPECT_TRUE(strong_causal(p.a(), p.b()));
    EXPECT_TRUE(separates(PointPair(p.x, p.z), PointPair(p.u, p.y)));
    EXPECT_TRUE(arc_between(p.u, p.z, p.x).strictly_contains(p.w));
    const ChartMetric cm(canon(), p.w);
    EXPECT_NEAR(cm.distance(p.v, p.y) / p.g, 1.0, 1e-8);
    EXPECT_NEAR(cm.distance(p.v, p.z) / p.h, 1.0, 1e-8);
    EXPECT_GT(p.h, p.g);
    EXPECT_NEAR(p.width, std::log(p.h / p.g), 1e-8);
    // width = distance between the projections of x and u on h_s
    const PointPair s = p.s();
    const double proj = segment_length(canon(), s, PointPair(p.x, rho(canon(), s, p.x)), PointPair(p.u, rho(canon(), s, p.u)));
    EXPECT_NEAR(proj, p.width, 1e-8);
  }
}

TEST(Strip, RejectsBadConfigurations) {
  EXPECT_THROW(make_strip(canon(), cp(0, 2), cp(1, 3)), Error);
  EXPECT_THROW(make_strip(canon(), P(-1), P(1), P(1.1), P(-1.1)), Error);  // (x,z), (u,y) do not separate
}

TEST(WidthBounds, SymmetricStripClosedForm) {
  const Strip p = make_strip(canon(), cp(-1, 1), cp(-e * e, e * e));
  const WidthBounds one = width_bounds(canon(), p, 1.0);
  EXPECT_NEAR(one.upper, 2 * std::sinh(1.0) - 2.0, 1e-10);
  EXPECT_NEAR(one.lower, 0.0, 1e-10);  // tight at alpha = 1
  const WidthBounds wb = width_bounds(canon(), p, 1 - 1e-6);
  EXPECT_GE(wb.min_slack(), -1e-8);
  EXPECT_NEAR(wb.ratio, 1e-6, 1e-9);  // ratio exactly 1 by symmetry
}

TEST(WidthBounds, RandomCanonicalStripsNearAlphaOne) {
  Rng rng(61);
  for (int i = 0; i < 2000; ++i) {
    const Strip p = sample_strip(canon(), rng);
    EXPECT_GE(width_bounds(canon(), p, 1 - 1e-6).min_slack(), -1e-8);
  }
}

TEST(RatioDistortion, SameRemotePointGivesGammaOne) {
  const Strip p = make_strip(canon(), cp(-1, 1), cp(-e, e));
  const DistortionReport r = ratio_distortion(canon(), p, p.w, 0.5);
  EXPECT_EQ(r.gamma, 1.0);
  EXPECT_EQ(r.beta, 1.0);
  EXPECT_TRUE(r.bounds_ok);
}

TEST(RatioDistortion, OrientationIsChecked) {
  const Strip p = make_strip(canon(), cp(-1, 1), cp(-e, e));
  try {
    ratio_distortion(canon(), p, P(0.1), 0.5);  // inside a, wrong side of b
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::orientation);
  }
  const DistortionReport r = ratio_distortion(canon(), p, P(10.0), 0.5);
  EXPECT_LE(r.beta, 1.0);
  EXPECT_TRUE(r.bounds_ok);
}
