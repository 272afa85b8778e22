#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "trivortex/analytic.hpp"

using namespace trivortex;

namespace {

SourceArrangement make(double r2, double r3, double theta3_deg, double phi2 = 0, double phi3 = 0) {
  SourceArrangement arr;
  arr.r2 = r2;
  arr.r3 = r3;
  arr.theta3 = theta3_deg * pi / 180.0;
  arr.phi2 = phi2;
  arr.phi3 = phi3;
  return arr;
}

// Cartesian solution of the two phase relations, kept separate from the
// polar formulas used by the library. Empty when the index pair has no core.
std::optional<std::pair<double, double>> cartesian_core(int m, int n, const SourceArrangement& a,
                                                        double z0) {
  const double k = a.wavenumber();
  const double M = 2 * (1 + 3 * m) * pi - 3 * a.phi2;
  const double N = 2 * (2 + 3 * n) * pi - 3 * a.phi3;
  const double ux = -M / (3 * k * a.r2);
  const double uy = (-N / (3 * k * a.r3) - ux * std::cos(a.theta3)) / std::sin(a.theta3);
  const double q = ux * ux + uy * uy;
  if (q >= 1) return std::nullopt;
  const double r = z0 / std::sqrt(1 - q);
  return std::make_pair(r * ux, r * uy);
}

double relative_residual(const SourceArrangement& arr, const VortexPrediction& p) {
  const double r = std::hypot(p.r_perp, p.z0);
  return std::abs(farfield_value(arr, {p.r_perp, p.theta, p.z0})) * r / 3.0;
}

SourceArrangement random_arrangement(std::mt19937_64& rng, bool with_phase) {
  std::uniform_real_distribution<double> len(1.0, 5.0), ang(5.0, 175.0), ph(-pi, pi);
  std::bernoulli_distribution flip(0.5);
  auto arr = make(len(rng), len(rng), flip(rng) ? ang(rng) : -ang(rng));
  if (with_phase) {
    arr.phi2 = ph(rng);
    arr.phi3 = ph(rng);
  }
  return arr;
}

}  // namespace

TEST(MNScale, Examples) {
  EXPECT_DOUBLE_EQ(mn_scale(0, 0, 0, 0).M, two_pi);
  EXPECT_DOUBLE_EQ(mn_scale(0, 0, 0, 0).N, 2 * two_pi);
  EXPECT_DOUBLE_EQ(mn_scale(1, 0, 0, 0).M, 4 * two_pi);
  const auto shifted = mn_scale(0, 0, two_pi, 0);
  EXPECT_DOUBLE_EQ(shifted.M, -2 * two_pi);
  EXPECT_DOUBLE_EQ(shifted.M, mn_scale(-1, 0, 0, 0).M);
  EXPECT_DOUBLE_EQ(shifted.N, 2 * two_pi);
}

TEST(PredictTheta, Examples) {
  EXPECT_NEAR(predict_theta(0, 0, make(3, 3, 60)) * 180 / pi, 60.0, 1e-12);
  EXPECT_NEAR(predict_theta(0, 0, make(3, 3, 90)) * 180 / pi, 63.43494882292201, 1e-11);
  // (r2/r3)(N/M) = cos(theta3): N/M = 2 at m = n = 0, so r2/r3 = cos(theta3)/2.
  const auto arr = make(std::cos(pi / 3) / 2 * 4.0, 4.0, 60);
  EXPECT_NEAR(predict_theta(0, 0, arr), 0.0, 1e-15);
}

TEST(PredictTheta, Errors) {
  try {
    predict_theta(0, 0, make(3, 3, 180));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::collinear_arrangement);
  }
  try {
    predict_theta(0, 0, make(3, 3, 60, two_pi / 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::degenerate_index);
  }
  auto unequal = make(3, 3, 60);
  unequal.amplitudes = {1, 2, 1};
  EXPECT_THROW(predict_theta(0, 0, unequal), Error);
}

TEST(PredictVortex, HandExample) {
  // 3 k r2 cos(60 deg) / M = 4.5 at m = n = 0, so r_perp = 25 / sqrt(4.5^2 - 1).
  const auto preds = predict_vortex(0, 0, make(3, 3, 60), 25);
  ASSERT_EQ(preds.size(), 2u);
  const double expected = 25 / std::sqrt(4.5 * 4.5 - 1);
  EXPECT_NEAR(expected, 5.699, 1e-3);
  for (const auto& p : preds) EXPECT_NEAR(p.r_perp, expected, 1e-12);
  EXPECT_NEAR(std::abs(preds[0].theta - preds[1].theta), pi, 1e-12);
}

TEST(PredictVortex, MatchesCartesianOracle) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> idx(-4, 4);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto arr = random_arrangement(rng, true);
    const int m = idx(rng), n = idx(rng);
    const double z0 = 50;
    const auto oracle = cartesian_core(m, n, arr, z0);
    const auto preds = predict_vortex(m, n, arr, z0);
    const auto plus = std::find_if(preds.begin(), preds.end(),
                                   [](const auto& p) { return p.branch == Branch::plus; });
    ASSERT_EQ(oracle.has_value(), plus != preds.end());
    if (!oracle) continue;
    ++checked;
    EXPECT_NEAR(plus->x, oracle->first, 1e-9 * std::max(1.0, plus->r_perp));
    EXPECT_NEAR(plus->y, oracle->second, 1e-9 * std::max(1.0, plus->r_perp));
  }
  EXPECT_GT(checked, 20);
}

TEST(PredictVortex, OutsideEllipseIsAbsent) {
  const auto arr = make(3, 3, 175);
  EXPECT_TRUE(predict_vortex(5, 5, arr, 25).empty());
  EXPECT_TRUE(predict_vortex(0, 0, arr, 25).empty());  // m + n = 0 is off the narrow ellipse
}

TEST(PredictVortex, CartesianConsistency) {
  for (const auto& p : predict_all(make(3, 3, 60), 25)) {
    EXPECT_GE(p.r_perp, 0.0);
    EXPECT_GE(p.theta, 0.0);
    EXPECT_LT(p.theta, two_pi);
    EXPECT_NEAR(p.x, p.r_perp * std::cos(p.theta), 1e-12);
    EXPECT_NEAR(p.y, p.r_perp * std::sin(p.theta), 1e-12);
  }
}

// Property: the far field vanishes at every predicted core.
TEST(Properties, ZeroField) {
  std::mt19937_64 rng(5);
  std::size_t total = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto arr = random_arrangement(rng, trial % 2 == 1);
    for (const auto& p : predict_all(arr, 40)) {
      EXPECT_LT(relative_residual(arr, p), 1e-9) << p.m << "," << p.n;
      ++total;
    }
  }
  EXPECT_GT(total, 100u);
}

// Property: r_perp is proportional to z0, theta is not affected.
TEST(Properties, ZScaling) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    const auto arr = random_arrangement(rng, true);
    const auto a = predict_all(arr, 30), b = predict_all(arr, 60);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_DOUBLE_EQ(a[i].theta, b[i].theta);
      EXPECT_NEAR(b[i].r_perp, 2 * a[i].r_perp, 1e-12 * b[i].r_perp);
    }
  }
}

// Property: in-phase sources give cores in +/- pairs, and an index has cores
// exactly when it lies inside the parameter-space ellipse.
TEST(Properties, PairingAndEllipseEquivalence) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const auto arr = random_arrangement(rng, false);
    const auto inside = enumerate_lattice(arr);
    for (int m = -8; m <= 8; ++m) {
      for (int n = -8; n <= 8; ++n) {
        const auto preds = predict_vortex(m, n, arr, 20);
        EXPECT_TRUE(preds.empty() || preds.size() == 2);
        const bool listed = std::binary_search(inside.begin(), inside.end(), LatticeIndex{m, n});
        EXPECT_EQ(listed, preds.size() == 2) << m << "," << n;
      }
    }
  }
}

// Property: adding 2 pi to phi2 relabels the cores (plus m -> m - 1,
// minus m -> m + 1) without moving any of them.
TEST(Properties, PhasePeriodicity) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto base = random_arrangement(rng, true);
    auto shifted = base;
    shifted.phi2 += two_pi;
    const auto a = predict_all(base, 30), b = predict_all(shifted, 30);
    ASSERT_EQ(a.size(), b.size());
    for (const auto& p : b) {
      const int m = p.branch == Branch::plus ? p.m - 1 : p.m + 1;
      const auto q = std::find_if(a.begin(), a.end(), [&](const auto& v) {
        return v.m == m && v.n == p.n && v.branch == p.branch;
      });
      ASSERT_NE(q, a.end());
      EXPECT_NEAR(q->x, p.x, 1e-9);
      EXPECT_NEAR(q->y, p.y, 1e-9);
    }
  }
}

TEST(PhasorAngles, QuantiseAtCore) {
  const auto arr = make(3, 4, 70, 0.4, -1.1);
  for (const auto& p : predict_all(arr, 30)) {
    const auto a = phasor_angles(arr, p.x, p.y, p.z0);
    if (p.branch == Branch::plus) {
      EXPECT_EQ(a.m, p.m);
      EXPECT_EQ(a.n, p.n);
      EXPECT_NEAR(a.gamma, two_pi / 3 + p.m * two_pi, 1e-9);
      EXPECT_NEAR(a.eta, 2 * two_pi / 3 + p.n * two_pi, 1e-9);
    } else {
      // Triangle traversed the other way: gamma = 4pi/3, eta = 2pi/3 (mod 2pi).
      EXPECT_NEAR(std::remainder(a.gamma - 2 * two_pi / 3, two_pi), 0.0, 1e-9);
      EXPECT_NEAR(std::remainder(a.eta - two_pi / 3, two_pi), 0.0, 1e-9);
    }
  }
}

TEST(Hyperbola, IntersectAtPrediction) {
  const auto arr = make(3, 3, 175);
  for (const auto& idx : enumerate_lattice(arr)) {
    const double theta = predict_theta(idx.m, idx.n, arr);
    const auto preds = predict_vortex(idx.m, idx.n, arr, 25);
    ASSERT_EQ(preds.size(), 2u);
    const auto hm = hyperbola_m(idx.m, arr, 25, theta), hn = hyperbola_n(idx.n, arr, 25, theta);
    ASSERT_TRUE(hm && hn);
    EXPECT_LT(std::abs(*hm - *hn) / preds[0].r_perp, 1e-9);
    EXPECT_LT(std::abs(*hm - preds[0].r_perp) / preds[0].r_perp, 1e-9);
  }
}

TEST(Hyperbola, AbsentOnAxisNormal) {
  const auto arr = make(3, 3, 60);
  EXPECT_FALSE(hyperbola_m(0, arr, 25, pi / 2));
  EXPECT_FALSE(hyperbola_m(0, arr, 25, -pi / 2));
  EXPECT_FALSE(hyperbola_n(0, arr, 25, arr.theta3 + pi / 2));
}

TEST(Hyperbola, DivergesTowardAsymptote) {
  const auto arr = make(3, 3, 60);
  const double M = mn_scale(0, 0, 0, 0).M;
  const double asymptote = std::acos(M / (3 * arr.wavenumber() * arr.r2));
  double previous = 0;
  for (double gap : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6}) {
    const auto r = hyperbola_m(0, arr, 25, asymptote - gap);
    ASSERT_TRUE(r);
    EXPECT_GT(*r, previous);
    previous = *r;
  }
  EXPECT_GT(previous, 1e3);
}

TEST(Hyperbola, OnlySameSignIntersectionsArePhysical) {
  const auto arr = make(3, 3, 60);
  for (const auto& idx : enumerate_lattice(arr)) {
    int physical = 0;
    for (const auto& hit : hyperbola_intersections(idx.m, idx.n, arr, 25)) {
      if (hit.sign_m == hit.sign_n) {
        EXPECT_TRUE(hit.physical);
      } else {
        EXPECT_FALSE(hit.physical);
        EXPECT_GT(hit.residual, 1e-3);
      }
      physical += hit.physical;
    }
    EXPECT_EQ(physical, 2);
  }
}

TEST(Hyperbola, ParamsDescribeSampledCurve) {
  const auto arr = make(3, 3, 60);
  const auto h = hyperbola_params('m', 0, arr, 25);
  ASSERT_TRUE(h);
  const auto curves = sample_trajectory('m', 0, arr, 25, 40, 81);
  ASSERT_EQ(curves.size(), 2u);
  // The middle sample (v = 0) is the vertex, on the x axis.
  for (const auto& c : curves) {
    EXPECT_NEAR(std::abs(c.points[40].first), h->vertex, 1e-12);
    EXPECT_NEAR(c.points[40].second, 0.0, 1e-12);
    for (const auto& [x, y] : c.points) {
      const double theta = std::atan2(y, x);
      const auto r = hyperbola_m(0, arr, 25, theta);
      ASSERT_TRUE(r);
      EXPECT_NEAR(*r, std::hypot(x, y), 1e-9 * *r);
    }
  }
  EXPECT_FALSE(hyperbola_params('m', 10, arr, 25));
}

TEST(CollinearLimit, SubstitutionExample) {
  const auto c = collinear_limit(0.1, 0, 0, make(3, 3, 180), 25);
  EXPECT_NEAR(std::tan(c.theta), 30.0, 1e-12);
  EXPECT_NEAR(c.theta * 180 / pi, 88.09084756700362, 1e-10);
}

TEST(CollinearLimit, ApproachesQuarterTurn) {
  const auto arr = make(3, 3, 180);
  double previous = 0;
  for (double eps : {0.1, 0.01, 0.001, 1e-6}) {
    const double theta = collinear_limit(eps, 0, 0, arr, 25).theta;
    EXPECT_GT(theta, previous);
    previous = theta;
  }
  EXPECT_NEAR(previous, pi / 2, 1e-6);
  EXPECT_DOUBLE_EQ(collinear_limit(0.0, 0, 0, arr, 25).theta, pi / 2);
}

TEST(CollinearLimit, AgreesWithExactAngleNearCollinearity) {
  // theta3 = pi - eps keeps sin(theta3) = sin(eps) > 0.
  const double eps = 0.01;
  const auto arr = make(3, 3, 180 - eps * 180 / pi);
  for (const auto& [m, n] : {std::pair{0, 0}, std::pair{1, -1}, std::pair{-2, 1}}) {
    const double exact = predict_theta(m, n, arr);
    const double approx = collinear_limit(eps, m, n, arr, 25).theta;
    // The small-angle form drops terms of order eps (1 + |tan|).
    EXPECT_NEAR(std::tan(approx), std::tan(exact), eps * (1 + std::abs(std::tan(exact))));
  }
}

TEST(CollinearLimit, RadiusTurnsImaginary) {
  // Offset (r2/r3)(N/M) + 1 = 0.01 for (m, n) = (0, -1).
  const auto arr = make(3, 3 / 0.99, 180);
  const auto near = collinear_limit(0.1, 0, -1, arr, 25);
  const auto far = collinear_limit(0.001, 0, -1, arr, 25);
  EXPECT_FALSE(near.imaginary);
  EXPECT_TRUE(far.imaginary);
  // In between the radius grows without bound before turning imaginary.
  double previous = near.r_perp;
  for (double eps : {0.05, 0.02, 0.012}) {
    const auto c = collinear_limit(eps, 0, -1, arr, 25);
    ASSERT_FALSE(c.imaginary);
    EXPECT_GT(c.r_perp, previous);
    previous = c.r_perp;
  }
}

TEST(CollinearLimit, Guards) {
  EXPECT_THROW(collinear_limit(0.2, 0, 0, make(3, 3, 180), 25), Error);
  EXPECT_THROW(collinear_limit(0.05, 0, 0, make(0, 3, 180), 25), Error);
}

TEST(PredictAll, CollinearIsEmpty) {
  EXPECT_TRUE(predict_all(make(3, 3, 0), 25).empty());
  EXPECT_TRUE(predict_all(make(3, 3, 180), 25).empty());
  EXPECT_EQ(predict_all(make(3, 3, 175), 25).size(), 12u);
}
