#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rfd/solver.hpp"

namespace rfd {
namespace {

using W = std::map<int, Rational>;

// Every valid (K, L, U) with K in [k_min, k_max].
std::vector<OrbitSpace> all_spaces(int k_min, int k_max) {
  std::vector<OrbitSpace> out;
  for (int K = k_min; K <= k_max; ++K) {
    for (int L = 0; L < K; ++L) {
      for (int U = L + 1; U <= K; ++U) out.emplace_back(K, L, U);
    }
  }
  return out;
}

TEST(RegionCase, Examples) {
  const auto narrow = region_case(OrbitSpace(6, 2, 4));
  EXPECT_EQ(narrow.tag, RegionTag::Narrow);
  EXPECT_EQ(narrow.discriminant, -2);
  const auto wide = region_case(OrbitSpace(4, 0, 3));
  EXPECT_EQ(wide.tag, RegionTag::Wide);
  EXPECT_EQ(wide.discriminant, 4);
  const auto boundary = region_case(OrbitSpace(4, 1, 3));
  EXPECT_EQ(boundary.tag, RegionTag::Boundary);
  EXPECT_EQ(boundary.discriminant, 0);
}

TEST(TwoOrbitWeight, Examples) {
  EXPECT_NEAR(two_orbit_weight(OrbitSpace(6, 1, 3)), 0.2590, 5e-5);
  EXPECT_NEAR(two_orbit_weight(OrbitSpace(9, 2, 4)), 0.2539, 5e-5);
  EXPECT_NEAR(two_orbit_weight(OrbitSpace(4, 0, 2)), 0.2, 1e-15);
  EXPECT_EQ(two_orbit_weight(OrbitSpace(5, 2, 3)), 0.5);
  EXPECT_THROW(two_orbit_weight(OrbitSpace(4, 0, 3)), std::invalid_argument);
  EXPECT_THROW(two_orbit_weight(OrbitSpace(4, 1, 3)), std::invalid_argument);
}

TEST(TwoOrbitWeight, SimplifiesAtFullBounds) {
  for (const auto& s : all_spaces(2, 30)) {
    if (region_case(s).tag != RegionTag::Narrow) continue;
    const int K = s.factors();
    const double w = two_orbit_weight(s);
    EXPECT_GT(w, 0.0);
    EXPECT_LT(w, 1.0);
    if (s.lower() == 0) {
      EXPECT_NEAR(w, 1.0 / (K + 1), 1e-12) << "K=" << K << " U=" << s.upper();
    }
    if (s.upper() == K) {
      EXPECT_NEAR(w, K / (K + 1.0), 1e-12) << "K=" << K << " L=" << s.lower();
    }
  }
}

// Reflecting U about K/2 leaves the lower weight unchanged.
TEST(TwoOrbitWeight, SymmetricInUpperBound) {
  int pairs = 0;
  for (int K = 2; K <= 30; ++K) {
    for (int L = 0; L < K; ++L) {
      for (int U = (K + 1) / 2 + (K % 2 == 0 ? 1 : 0); U <= K; ++U) {
        const int mirror = K - U;  // K/2 - c for U = K/2 + c
        if (mirror <= L) continue;
        const OrbitSpace hi(K, L, U);
        const OrbitSpace lo(K, L, mirror);
        if (region_case(hi).tag != RegionTag::Narrow || region_case(lo).tag != RegionTag::Narrow) continue;
        EXPECT_NEAR(two_orbit_weight(hi), two_orbit_weight(lo), 1e-12) << K << " " << L << " " << U;
        ++pairs;
      }
    }
  }
  EXPECT_GT(pairs, 50);
}

TEST(SolveNarrow, Examples) {
  const auto a = solve_narrow(OrbitSpace(2, 0, 1));
  EXPECT_EQ(a.support(), (std::vector<int>{0, 1}));
  EXPECT_NEAR(a.weight(0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(a.weight(1), 2.0 / 3.0, 1e-15);

  const auto b = solve_narrow(OrbitSpace(5, 2, 3));
  ASSERT_TRUE(b.is_exact());
  EXPECT_EQ(*b.exact_weights(), (W{{2, Rational(1, 2)}, {3, Rational(1, 2)}}));

  const auto c = solve_narrow(OrbitSpace(9, 4, 5));
  EXPECT_EQ(*c.exact_weights(), (W{{4, Rational(1, 2)}, {5, Rational(1, 2)}}));
}

// Symmetric bounds strictly inside the roots give equal weights.
TEST(SolveNarrow, SymmetricBoundsGiveEqualWeights) {
  int seen = 0;
  for (int K = 2; K <= 40; ++K) {
    for (int L = 0; 2 * L < K; ++L) {
      const int d = K - 2 * L;  // L > (K - sqrt K)/2  iff  d^2 < K
      if (d * d >= K) continue;
      const auto report = solve(OrbitSpace(K, L, K - L));
      ASSERT_TRUE(report.design.is_exact());
      EXPECT_EQ(*report.design.exact_weights(), (W{{L, Rational(1, 2)}, {K - L, Rational(1, 2)}}));
      ++seen;
    }
  }
  EXPECT_GT(seen, 10);
}

TEST(InteriorOrbit, Examples) {
  EXPECT_EQ(interior_orbit(OrbitSpace(4, 0, 3)), 2);
  EXPECT_EQ(interior_orbit(OrbitSpace(9, 1, 6)), 4);
  EXPECT_EQ(interior_orbit(OrbitSpace(5, 0, 4)), 2);
  // Only the upper root is cleared.
  EXPECT_EQ(interior_orbit(OrbitSpace(9, 3, 8)), 5);
  EXPECT_THROW(interior_orbit(OrbitSpace(6, 2, 4)), std::invalid_argument);
}

TEST(InteriorOrbit, StrictlyBetweenBoundsInWideCase) {
  for (const auto& s : all_spaces(2, 40)) {
    if (region_case(s).tag != RegionTag::Wide) continue;
    const int l = interior_orbit(s);
    EXPECT_LT(s.lower(), l);
    EXPECT_LT(l, s.upper());
  }
}

TEST(SolveWide, Examples) {
  EXPECT_EQ(*solve_wide(OrbitSpace(4, 0, 3)).exact_weights(),
            (W{{0, Rational(1, 6)}, {2, Rational(1, 2)}, {3, Rational(1, 3)}}));
  EXPECT_EQ(*solve_wide(OrbitSpace(6, 1, 5)).exact_weights(),
            (W{{1, Rational(3, 16)}, {3, Rational(5, 8)}, {5, Rational(3, 16)}}));
  EXPECT_EQ(*solve_wide(OrbitSpace(4, 1, 3)).exact_weights(), (W{{1, Rational(1, 2)}, {3, Rational(1, 2)}}));
  EXPECT_THROW(solve_wide(OrbitSpace(6, 2, 4)), std::invalid_argument);
}

TEST(SolveWide, ZeroMomentsExactly) {
  int seen = 0;
  for (const auto& s : all_spaces(2, 40)) {
    if (region_case(s).tag == RegionTag::Narrow) continue;
    const auto d = solve_wide(s);
    ASSERT_TRUE(d.is_exact());
    const auto m = design_moments_exact(d);
    EXPECT_EQ(m.m1, Rational(0));
    EXPECT_EQ(m.m2, Rational(0));
    for (const auto& [k, w] : *d.exact_weights()) EXPECT_GT(w, Rational(0));
    ++seen;
  }
  EXPECT_GT(seen, 1000);
}

TEST(GeneralThreeOrbit, Examples) {
  EXPECT_EQ(*general_three_orbit(OrbitSpace(6, 0, 6), 1, 3, 5).exact_weights(),
            (W{{1, Rational(3, 16)}, {3, Rational(5, 8)}, {5, Rational(3, 16)}}));
  EXPECT_EQ(*general_three_orbit(OrbitSpace(4, 0, 4), 0, 2, 4).exact_weights(),
            (W{{0, Rational(1, 8)}, {2, Rational(3, 4)}, {4, Rational(1, 8)}}));
  // Interior weight vanishes.
  EXPECT_EQ(*general_three_orbit(OrbitSpace(9, 0, 5), 0, 4, 5).exact_weights(),
            (W{{0, Rational(1, 10)}, {5, Rational(9, 10)}}));
}

TEST(GeneralThreeOrbit, ReportsFailingCondition) {
  try {
    general_three_orbit(OrbitSpace(6, 0, 6), 2, 3, 4);
    FAIL() << "expected infeasible";
  } catch (const InfeasibleConstruction& e) {
    EXPECT_NE(std::string(e.what()).find("(K - 2*lo)(2*hi - K) >= K"), std::string::npos) << e.what();
  }
  // (2l - K)(2U - K) >= -K fails: K=9, l=1, U=8 gives (-7)(7) = -49.
  EXPECT_THROW(general_three_orbit(OrbitSpace(9, 0, 9), 0, 1, 8), InfeasibleConstruction);
  // (2L - K)(2l - K) >= -K fails: K=9, L=1, l=8 gives (-7)(7) = -49.
  EXPECT_THROW(general_three_orbit(OrbitSpace(9, 0, 9), 1, 8, 9), InfeasibleConstruction);
  EXPECT_THROW(general_three_orbit(OrbitSpace(6, 1, 5), 0, 3, 5), std::invalid_argument);
  EXPECT_THROW(general_three_orbit(OrbitSpace(6, 0, 6), 1, 1, 5), std::invalid_argument);
}

// Whenever the three conditions hold, the weights are nonnegative and the
// moments vanish.
TEST(GeneralThreeOrbit, FeasibleTriplesGiveZeroMoments) {
  int feasible = 0;
  for (int K = 2; K <= 16; ++K) {
    const OrbitSpace s(K, 0, K);
    for (int a = 0; a <= K; ++a) {
      for (int b = a + 1; b <= K; ++b) {
        for (int c = b + 1; c <= K; ++c) {
          try {
            const auto d = general_three_orbit(s, a, b, c);
            const auto m = design_moments_exact(d);
            EXPECT_EQ(m.m1, Rational(0));
            EXPECT_EQ(m.m2, Rational(0));
            ++feasible;
          } catch (const InfeasibleConstruction&) {
          }
        }
      }
    }
  }
  EXPECT_GT(feasible, 100);
}

TEST(SymmetricFourOrbit, Examples) {
  EXPECT_EQ(*symmetric_four_orbit(OrbitSpace(5, 0, 4), 1, 2).exact_weights(),
            (W{{1, Rational(1, 4)}, {2, Rational(1, 4)}, {3, Rational(1, 4)}, {4, Rational(1, 4)}}));
  EXPECT_EQ(*symmetric_four_orbit(OrbitSpace(9, 0, 9), 2, 4).exact_weights(),
            (W{{2, Rational(1, 6)}, {4, Rational(1, 3)}, {5, Rational(1, 3)}, {7, Rational(1, 6)}}));
  EXPECT_THROW(symmetric_four_orbit(OrbitSpace(4, 0, 4), 1, 1), std::invalid_argument);
  EXPECT_EQ(*symmetric_four_orbit(OrbitSpace(4, 0, 4), 0, 1).exact_weights(),
            (W{{1, Rational(1, 2)}, {3, Rational(1, 2)}}));
}

TEST(SymmetricFourOrbit, MiddleOrbitsMerge) {
  // k2 = K/2: three distinct orbits, the middle one carrying 2 w2.
  const auto d = symmetric_four_orbit(OrbitSpace(6, 0, 6), 1, 3);
  EXPECT_EQ(d.support(), (std::vector<int>{1, 3, 5}));
  EXPECT_EQ(*d.exact_weights(), (W{{1, Rational(3, 16)}, {3, Rational(5, 8)}, {5, Rational(3, 16)}}));
}

TEST(SymmetricFourOrbit, WindowViolations) {
  EXPECT_THROW(symmetric_four_orbit(OrbitSpace(9, 3, 9), 2, 4), std::invalid_argument);  // k1 < L
  EXPECT_THROW(symmetric_four_orbit(OrbitSpace(9, 0, 6), 2, 4), std::invalid_argument);  // K - k1 > U
  EXPECT_THROW(symmetric_four_orbit(OrbitSpace(9, 0, 9), 3, 4), std::invalid_argument);  // k1 not below root
  EXPECT_THROW(symmetric_four_orbit(OrbitSpace(9, 0, 9), 1, 2), std::invalid_argument);  // k2 below root
  EXPECT_THROW(symmetric_four_orbit(OrbitSpace(9, 0, 9), 2, 5), std::invalid_argument);  // k2 > K/2
}

TEST(SymmetricFourOrbit, WindowGivesZeroMoments) {
  int seen = 0;
  for (int K = 2; K <= 30; ++K) {
    const OrbitSpace s(K, 0, K);
    for (int k1 = 0; k1 <= K; ++k1) {
      for (int k2 = k1 + 1; 2 * k2 <= K; ++k2) {
        const int a = K - 2 * k1;
        const int b = K - 2 * k2;
        if (!(a * a > K && b * b <= K)) continue;
        const auto d = symmetric_four_orbit(s, k1, k2);
        const auto m = design_moments_exact(d);
        EXPECT_EQ(m.m1, Rational(0));
        EXPECT_EQ(m.m2, Rational(0));
        if (b * b == K) {
          EXPECT_EQ(d.weight(k1), 0.0) << K << " " << k1 << " " << k2;
        }
        ++seen;
      }
    }
  }
  EXPECT_GT(seen, 50);
}

TEST(Solve, Examples) {
  const auto a = solve(OrbitSpace(6, 2, 4));
  EXPECT_EQ(a.construction, Construction::TwoOrbit);
  EXPECT_EQ(*a.design.exact_weights(), (W{{2, Rational(1, 2)}, {4, Rational(1, 2)}}));
  EXPECT_NEAR(a.efficiency, 0.9882, 5e-5);

  const auto b = solve(OrbitSpace(6, 0, 6));
  EXPECT_EQ(b.construction, Construction::ThreeOrbit);
  EXPECT_EQ(*b.design.exact_weights(), (W{{0, Rational(1, 12)}, {3, Rational(5, 6)}, {6, Rational(1, 12)}}));
  EXPECT_EQ(b.efficiency, 1.0);

  const auto c = solve(OrbitSpace(1, 0, 1));
  EXPECT_EQ(c.construction, Construction::TrivialK1);
  EXPECT_EQ(*c.design.exact_weights(), (W{{0, Rational(1, 2)}, {1, Rational(1, 2)}}));

  EXPECT_EQ(solve(OrbitSpace(4, 1, 3)).construction, Construction::BoundaryTwoOrbit);
}

TEST(Solve, CertificateHoldsForAllSmallInstances) {
  for (const auto& s : all_spaces(2, 16)) {
    const auto r = solve(s);
    const double p = s.parameters();
    EXPECT_TRUE(r.certificate.pass);
    EXPECT_LE(r.certificate.max_sensitivity, p + 1e-9);
    for (int k : r.design.support()) EXPECT_NEAR(r.certificate.sensitivity.at(k), p, 1e-9);
    for (const auto& [k, slack] : r.certificate.slack_per_orbit) EXPECT_GE(slack, -1e-9);
  }
}

// Under narrow margins E(2k-K)^2 stays below K, so m1 = m2 = 0 is out of reach.
TEST(Solve, NarrowCaseCannotReachZeroMoments) {
  std::mt19937_64 rng(17);
  for (const auto& s : all_spaces(2, 12)) {
    if (region_case(s).tag != RegionTag::Narrow) continue;
    const int K = s.factors();
    const int bound = (K - 2 * s.lower()) * (2 * s.upper() - K);
    for (int trial = 0; trial < 200; ++trial) {
      const OrbitDesign d(s, testing::random_rational_weights(rng, s));
      const auto m = design_moments_exact(d);
      EXPECT_FALSE(m.m1 == Rational(0) && m.m2 == Rational(0));
      if (m.m1 == Rational(0)) {
        Rational second(0);
        for (const auto& [k, w] : *d.exact_weights()) second += w * Rational((2 * k - K) * (2 * k - K));
        EXPECT_LE(second, Rational(bound));
        EXPECT_LT(second, Rational(K));
      }
    }
  }
}

TEST(Solve, DominatesRandomDesigns) {
  std::mt19937_64 rng(4242);
  for (int instance = 0; instance < 20; ++instance) {
    const auto s = testing::random_space(rng, 2, 12);
    const double best = det_information(solve(s).design);
    for (int trial = 0; trial < 10000; ++trial) {
      const OrbitDesign d(s, testing::random_weights(rng, s));
      EXPECT_LE(det_information(d), best * (1.0 + 1e-12));
    }
  }
}

}  // namespace
}  // namespace rfd
