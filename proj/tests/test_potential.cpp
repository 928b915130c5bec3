#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "marsupial/potential.hpp"
#include "oracles.hpp"

using namespace marsupial;

TEST(EvalP, ZeroAtBoundaryDistance) {
  Params p;
  EXPECT_EQ(eval_P(0.0, p.bc(), p), 0.0);
}

TEST(EvalP, ReferenceValue) {
  // (0 - 16)(0 + 1)(0 - 2 + 1) = 16
  EXPECT_DOUBLE_EQ(eval_P(0.0, 16.0, Params{}), 16.0);
}

TEST(EvalP, VanishesAtOuterRoot) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int i = 0; i < 100; ++i) {
    const double s = u(rng);
    EXPECT_EQ(eval_P(s, s, Params{}), 0.0);
  }
}

TEST(EvalP, MatchesExpandedPolynomial) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  Params p;
  p.k_p = 1.7;
  p.b = 5.0;
  p.c = 0.6;
  p.d = 2.2;
  for (int i = 0; i < 500; ++i) {
    const double r = u(rng), s = u(rng);
    const double ref = oracle::eval_expanded(r, s, p);
    EXPECT_NEAR(eval_P(r, s, p), ref, 1e-9 * std::max(1.0, std::abs(ref)));
  }
}

TEST(EvalP, AtZeroDistanceIsParabolaInEtc) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 40.0);
  Params p;
  for (int i = 0; i < 200; ++i) {
    const double s = u(rng);
    const double v = eval_P(0.0, s, p);
    EXPECT_NEAR(v, p.k_p * p.d * s * (s / p.b - p.c), 1e-12 * std::max(1.0, std::abs(v)));
    EXPECT_EQ(v >= 0.0, s >= p.bc());
  }
}

TEST(EvalP, ZerosAreExactForRandomParams) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> gain(0.1, 5.0), bb(1.01, 12.0), len(0.1, 3.0),
      dist(0.0, 60.0);
  for (int i = 0; i < 500; ++i) {
    Params p;
    p.k_p = gain(rng);
    p.b = bb(rng);
    p.c = len(rng);
    p.d = len(rng);
    const double s = dist(rng);
    for (double root : {-p.d, s / p.b - p.c, s}) EXPECT_LE(std::abs(eval_P(root, s, p)), 1e-10);
  }
}

TEST(Equilibria, ThreeDistinct) {
  const auto eq = equilibria(16.0, Params{});
  EXPECT_EQ(eq.root_neg, -1.0);
  EXPECT_EQ(eq.root_mid, 1.0);
  EXPECT_EQ(eq.root_outer, 16.0);
  EXPECT_EQ(eq.regime, EquilibriumRegime::ThreeDistinct);
}

TEST(Equilibria, MidAtZero) {
  const auto eq = equilibria(8.0, Params{});
  EXPECT_EQ(eq.root_neg, -1.0);
  EXPECT_EQ(eq.root_mid, 0.0);
  EXPECT_EQ(eq.root_outer, 8.0);
  EXPECT_EQ(eq.regime, EquilibriumRegime::MidAtZero);
}

TEST(Equilibria, MidNegative) {
  const auto eq = equilibria(4.0, Params{});
  EXPECT_DOUBLE_EQ(eq.root_mid, -0.5);
  EXPECT_EQ(eq.regime, EquilibriumRegime::MidNegative);
}

TEST(Equilibria, RegimeTolerance) {
  Params p;
  EXPECT_EQ(equilibria(8.0 + 4e-12, p).regime, EquilibriumRegime::MidAtZero);
  EXPECT_EQ(equilibria(8.0 + 1e-9, p).regime, EquilibriumRegime::ThreeDistinct);
  EXPECT_EQ(equilibria(8.0 - 1e-9, p).regime, EquilibriumRegime::MidNegative);
  EXPECT_STREQ(to_string(EquilibriumRegime::MidAtZero), "mid_at_zero");
}

TEST(Equilibria, OrderingAndCompanionRoots) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> bb(1.01, 12.0), len(0.1, 3.0), dist(0.5, 60.0);
  for (int i = 0; i < 300; ++i) {
    Params p;
    p.b = bb(rng);
    p.c = len(rng);
    p.d = len(rng);
    const double s = dist(rng);
    const auto eq = equilibria(s, p);
    EXPECT_LT(eq.root_neg, 0.0);
    EXPECT_LT(eq.root_mid, eq.root_outer);
    const auto coeffs = oracle::expanded_cubic(s, p);
    auto roots = oracle::cubic_roots(coeffs);
    std::vector<double> mine = {eq.root_neg, eq.root_mid, eq.root_outer};
    std::sort(mine.begin(), mine.end());
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(oracle::polish_root(roots[k], coeffs), mine[k], 1e-8) << "s=" << s;
    }
  }
}

TEST(Equilibria, MiddleRootShrinksToZeroAsCarrierApproaches) {
  Params p;
  double prev = std::numeric_limits<double>::infinity();
  for (double s = 30.0; s >= p.bc(); s -= 0.01) {
    const double mid = equilibria(s, p).root_mid;
    EXPECT_LT(mid, prev);
    prev = mid;
  }
  EXPECT_EQ(equilibria(p.bc(), p).root_mid, 0.0);
}

TEST(SweepP, SignPatternThreeDistinct) {
  const double grid[] = {0.5, 8.0};
  const auto out = sweep_P(16.0, grid, Params{});
  EXPECT_GT(out[0].value, 0.0);
  EXPECT_LT(out[1].value, 0.0);
}

TEST(SweepP, ZeroAtOuterRoot) {
  const double grid[] = {16.0};
  EXPECT_EQ(sweep_P(16.0, grid, Params{})[0].value, 0.0);
}

TEST(SweepP, NegativeThroughoutAtBoundaryDistance) {
  const auto grid = linspace(0.0, 8.0, 1002);
  const auto out = sweep_P(8.0, std::span(grid).subspan(1, 1000), Params{});
  for (const auto& s : out) EXPECT_LT(s.value, 0.0) << s.e_pc_norm;
}

TEST(SweepP, SignMatchesRegime) {
  Params p;
  for (double s : {4.0, 8.0, 12.0, 16.0, 26.0}) {
    const auto eq = equilibria(s, p);
    const auto grid = linspace(0.0, s, 400);
    for (const auto& smp : sweep_P(s, std::span(grid).first(399), p)) {
      if (eq.regime == EquilibriumRegime::ThreeDistinct && smp.e_pc_norm <= eq.root_mid) {
        EXPECT_GE(smp.value, 0.0);
      } else if (eq.regime == EquilibriumRegime::ThreeDistinct) {
        EXPECT_LT(smp.value, 0.0);
      } else {
        EXPECT_LE(smp.value, 0.0);
      }
    }
  }
}

TEST(SweepP, Csv) {
  const double grid[] = {0.0, 16.0};
  std::ostringstream os;
  write_sweep_csv(os, sweep_P(16.0, grid, Params{}));
  EXPECT_EQ(os.str(), "e_pc_norm,P\n0,16\n16,0\n");
}

TEST(Linspace, Endpoints) {
  const auto g = linspace(0.0, 1.0, 11);
  ASSERT_EQ(g.size(), 11u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_DOUBLE_EQ(g[3], 0.3);
  EXPECT_TRUE(linspace(0, 1, 0).empty());
}
