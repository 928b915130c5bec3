#include <random>

#include <gtest/gtest.h>

#include "marsupial/control.hpp"
#include "marsupial/potential.hpp"
#include "oracles.hpp"

using namespace marsupial;

namespace {

Vec v2(double a, double b) { return Eigen::Vector2d(a, b); }

ErrorTriple errors(Vec e_pc, Vec e_tc) {
  ErrorTriple e;
  e.e_pc = std::move(e_pc);
  e.e_tc = std::move(e_tc);
  e.e_pt = e.e_pc - e.e_tc;
  return e;
}

}  // namespace

TEST(CarrierInput, AttachedDrivesTowardTarget) {
  const auto u = carrier_input(errors(v2(0, 0), v2(16, 0)), AttachmentMode::Attached, Params{});
  EXPECT_EQ(u, v2(8, 0));
}

TEST(CarrierInput, StopsAfterSeparation) {
  const auto u = carrier_input(errors(v2(1, 0), v2(7, 0)), AttachmentMode::Separated, Params{});
  EXPECT_EQ(u, v2(0, 0));
}

TEST(CarrierInput, ZeroErrorZeroInput) {
  EXPECT_EQ(carrier_input(errors(v2(0, 0), v2(0, 0)), AttachmentMode::Attached, Params{}), v2(0, 0));
}

TEST(CarrierInput, ContinuePolicyUsesPlanner) {
  CarrierPolicy policy{CarrierPolicyKind::ContinueWithFrozenEtc,
                       [](const ErrorTriple&, double t) { return Vec(v2(0, t)); }};
  const auto e = errors(v2(1, 0), v2(7, 0));
  EXPECT_EQ(carrier_input(e, AttachmentMode::Separated, Params{}, policy, 2.5), v2(0, 2.5));
  // still k_c e_tc while attached
  EXPECT_EQ(carrier_input(e, AttachmentMode::Attached, Params{}, policy, 2.5), v2(3.5, 0));
  // default planner keeps the carrier still
  CarrierPolicy idle{CarrierPolicyKind::ContinueWithFrozenEtc, {}};
  EXPECT_EQ(carrier_input(e, AttachmentMode::Separated, Params{}, idle), v2(0, 0));
  CarrierPolicy wrong{CarrierPolicyKind::ContinueWithFrozenEtc,
                      [](const ErrorTriple&, double) { return Vec(Eigen::Vector3d::Zero()); }};
  EXPECT_THROW(carrier_input(e, AttachmentMode::Separated, Params{}, wrong), ConfigurationError);
}

TEST(PassengerInput, RidesWhilePositive) {
  const Vec u_c = v2(8, 0);
  const auto out = passenger_input(errors(v2(0, 0), v2(16, 0)), u_c, Params{});
  EXPECT_EQ(out.P_value, 16.0);
  EXPECT_EQ(out.branch, Branch::AttachedBranch);
  EXPECT_EQ(out.u_p, u_c);  // bitwise
}

TEST(PassengerInput, BoundaryKeepsBothBranchesEqual) {
  const Vec u_c = v2(4, 0);
  const auto out = passenger_input(errors(v2(0, 0), v2(8, 0)), u_c, Params{});
  EXPECT_EQ(out.P_value, 0.0);
  EXPECT_EQ(out.u_p, u_c);
  EXPECT_EQ(relative_input(out), v2(0, 0));
}

TEST(PassengerInput, SeparatedBranchHandValue) {
  // e_pc = (0.1, 0), ||e_tc|| = 7.9, e_pt = (-7.8, 0):
  // P = (0.1 - 7.9)(1.1)(0.1 - 0.9875 + 1) = -0.96525
  const Vec u_c = v2(0.3, -0.2);
  const auto out = passenger_input(errors(v2(0.1, 0), v2(7.9, 0)), u_c, Params{});
  EXPECT_NEAR(out.P_value, -0.96525, 1e-12);
  EXPECT_EQ(out.branch, Branch::SeparatedBranch);
  const Vec rel = relative_input(out);
  EXPECT_NEAR(rel[0], 7.529, 5e-4);
  EXPECT_NEAR(rel[0], 7.52895, 1e-12);
  EXPECT_NEAR(rel[1], 0.0, 1e-15);
}

TEST(PassengerInput, FrozenDistanceReplacesLiveOne) {
  const auto e = errors(v2(0.1, 0), v2(30, 0));  // live value would give P > 0
  const auto live = passenger_input(e, v2(0, 0), Params{});
  const auto frozen = passenger_input(e, v2(0, 0), Params{}, 7.9);
  EXPECT_EQ(live.branch, Branch::AttachedBranch);
  EXPECT_NEAR(frozen.P_value, -0.96525, 1e-12);
}

TEST(PassengerInput, BranchConsistencyRandom) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 2000; ++i) {
    const auto e = errors(oracle::random_vec(rng, 3, -3, 3), oracle::random_vec(rng, 3, -20, 20));
    const Vec u_c = oracle::random_vec(rng, 3, -5, 5);
    const auto out = passenger_input(e, u_c, Params{});
    EXPECT_EQ(out.branch == Branch::AttachedBranch, out.P_value >= 0.0);
    const Vec expect = out.P_value >= 0.0 ? Vec(-out.P_value * e.e_pc) : Vec(out.P_value * e.e_pt);
    EXPECT_LE((relative_input(out) - expect).norm(), 1e-12 * std::max(1.0, expect.norm()));
  }
}

TEST(PassengerInput, RelativeInputContinuousAcrossSwitch) {
  // Walk ||e_tc|| through bc with the passenger on the carrier. The relative
  // input is bounded by |P| times the larger of ||e_pc||, ||e_pt||.
  Params p;
  for (double s = 8.5; s >= 7.5; s -= 1e-3) {
    const auto e = errors(v2(0, 0), v2(s, 0));
    const auto out = passenger_input(e, v2(1, 1), p);
    const double L = std::max(e.e_pc.norm(), e.e_pt.norm());
    EXPECT_LE(relative_input(out).norm(), std::abs(out.P_value) * L * (1 + 1e-12));
  }
  // The one-sided limits both vanish at the surface.
  const double eps = 1e-9;
  const auto above = passenger_input(errors(v2(0, 0), v2(8 + eps, 0)), v2(0, 0), p);
  const auto below = passenger_input(errors(v2(0, 0), v2(8 - eps, 0)), v2(0, 0), p);
  EXPECT_LE(relative_input(above).norm(), 1e-7);
  EXPECT_LE(relative_input(below).norm(), 1e-7);
}

TEST(PassengerInput, AttachedFixedPointIsBitwise) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> far(8.0, 40.0);
  for (int i = 0; i < 500; ++i) {
    const auto e = errors(Vec::Zero(3), oracle::random_vec(rng, 3, -1, 1).normalized() * far(rng));
    const Vec u_c = oracle::random_vec(rng, 3, -10, 10);
    const auto out = passenger_input(e, u_c, Params{});
    ASSERT_GE(out.P_value, 0.0);
    EXPECT_TRUE((out.u_p.array() == u_c.array()).all());
  }
}

TEST(Baseline, RidesBeforeTrigger) {
  Params p;
  const auto out = baseline_event_controller(errors(v2(0, 0), v2(16, 0)), AttachmentMode::Attached, p);
  EXPECT_EQ(out.u_c, v2(8, 0));
  EXPECT_EQ(relative_input(out), v2(0, 0));
}

TEST(Baseline, JumpAtTrigger) {
  Params p;
  const auto before =
      baseline_event_controller(errors(v2(0, 0), v2(8 + 1e-9, 0)), AttachmentMode::Attached, p);
  const auto after =
      baseline_event_controller(errors(v2(0, 0), v2(8, 0)), AttachmentMode::Attached, p);
  EXPECT_EQ(after.u_c, v2(0, 0));
  EXPECT_EQ(after.u_p, v2(8, 0));  // -k_nav e_pt with e_pt = (-8, 0)
  EXPECT_NEAR((relative_input(after) - relative_input(before)).norm(), 8.0, 1e-12);
}

TEST(Baseline, PassengerOnTargetRests) {
  const auto e = errors(v2(3, 4), v2(3, 4));  // e_pt = 0
  const auto out = baseline_event_controller(e, AttachmentMode::Separated, Params{});
  EXPECT_EQ(out.u_p, v2(0, 0));
}

TEST(Baseline, GainScalesJump) {
  const auto out =
      baseline_event_controller(errors(v2(0, 0), v2(6, 0)), AttachmentMode::Separated, Params{}, 2.5);
  EXPECT_EQ(out.u_p, v2(15, 0));
}
