#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "conepoint/controller.hpp"
#include "conepoint/errors.hpp"

using namespace conepoint;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

PointingGeometry geometry(const Vec3& boresight, const Vec3& goal) {
  PointingGeometry g;
  g.boresight = boresight;
  g.goal = goal;
  return g;
}

double cosine(const Vec3& a, const Vec3& b) { return a.dot(b) / (a.norm() * b.norm()); }

// max over u >= 0 of u (1 - tanh u), by golden-section search.
double compensation_constant() {
  auto f = [](double u) { return u - u * std::tanh(u); };
  double a = 0.0, b = 5.0;
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int k = 0; k < 200; ++k) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    (f(c) > f(d) ? b : a) = (f(c) > f(d) ? d : c);
  }
  return f(0.5 * (a + b));
}

struct RuleFixture {
  ControllerConfig controller;
  EnvelopeConfig envelope;
  std::vector<ObstacleCone> cones;
  std::vector<SwitchConfig> switches;
  Vec3 goal = Vec3(-0.866, 0.5, 0.0).normalized();

  explicit RuleFixture(const Vec3& f) {
    cones.emplace_back(f.normalized(), 20 * kDeg, 30 * kDeg, 22 * kDeg, 1.5e-4, 0.004);
    switches.push_back(SwitchConfig::for_cone(cones[0], 0.01, 5, 2, 0.5));
  }
  ValidationReport run(double theta_df = 50 * kDeg, double x_e0 = 1.0) const {
    ValidationInputs in{controller, envelope, cones, switches};
    in.goal_inertial = goal;
    in.initial_pointing_error = x_e0;
    in.theta_df = theta_df;
    return validate_config(in);
  }
};

bool failed(const ValidationReport& r, const std::string& rule) {
  for (const auto& f : r.failures()) {
    if (f.rule == rule) return true;
  }
  return false;
}

}  // namespace

TEST(VirtualLaw, HandValueAtRightAngle) {
  ControllerConfig cfg;
  // B = z, r = x: r×B = −y, x_e = 1.
  const auto g = geometry(Vec3::UnitZ(), Vec3::UnitX());
  const Vec3 v = virtual_law(g, 0.5, 2.0, 0.0, cfg);
  EXPECT_LT((v - Vec3(0, cfg.K1 / (1 + cfg.sigma), 0)).norm(), 1e-15);
  // That rate drives x_e down: ẋ_e = (r×B)·ω.
  EXPECT_LT(Vec3::UnitX().cross(Vec3::UnitZ()).dot(v), 0.0);
}

TEST(VirtualLaw, ApfBranchHandValue) {
  ControllerConfig cfg;
  const auto g = geometry(Vec3::UnitZ(), Vec3::UnitX());
  const Vec3 p1 = cfg.k_a * Vec3(0, -1, 0);
  EXPECT_LT((apf_direction(g, cfg.k_a) - p1).norm(), 1e-16);
  const Vec3 v = virtual_law(g, 0.3, 1.0, 1.0, cfg);
  EXPECT_LT((v + p1 / (p1.squaredNorm() + cfg.sigma) * cfg.K_p).norm(), 1e-15);
  EXPECT_LT((benchmark_virtual_law(g, cfg) - v).norm(), 1e-16);
}

TEST(VirtualLaw, PpcSharesAttractionDirection) {
  ControllerConfig cfg;
  std::mt19937 rng(5);
  std::normal_distribution<double> n;
  for (int k = 0; k < 200; ++k) {
    const Vec3 goal = Vec3(n(rng), n(rng), n(rng)).normalized();
    const auto g = geometry(Vec3::UnitZ(), goal);
    const double x_e = g.pointing_error();
    const Vec3 ppc = virtual_law(g, x_e / 0.8, 0.8, 0.0, cfg);
    const Vec3 apf = virtual_law(g, 0.0, 1.0, 1.0, cfg);
    if (ppc.norm() > 1e-12 && apf.norm() > 1e-12) EXPECT_NEAR(cosine(ppc, apf), 1.0, 1e-9);
  }
}

TEST(VirtualLaw, FiniteThroughAlignment) {
  ControllerConfig cfg;
  double prev = 1e9;
  for (double a : {1e-1, 1e-3, 1e-5, 1e-8, 0.0}) {
    const auto g = geometry(Vec3::UnitZ(), Vec3(std::sin(a), 0, std::cos(a)));
    const Vec3 v = virtual_law(g, g.pointing_error() / 0.1, 0.1, 0.0, cfg);
    EXPECT_TRUE(v.allFinite());
    EXPECT_LE(v.norm(), prev);
    prev = v.norm();
    const Vec3 u = torque_law({UnitQuaternion(), Vec3::Zero()}, g, {g.pointing_error() / 0.1, 0.1},
                              SpacecraftParams(Mat3::Identity() * 5, 0.5, 0.09), cfg);
    EXPECT_TRUE(u.allFinite());
  }
  EXPECT_EQ(prev, 0.0);
}

TEST(MinSinThetaD, Examples) {
  const double P0 = std::cos(30 * kDeg), P1 = std::cos(25 * kDeg);
  EXPECT_NEAR(min_sin_theta_d(50 * kDeg, P0, P1), std::sin(20 * kDeg), 1e-15);
  // Upper end binds when the band reaches almost the whole sphere.
  EXPECT_NEAR(min_sin_theta_d(100 * kDeg, std::cos(95 * kDeg), std::cos(10 * kDeg)), std::sin(5 * kDeg), 1e-15);
  EXPECT_THROW(min_sin_theta_d(25 * kDeg, P0, P1), InvalidParameter);
  EXPECT_THROW(min_sin_theta_d(50 * kDeg, P1, P0), InvalidParameter);
}

TEST(TrackingDifferentiator, FollowsRamp) {
  ControllerConfig cfg;
  TdState s;
  const double a = 0.01, dt = 0.01;
  Vec3 u = Vec3::Zero();
  for (int k = 0; k < 1500; ++k) {
    u = Vec3::Constant(a * k * dt);
    s = td_step(s, u, dt, cfg);
  }
  // Steady ramp: x2 = a and a1 tanh(x1 - u) = -a2 tanh(a / R).
  const double lag = std::atanh(-cfg.td_a2 * std::tanh(a / cfg.td_R) / cfg.td_a1);
  // The input is held over each step, so the derivative ripples by a fraction of a.
  EXPECT_LT((s.x2 - Vec3::Constant(a)).cwiseAbs().maxCoeff(), 0.01 * a);
  EXPECT_LT((s.x1 - u - Vec3::Constant(lag)).cwiseAbs().maxCoeff(), a * dt);
}

TEST(TrackingDifferentiator, SettlesOnStep) {
  ControllerConfig cfg;
  TdState s;
  const Vec3 target(0.2, -0.1, 0.05);
  double peak = 0.0;
  for (int k = 0; k < 2000; ++k) {
    s = td_step(s, target, 0.01, cfg);
    peak = std::max(peak, s.x2.cwiseAbs().maxCoeff());
  }
  EXPECT_LT((s.x1 - target).norm(), 1e-9);
  EXPECT_LT(s.x2.norm(), 1e-9);
  EXPECT_LT(peak, cfg.td_R);
}

TEST(TrackingDifferentiator, RhsByHand) {
  ControllerConfig cfg;
  cfg.td_a1 = 1.5;
  const TdState s{Vec3(0.1, 0, 0), Vec3(0, 2.0, 0)};
  const TdState d = td_rhs(s, Vec3::Zero(), cfg);
  const double R = cfg.td_R;
  EXPECT_EQ(d.x1, s.x2);
  EXPECT_NEAR(d.x2.x(), -R * R * 1.5 * std::tanh(0.1), 1e-12);
  EXPECT_NEAR(d.x2.y(), -R * R * cfg.td_a2 * std::tanh(2.0 / R), 1e-12);
}

TEST(Torque, ComponentsClampedToLimit) {
  ControllerConfig cfg;
  const SpacecraftParams sc(Vec3(5.08, 5.14, 5.0).asDiagonal(), 0.5, 0.09);
  std::mt19937 rng(9);
  std::normal_distribution<double> n;
  for (int k = 0; k < 500; ++k) {
    const Vec3 goal = Vec3(n(rng), n(rng), n(rng)).normalized();
    const auto g = geometry(Vec3::UnitZ(), goal);
    TorqueInputs in{0.9, 0.3, 0.0, 0.0, 3.0 * Vec3(n(rng), n(rng), n(rng)), Vec3(n(rng), n(rng), n(rng))};
    const Vec3 u = torque_law({UnitQuaternion(), Vec3(n(rng), n(rng), n(rng))}, g, in, sc, cfg);
    EXPECT_LE(u.cwiseAbs().maxCoeff(), 0.5);
  }
  EXPECT_EQ(saturate(Vec3(1.0, -0.2, -3.0), 0.5), Vec3(0.5, -0.2, -0.5));
}

TEST(Torque, HandValueModeOne) {
  ControllerConfig cfg;
  const SpacecraftParams sc(Vec3(2, 3, 4).asDiagonal(), 100.0, 0.05);
  const BodyState st{UnitQuaternion(), Vec3(0.1, 0.2, 0.3)};
  const auto g = geometry(Vec3::UnitZ(), Vec3::UnitX());
  const TorqueInputs in{0.4, 2.0, 0.0, 0.0, Vec3(1e-3, 0, -2e-3), Vec3(0.01, 0.02, 0.03)};
  const Mat3 J = sc.inertia();
  Vec3 expect = st.omega.cross(J * st.omega) - cfg.K_omega.cwiseProduct(in.e2) -
                0.05 * Vec3(std::tanh(1e-3 / cfg.eta), 0, std::tanh(-2e-3 / cfg.eta)) + J * in.sd_dot;
  expect -= cfg.g * std::tanh(0.4 / cfg.F) / 2.0 * Vec3(0, -1, 0);
  EXPECT_LT((torque_law_unsaturated(st, g, in, sc, cfg) - expect).norm(), 1e-15);
}

TEST(Torque, AntipodalKick) {
  ControllerConfig cfg;
  const SpacecraftParams sc(Mat3::Identity(), 0.5, 0.0);
  const auto g = geometry(Vec3::UnitZ(), -Vec3::UnitZ());
  const Vec3 u = torque_law({UnitQuaternion(), Vec3::Zero()}, g, {0.0, 3.0}, sc, cfg);
  EXPECT_NEAR(u.x(), kAntipodalKick * 0.5, 1e-15);
  EXPECT_EQ(u.y(), 0.0);
  EXPECT_EQ(u.z(), 0.0);
}

TEST(Torque, BenchmarkIsFullApfBranch) {
  ControllerConfig cfg;
  const SpacecraftParams sc(Mat3::Identity() * 5, 0.5, 0.09);
  const BodyState st{UnitQuaternion(), Vec3(0.01, 0, 0)};
  const auto g = geometry(Vec3::UnitZ(), Vec3(1, 1, 1).normalized());
  const Vec3 e2(1e-3, 2e-3, 0), sd(0, 0, 1e-3);
  TorqueInputs in{0.7, 1.0, 1.0, 1.0, e2, sd};
  EXPECT_EQ(benchmark_apf_law(st, g, e2, sd, sc, cfg), torque_law(st, g, in, sc, cfg));
}

TEST(Compensation, TanhBoundHolds) {
  const double c = compensation_constant();
  EXPECT_NEAR(c, 0.2785, 1e-4);
  const double Dm = 0.09, eta = 2e-4;
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> e(-5 * eta, 5 * eta), d(-Dm, Dm);
  double worst = -1.0;
  for (int k = 0; k < 100000; ++k) {
    const Vec3 e2(e(rng), e(rng), e(rng)), dist(d(rng), d(rng), d(rng));
    const double lhs = e2.dot(dist) - Dm * e2.dot((e2 / eta).array().tanh().matrix());
    worst = std::max(worst, lhs);
    EXPECT_LE(lhs, 3 * c * Dm * eta + 1e-18);
  }
  // Three axes give 0.8355 D_m η in total, rounded up.
  EXPECT_LE(3 * c, 0.8355);
  EXPECT_NEAR(3 * c, 0.8355, 2e-4);
  // The bound is attained at |e2_i| = u* η with d aligned to e2.
  double u_star = 0.0;
  for (double u = 0.0, best = -1.0; u < 5.0; u += 1e-5) {
    const double f = u - u * std::tanh(u);
    if (f > best) best = f, u_star = u;
  }
  const Vec3 e2 = Vec3(1, -1, 1) * u_star * eta, dist = Vec3(1, -1, 1) * Dm;
  const double lhs = e2.dot(dist) - Dm * e2.dot((e2 / eta).array().tanh().matrix());
  EXPECT_NEAR(lhs, 3 * c * Dm * eta, 1e-9 * Dm * eta);
  EXPECT_GT(worst, 0.0);
}

TEST(Validation, AllRulesSatisfied) {
  const RuleFixture fx(Vec3(0.5145, 0.8575, 0));
  const auto r = fx.run();
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.failures().empty());
}

TEST(Validation, K1EqualToKRhoFails) {
  RuleFixture fx(Vec3(0.5145, 0.8575, 0));
  fx.controller.K1 = fx.envelope.k_rho;
  EXPECT_TRUE(failed(fx.run(), "k1_exceeds_k_rho"));
}

TEST(Validation, GoalTooCloseToObstacleFails) {
  const RuleFixture fx(Vec3(-0.336, 0.842, 0.421));
  const auto r = fx.run();
  EXPECT_TRUE(failed(r, "obstacle[0].goal_separation"));
  EXPECT_FALSE(failed(fx.run(40 * kDeg), "obstacle[0].goal_separation"));
}

TEST(Validation, InitialErrorOutsideEnvelopeFails) {
  const RuleFixture fx(Vec3(0.5145, 0.8575, 0));
  EXPECT_TRUE(failed(fx.run(50 * kDeg, 3.5), "initial_inside_envelope"));
}

TEST(Validation, SlopeGainBelowCriticalFails) {
  RuleFixture fx(Vec3(0.5145, 0.8575, 0));
  fx.cones[0] = ObstacleCone(fx.cones[0].direction(), 20 * kDeg, 30 * kDeg, 22 * kDeg, 1e-3, 0.004);
  EXPECT_TRUE(failed(fx.run(), "obstacle[0].slope_bound"));
}

TEST(Validation, WeakAttractionWarns) {
  RuleFixture fx(Vec3(0.5145, 0.8575, 0));
  fx.controller.k_a = 1e-3;
  const auto r = fx.run();
  EXPECT_TRUE(r.ok());
  bool warned = false;
  for (const auto& w : r.warnings()) warned |= w.rule == "obstacle[0].attraction_gain_bound";
  EXPECT_TRUE(warned);
}

TEST(Validation, NonPositiveGainFails) {
  RuleFixture fx(Vec3(0.5145, 0.8575, 0));
  fx.controller.eta = 0.0;
  EXPECT_TRUE(failed(fx.run(), "gains_positive"));
}
