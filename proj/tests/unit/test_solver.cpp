#include "bouss/solver.hpp"

#include "../support/test_support.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <numbers>

using namespace bouss;
using std::numbers::pi;

namespace {

double state_distance(const State& a, const State& b) {
  return std::max((a.eta - b.eta).max_abs(), (a.u - b.u).max_abs());
}

}  // namespace

TEST(Rhs, ZeroStateFlatBottomGivesZeroTendency) {
  const auto g = make_grid(pi, 32);
  const auto bs = sample(Bathymetry::flat_bottom(), g, 0.0);
  const Tendency d = rhs(zero_state(g), bs, AbcdParams::direct(-0.4, -0.6));
  EXPECT_EQ(d.eta_t.max_abs(), 0.0);
  EXPECT_EQ(d.u_t.max_abs(), 0.0);
}

TEST(Rhs, CosineVelocityHandComputation) {
  // a = -1, eta = 0, u = cos x: eta_t = sin x, u_t = -T d_x(cos^2 x)/2 = sin(2x)/10.
  const auto g = make_grid(pi, 32);
  State s{Field(g), Field::from_function(g, [](double x) { return std::cos(x); }), 0.0};
  const Tendency d = rhs(s, sample(Bathymetry::flat_bottom(), g, 0.0), AbcdParams::direct(-1, -0.5));
  for (Eigen::Index j = 0; j < d.eta_t.size(); ++j) {
    const double x = g->nodes()[j];
    EXPECT_NEAR(d.eta_t[j], std::sin(x), 1e-14);
    EXPECT_NEAR(d.u_t[j], std::sin(2 * x) / 10, 1e-15);
  }
}

TEST(Rhs, PureForcingFromBottom) {
  const auto g = make_grid(20, 256);
  const auto p = AbcdParams::direct(-0.5, -0.7, 0.3, 0.8);
  const auto bs = sample(Bathymetry::decaying_bump(0.05, 2.0), g, 0.4);
  const Tendency d = rhs(zero_state(g), bs, p);
  const Field fe = helmholtz_inverse(p.a1 * bs.htxx - bs.ht);
  const Field fu = helmholtz_inverse(p.c1 * bs.httx);
  EXPECT_LT((d.eta_t - fe).max_abs(), 1e-16);
  EXPECT_LT((d.u_t - fu).max_abs(), 1e-16);
}

TEST(GroupSpeed, MinusOnesGiveUnitSpeed) {
  const auto g = make_grid(50, 512);
  EXPECT_NEAR(max_group_speed(AbcdParams::direct(-1, -1), *g), 1.0, 1e-8);
}

TEST(GroupSpeed, SmallCoefficientsStayBelowOne) {
  const auto g = make_grid(pi, 1024);
  const double v = max_group_speed(AbcdParams::direct(-1e-6, -1e-6), *g);
  EXPECT_LE(v, 1.0 + 1e-9);
  EXPECT_GT(v, 0.99);  // long waves travel at speed 1
}

TEST(GroupSpeed, TendsToSqrtAcAtHighWavenumber) {
  for (auto [a, c] : {std::pair{-0.25, -1.0}, std::pair{-0.125, -0.5}, std::pair{-1.0 / 48, -1.0 / 48}}) {
    const auto p = AbcdParams::direct(a, c);
    const double k = 3000, dk = 1e-3;
    const double v = (dispersion_omega(p, k + dk) - dispersion_omega(p, k - dk)) / (2 * dk);
    EXPECT_NEAR(v, std::sqrt(a * c), 1e-5);
    EXPECT_TRUE(std::isfinite(max_group_speed(p, *make_grid(pi, 4096))));
  }
}

TEST(StepCount, WholeStepsOnly) {
  EXPECT_EQ(step_count(0, 1, 0.1), 10);
  EXPECT_EQ(step_count(11, 61, 1e-3), 50000);
  EXPECT_EQ(step_count(1, 0, -0.25), 4);
  EXPECT_THROW(step_count(0, 1, 0.3), std::invalid_argument);
  EXPECT_THROW(step_count(0, 1, 0.0), std::invalid_argument);
  EXPECT_THROW(step_count(1, 0, 0.1), std::invalid_argument);
}

TEST(Run, ZeroDataFlatBottomStaysZero) {
  const auto g = make_grid(10, 64);
  const Model m(AbcdParams::direct(-0.5, -0.5), Bathymetry::flat_bottom(), g);
  RunSettings rs;
  rs.dt = 0.01;
  rs.t_end = 1.0;
  const State out = run(m, zero_state(g), rs, [](const State& s, long) {
    EXPECT_EQ(s.eta.max_abs(), 0.0);
    EXPECT_EQ(s.u.max_abs(), 0.0);
    return true;
  });
  EXPECT_DOUBLE_EQ(out.t, 1.0);
}

TEST(Run, LinearSingleModeTravelsAtUnitSpeed) {
  // a = c = -1 linearizes to eta_t = -u_x, u_t = -eta_x; eta = u = A cos k(x - t).
  const auto g = make_grid(pi, 64);
  const Model m(AbcdParams::direct(-1, -1), Bathymetry::flat_bottom(), g);
  const double A = 1e-8, T = 5.0;
  const int mode = 3;
  RunSettings rs;
  rs.dt = 1e-2;
  rs.t_end = T;
  const State out = run(m, single_mode_state(g, A, mode), rs);
  const double k = pi * mode / pi;
  const Field exact = Field::from_function(g, [&](double x) { return A * std::cos(k * (x - T)); });
  // RK4 phase error ~ T k^5 dt^4 / 120 relative, plus O(A) nonlinear drift
  EXPECT_LT((out.eta - exact).max_abs(), 1e-6 * A);
  EXPECT_LT((out.u - exact).max_abs(), 1e-6 * A);
}

TEST(Run, FourthOrderSelfConvergence) {
  const auto g = make_grid(20, 128);
  const Model m(AbcdParams::direct(-0.5, -0.7, 0.2, 0.3), Bathymetry::decaying_bump(0.05, 2.0), g);
  const State s0 = gaussian_state(g, 0.3, 2.0, 0.5);
  const double T = 2.0;
  const State ref = support::advance(m, s0, T / 640, 640);
  double prev = 0;
  for (int n : {20, 40, 80}) {
    const double err = state_distance(support::advance(m, s0, T / n, n), ref);
    if (prev > 0) {
      EXPECT_NEAR(prev / err, 16.0, 1.5) << n;
    }
    prev = err;
  }
}

TEST(Run, FlatBottomIsReversible) {
  const auto g = make_grid(20, 128);
  const Model m(AbcdParams::direct(-1, -1), Bathymetry::flat_bottom(), g);
  const State s0 = gaussian_state(g, 0.1, 2.0, 1.0);
  double prev = 0;
  for (double dt : {0.05, 0.025}) {
    RunSettings fwd;
    fwd.dt = dt;
    fwd.t_end = 2.0;
    RunSettings back = fwd;
    back.dt = -dt;
    back.t_end = 0.0;
    const State out = run(m, run(m, s0, fwd), back);
    const double err = state_distance(out, s0);
    EXPECT_LT(err, 1e-6);
    if (prev > 0) {
      EXPECT_GT(prev / err, 10.0);
    }
    prev = err;
  }
}

TEST(Run, ObserverCadence) {
  const auto g = make_grid(10, 32);
  const Model m(AbcdParams::direct(-1, -1), Bathymetry::flat_bottom(), g);
  RunSettings rs;
  rs.dt = 0.1;
  rs.t_end = 2.5;  // 25 steps
  rs.every = 10;
  std::vector<long> seen;
  run(m, gaussian_state(g, 0.01, 1, 1), rs, [&](const State&, long i) {
    seen.push_back(i);
    return true;
  });
  EXPECT_EQ(seen, (std::vector<long>{0, 10, 20, 25}));
}

TEST(Run, TimesAreComputedNotAccumulated) {
  const auto g = make_grid(10, 32);
  const Model m(AbcdParams::direct(-1, -1), Bathymetry::flat_bottom(), g);
  RunSettings rs;
  rs.dt = 0.1;
  rs.t_end = 11.0;
  run(m, gaussian_state(g, 0.01, 1, 1, 0, 1.0), rs, [&](const State& s, long i) {
    EXPECT_EQ(s.t, 1.0 + static_cast<double>(i) * 0.1);
    return true;
  });
}

TEST(Run, CflViolationAborts) {
  const auto g = make_grid(10, 64);
  const Model m(AbcdParams::direct(-1, -1), Bathymetry::flat_bottom(), g);
  RunSettings rs;
  rs.dt = 1.0;
  rs.t_end = 1.0;
  try {
    run(m, zero_state(g), rs);
    FAIL() << "expected CFL abort";
  } catch (const RunAborted& e) {
    EXPECT_EQ(e.reason(), AbortReason::cfl);
  }
}

TEST(Run, NonFiniteStateAborts) {
  const auto g = make_grid(10, 64);
  const Model m(AbcdParams::direct(-1, -1), Bathymetry::flat_bottom(), g);
  State s = zero_state(g);
  s.u.values()[3] = std::numeric_limits<double>::quiet_NaN();
  RunSettings rs;
  rs.dt = 0.01;
  rs.t_end = 0.1;
  try {
    run(m, s, rs);
    FAIL() << "expected non-finite abort";
  } catch (const RunAborted& e) {
    EXPECT_EQ(e.reason(), AbortReason::non_finite);
  }
}

TEST(Run, BlowUpGuardTrips) {
  // A huge bottom pumps energy into zero data; the guard reference is the 0.1 floor.
  const auto g = make_grid(20, 128);
  const Model m(AbcdParams::direct(-1, -1, 0, 1), Bathymetry::smooth_switch(50.0, 1.0, 0.0, 1.0), g);
  RunSettings rs;
  rs.dt = 0.01;
  rs.t_end = 1.0;
  try {
    run(m, zero_state(g), rs);
    FAIL() << "expected blow-up abort";
  } catch (const RunAborted& e) {
    EXPECT_EQ(e.reason(), AbortReason::blow_up);
    EXPECT_GT(e.time(), 0.0);
  }
}

TEST(Run, SmallDataStayBounded) {
  const auto g = make_grid(64 * pi, 512);
  const Model m(AbcdParams::direct(-1, -1), Bathymetry::decaying_bump(1e-3, 2.0), g);
  const State s0 = gaussian_state(g, 1e-2, 2.0, 1.0);
  const double n0 = h1_pair_norm(s0);
  double sup = 0;
  RunSettings rs;
  rs.dt = 0.05;
  rs.t_end = 40;
  run(m, s0, rs, [&](const State& s, long) {
    sup = std::max(sup, h1_pair_norm(s));
    return true;
  });
  EXPECT_LE(sup, 4 * n0);
}

TEST(Run, Deterministic) {
  const auto g = make_grid(30, 256);
  const Model m(AbcdParams::direct(-0.5, -0.4, 0.1, 0.2), Bathymetry::ripple(0.01, 2.0, 1.0), g);
  RunSettings rs;
  rs.dt = 0.02;
  rs.t_end = 1.0;
  const State a = run(m, random_state(g, 0.1, 30, 9), rs);
  const State b = run(m, random_state(g, 0.1, 30, 9), rs);
  EXPECT_EQ(0, std::memcmp(a.u.values().data(), b.u.values().data(), sizeof(double) * a.u.size()));
  EXPECT_EQ(0, std::memcmp(a.eta.values().data(), b.eta.values().data(), sizeof(double) * a.eta.size()));
}
