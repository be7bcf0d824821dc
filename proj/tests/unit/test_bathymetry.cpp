#include "bouss/bathymetry.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace bouss;

namespace {

std::vector<Bathymetry> presets() {
  return {Bathymetry::decaying_bump(0.01, 2.0, 1.0), Bathymetry::smooth_switch(0.02, 1.5, 1.0, 3.0, -2.0),
          Bathymetry::ripple(0.01, 3.0, 0.7, 0.5), Bathymetry::static_sech(0.01, 2.0)};
}

double max_diff(const Field& a, const Field& b) { return (a - b).max_abs(); }

}  // namespace

TEST(Bathymetry, FlatSamplesAreZero) {
  const auto g = make_grid(10, 64);
  for (double t : {0.0, 1.0, 37.5}) {
    const auto s = sample(Bathymetry::flat_bottom(), g, t);
    EXPECT_TRUE(s.flat);
    for (const Field* f : {&s.h, &s.hx, &s.ht, &s.htt, &s.htx, &s.httx, &s.htxx, &s.httxx})
      EXPECT_EQ(f->max_abs(), 0.0);
  }
}

TEST(Bathymetry, DecayingBumpEnvelope) {
  const auto g = make_grid(10, 128);
  const auto b = Bathymetry::decaying_bump(0.01);
  const auto s = sample(b, g, 0.7);
  EXPECT_LT(max_diff(s.ht, -1.0 * s.h), 1e-18);
  EXPECT_LT(max_diff(s.htt, s.h), 1e-18);
  EXPECT_NEAR(b.value(0.7, 0.0), 0.01 * std::exp(-0.7), 1e-17);
}

TEST(Bathymetry, EvenBumpHasZeroSlopeAtCrest) {
  const auto b = Bathymetry::decaying_bump(0.01);
  EXPECT_EQ(b.shape(0.0)[1], 0.0);
  const auto g = make_grid(10, 128);  // x = 0 is node N/2
  EXPECT_EQ(sample(b, g, 2.0).hx[64], 0.0);
}

TEST(Bathymetry, NegativeTimeIsRejected) {
  const auto g = make_grid(10, 64);
  EXPECT_THROW(sample(Bathymetry::decaying_bump(0.01), g, -0.5), std::domain_error);
}

TEST(Bathymetry, InvalidShapesAreRejected) {
  EXPECT_THROW(Bathymetry::decaying_bump(0.01, 0.0), std::invalid_argument);
  EXPECT_THROW(Bathymetry::smooth_switch(0.01, 1.0, 3.0, 2.0), std::invalid_argument);
}

TEST(Bathymetry, PresetNamesRoundTrip) {
  for (auto p : {BathymetryPreset::flat, BathymetryPreset::decaying_bump, BathymetryPreset::smooth_switch,
                 BathymetryPreset::ripple, BathymetryPreset::static_sech})
    EXPECT_EQ(parse_preset(preset_name(p)), p);
  EXPECT_THROW(parse_preset("tsunami"), std::invalid_argument);
}

TEST(Bathymetry, TimeDerivativesMatchCentredDifferencesAtSecondOrder) {
  const auto g = make_grid(20, 256);
  for (const auto& b : presets()) {
    const double t = 1.8;
    double prev1 = 0, prev2 = 0;
    for (double tau : {1e-2, 5e-3}) {
      const auto m = sample(b, g, t - tau), c = sample(b, g, t), p = sample(b, g, t + tau);
      const double e1 = max_diff((1.0 / (2 * tau)) * (p.h - m.h), c.ht);
      const double e2 = max_diff((1.0 / (tau * tau)) * (p.h - 2.0 * c.h + m.h), c.htt);
      const double e3 = max_diff((1.0 / (2 * tau)) * (p.htx - m.htx), c.httx);
      const double e4 = max_diff((1.0 / (2 * tau)) * (p.htxx - m.htxx), c.httxx);
      if (b.preset == BathymetryPreset::static_sech) {
        EXPECT_EQ(e1 + e2 + e3 + e4, 0.0);
        continue;
      }
      EXPECT_LT(e3, 1e-5);
      EXPECT_LT(e4, 1e-5);
      if (prev1 > 0) {
        EXPECT_NEAR(prev1 / e1, 4.0, 0.2) << preset_name(b.preset);
        EXPECT_NEAR(prev2 / e2, 4.0, 0.2) << preset_name(b.preset);
      }
      prev1 = e1;
      prev2 = e2;
    }
  }
}

TEST(Bathymetry, SpaceDerivativesMatchSpectralDerivatives) {
  // Box wide enough that every profile is below 1e-20 at the seam.
  const auto g = make_grid(120, 4096);
  for (const auto& b : presets()) {
    const auto s = sample(b, g, 1.5);
    const double scale = std::max(1e-300, s.h.max_abs());
    EXPECT_LT(max_diff(deriv(s.h), s.hx), 1e-9 * scale) << preset_name(b.preset);
    EXPECT_LT(max_diff(deriv(s.ht), s.htx), 1e-9 * std::max(scale, s.ht.max_abs())) << preset_name(b.preset);
    EXPECT_LT(max_diff(deriv(s.htx), s.htxx), 1e-9 * std::max(scale, s.ht.max_abs())) << preset_name(b.preset);
    EXPECT_LT(max_diff(deriv(s.htt), s.httx), 1e-9 * std::max(scale, s.htt.max_abs())) << preset_name(b.preset);
  }
}

TEST(Bathymetry, SwitchIsConstantBeforeAndZeroAfter) {
  const auto b = Bathymetry::smooth_switch(0.02, 1.0, 1.0, 3.0);
  EXPECT_EQ(b.envelope(0.5)[0], 0.02);
  EXPECT_EQ(b.envelope(0.5)[1], 0.0);
  EXPECT_EQ(b.envelope(3.5)[0], 0.0);
  // C^2 joins at both ends
  EXPECT_NEAR(b.envelope(1.0 + 1e-9)[1], 0.0, 1e-12);
  EXPECT_NEAR(b.envelope(3.0 - 1e-9)[2], 0.0, 1e-7);
}

TEST(Hypotheses, FlatBottomHasZeroNormsAndPasses) {
  const auto g = make_grid(20, 128);
  const auto r = hypothesis_report(Bathymetry::flat_bottom(), g, 10.0, 1.0, 1e-3);
  EXPECT_EQ(r.smallness_sum, 0.0);
  EXPECT_EQ(r.l1_hx_linf, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(Hypotheses, DecayingBumpTimeIntegralHasClosedForm) {
  // int_0^T ||d_t h||_{H^1} dt = eps ||sech^2||_{H^1} (1 - e^{-T}), with
  // ||sech^2||_{H^1}^2 = int sech^4 + 4 sech^4 tanh^2 = 4/3 + 16/15 = 12/5.
  const auto g = make_grid(20 * std::numbers::pi, 2048);
  const double eps = 0.01, T = 5.0;
  const auto r = hypothesis_report(Bathymetry::decaying_bump(eps), g, T, 10.0, eps);
  const double expected = eps * std::sqrt(2.4) * (1 - std::exp(-T));
  EXPECT_NEAR(r.l1_ht_h1, expected, 1e-9);
  EXPECT_NEAR(r.l1_htt_h1, expected, 1e-9);
  EXPECT_NEAR(r.w2inf_h1, 3 * eps * std::sqrt(2.4), 1e-12);
  EXPECT_TRUE(r.smallness_ok);
}

TEST(Hypotheses, StaticBottomSlopeNormGrowsLinearly) {
  // ||d_x h||_{L^1_t L^inf_x} = T eps max|sech' | = T eps / 2 for a unit-width sech.
  const auto g = make_grid(20, 4096);
  const double eps = 0.01;
  const auto b = Bathymetry::static_sech(eps);
  for (double T : {10.0, 100.0, 1000.0}) {
    const auto r = hypothesis_report(b, g, T, 1.0, eps);
    EXPECT_NEAR(r.l1_hx_linf, 0.5 * eps * T, 2e-4 * eps * T);  // node spacing misses the peak slightly
  }
  EXPECT_TRUE(hypothesis_report(b, g, 10.0, 1.0, eps).slope_ok);
  EXPECT_FALSE(hypothesis_report(b, g, 1000.0, 1.0, eps).slope_ok);
}

TEST(Hypotheses, NormsAreNondecreasingInHorizon) {
  const auto g = make_grid(20, 256);
  for (const auto& b : presets()) {
    // Sampled sup and Simpson sums move with the time grid; the switch is
    // only C^2, so allow a relative slack at quadrature accuracy.
    HypothesisReport prev;
    for (double T : {1.0, 2.0, 4.0, 8.0}) {
      const auto r = hypothesis_report(b, g, T, 1.0, 0.01);
      EXPECT_GE(r.w2inf_h1, prev.w2inf_h1 * (1 - 2e-4));
      EXPECT_GE(r.l1_ht_h1, prev.l1_ht_h1 * (1 - 2e-4));
      EXPECT_GE(r.l1_htt_h1, prev.l1_htt_h1 * (1 - 2e-4));
      EXPECT_GE(r.l1_hx_linf, prev.l1_hx_linf * (1 - 2e-4));
      prev = r;
    }
  }
}

TEST(Hypotheses, RejectsOddIntervalCount) {
  const auto g = make_grid(20, 64);
  EXPECT_THROW(hypothesis_report(Bathymetry::flat_bottom(), g, 1.0, 1.0, 1.0, 7), std::invalid_argument);
  EXPECT_THROW(hypothesis_report(Bathymetry::flat_bottom(), g, 0.0, 1.0, 1.0), std::invalid_argument);
}
