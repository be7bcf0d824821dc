#pragma once
// Moving-bottom presets h(t,x) = eps * T(t) * X(x) with closed-form
// derivatives, grid sampling, and the bottom hypothesis audit.

#include "bouss/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bouss {

enum class BathymetryPreset { flat, decaying_bump, smooth_switch, ripple, static_sech };

inline const char* preset_name(BathymetryPreset p) {
  switch (p) {
    case BathymetryPreset::flat: return "flat";
    case BathymetryPreset::decaying_bump: return "bump";
    case BathymetryPreset::smooth_switch: return "switch";
    case BathymetryPreset::ripple: return "ripple";
    case BathymetryPreset::static_sech: return "static";
  }
  return "?";
}

inline BathymetryPreset parse_preset(const std::string& s) {
  for (auto p : {BathymetryPreset::flat, BathymetryPreset::decaying_bump, BathymetryPreset::smooth_switch,
                 BathymetryPreset::ripple, BathymetryPreset::static_sech})
    if (s == preset_name(p)) return p;
  throw std::invalid_argument("unknown bathymetry preset '" + s + "'");
}

/// h and the seven derivatives the model and the diagnostics need, at one time.
struct BathymetrySamples {
  double t = 0.0;
  bool flat = true;
  Field h, hx, ht, htt, htx, httx, htxx, httxx;
};

/// Closed-form bottom.
///   bump:   eps e^{-(t-t_ref)} sech^2((x-x0)/w)
///   switch: eps s(t) sech^2((x-x0)/w), s = 1 on [0,t1], 0 after t2, C^2 quintic ramp
///   ripple: eps e^{-(t-t_ref)} cos(k0 (x-x0)) sech^2((x-x0)/w)
///   static: eps sech((x-x0)/w)
/// t_ref shifts the exponential envelope so runs starting at t0 > 0 see an
/// O(eps) bottom.
class Bathymetry {
 public:
  BathymetryPreset preset = BathymetryPreset::flat;
  double epsilon = 0.0;
  double x0 = 0.0;
  double width = 1.0;
  double t_ref = 0.0;
  double t1 = 1.0;
  double t2 = 2.0;
  double k0 = 1.0;

  static Bathymetry flat_bottom() { return {}; }
  static Bathymetry decaying_bump(double eps, double width = 1.0, double x0 = 0.0, double t_ref = 0.0) {
    Bathymetry b;
    b.preset = BathymetryPreset::decaying_bump;
    b.epsilon = eps;
    b.width = width;
    b.x0 = x0;
    b.t_ref = t_ref;
    return b.validated();
  }
  static Bathymetry smooth_switch(double eps, double width, double t1, double t2, double x0 = 0.0) {
    Bathymetry b;
    b.preset = BathymetryPreset::smooth_switch;
    b.epsilon = eps;
    b.width = width;
    b.t1 = t1;
    b.t2 = t2;
    b.x0 = x0;
    return b.validated();
  }
  static Bathymetry ripple(double eps, double width, double k0, double x0 = 0.0, double t_ref = 0.0) {
    Bathymetry b;
    b.preset = BathymetryPreset::ripple;
    b.epsilon = eps;
    b.width = width;
    b.k0 = k0;
    b.x0 = x0;
    b.t_ref = t_ref;
    return b.validated();
  }
  static Bathymetry static_sech(double eps, double width = 1.0, double x0 = 0.0) {
    Bathymetry b;
    b.preset = BathymetryPreset::static_sech;
    b.epsilon = eps;
    b.width = width;
    b.x0 = x0;
    return b.validated();
  }

  friend bool operator==(const Bathymetry&, const Bathymetry&) = default;

  bool is_flat() const { return preset == BathymetryPreset::flat || epsilon == 0.0; }

  const Bathymetry& validated() const {
    if (!(width > 0.0)) throw std::invalid_argument("bathymetry width must be positive");
    if (preset == BathymetryPreset::smooth_switch && !(t2 > t1 && t1 >= 0.0))
      throw std::invalid_argument("switch bathymetry needs 0 <= t1 < t2");
    return *this;
  }

  /// eps * T^{(order)}(t), order 0..2.
  std::array<double, 3> envelope(double t) const {
    switch (preset) {
      case BathymetryPreset::flat: return {0.0, 0.0, 0.0};
      case BathymetryPreset::static_sech: return {epsilon, 0.0, 0.0};
      case BathymetryPreset::decaying_bump:
      case BathymetryPreset::ripple: {
        const double e = epsilon * std::exp(-(t - t_ref));
        return {e, -e, e};
      }
      case BathymetryPreset::smooth_switch: {
        if (t <= t1) return {epsilon, 0.0, 0.0};
        if (t >= t2) return {0.0, 0.0, 0.0};
        const double d = t2 - t1;
        const double s = (t - t1) / d;
        const double p = s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
        const double p1 = 30.0 * s * s * (1.0 - s) * (1.0 - s);
        const double p2 = 60.0 * s * (1.0 - 3.0 * s + 2.0 * s * s);
        return {epsilon * (1.0 - p), -epsilon * p1 / d, -epsilon * p2 / (d * d)};
      }
    }
    return {0.0, 0.0, 0.0};
  }

  /// X, X', X'' at x.
  std::array<double, 3> shape(double x) const {
    const double y = (x - x0) / width;
    const double w = width;
    if (preset == BathymetryPreset::static_sech) {
      const double s = 1.0 / std::cosh(y), th = std::tanh(y);
      return {s, -s * th / w, s * (2.0 * th * th - 1.0) / (w * w)};
    }
    const double sech = 1.0 / std::cosh(y);
    const double S = sech * sech, th = std::tanh(y);
    const double S1 = -2.0 * S * th / w;
    const double S2 = S * (6.0 * th * th - 2.0) / (w * w);
    if (preset == BathymetryPreset::ripple) {
      const double cs = std::cos(k0 * (x - x0)), sn = std::sin(k0 * (x - x0));
      return {cs * S, -k0 * sn * S + cs * S1, -k0 * k0 * cs * S - 2.0 * k0 * sn * S1 + cs * S2};
    }
    if (preset == BathymetryPreset::flat) return {0.0, 0.0, 0.0};
    return {S, S1, S2};
  }

  /// Pointwise h(t,x) (for tests and probes).
  double value(double t, double x) const {
    return envelope(t)[0] * shape(x)[0];
  }
};

/// Samples a bottom on one grid. Shapes are cached at construction so each
/// time sample only rescales them.
class BathymetrySampler {
 public:
  BathymetrySampler(Bathymetry b, GridPtr grid) : b_(b), grid_(std::move(grid)) {
    const auto& x = grid_->nodes();
    for (auto& s : shape_) s = Eigen::ArrayXd::Zero(x.size());
    if (b_.is_flat()) return;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const auto v = b_.shape(x[j]);
      for (int o = 0; o < 3; ++o) shape_[o][j] = v[o];
    }
  }

  const Bathymetry& bathymetry() const { return b_; }
  const GridPtr& grid() const { return grid_; }

  BathymetrySamples sample(double t) const {
    if (t < -1e-9) throw std::domain_error("bathymetry sampled at negative time");
    BathymetrySamples s;
    s.t = t;
    s.flat = b_.is_flat();
    const auto e = s.flat ? std::array<double, 3>{0.0, 0.0, 0.0} : b_.envelope(t);
    auto mk = [&](double env, int o) { return Field(grid_, env * shape_[o]); };
    s.h = mk(e[0], 0);
    s.hx = mk(e[0], 1);
    s.ht = mk(e[1], 0);
    s.htt = mk(e[2], 0);
    s.htx = mk(e[1], 1);
    s.httx = mk(e[2], 1);
    s.htxx = mk(e[1], 2);
    s.httxx = mk(e[2], 2);
    return s;
  }

 private:
  Bathymetry b_;
  GridPtr grid_;
  std::array<Eigen::ArrayXd, 3> shape_;
};

inline BathymetrySamples sample(const Bathymetry& b, const GridPtr& g, double t) {
  return BathymetrySampler(b, g).sample(t);
}

struct HypothesisReport {
  double t_max = 0.0;
  double C = 0.0;
  double epsilon = 0.0;
  double w2inf_h1 = 0.0;     // sum_{j<=2} sup_t ||d_t^j h||_{H^1}
  double l1_ht_h1 = 0.0;     // int ||d_t h||_{H^1} dt
  double l1_htt_h1 = 0.0;    // int ||d_t^2 h||_{H^1} dt
  double l1_hx_linf = 0.0;   // int ||d_x h||_{L^inf} dt
  double smallness_sum = 0.0;
  bool smallness_ok = false;
  bool slope_ok = false;
  bool pass = false;
};

/// Evaluates the bottom hypotheses on [0, t_max] by composite Simpson
/// quadrature with step 1e-3 t_max.
inline HypothesisReport hypothesis_report(const Bathymetry& b, const GridPtr& g, double t_max, double C,
                                          double epsilon, int intervals = 1000) {
  if (!(t_max > 0.0)) throw std::invalid_argument("audit horizon must be positive");
  if (intervals < 2 || intervals % 2 != 0) throw std::invalid_argument("Simpson needs an even interval count");
  HypothesisReport r;
  r.t_max = t_max;
  r.C = C;
  r.epsilon = epsilon;
  const BathymetrySampler sampler(b, g);
  const Grid& grid = *g;
  auto h1 = [&](const Field& f, const Field& fx) {
    return std::sqrt(integrate(f.values().square() + fx.values().square(), grid));
  };
  const double dt = t_max / intervals;
  std::array<double, 3> sup{0.0, 0.0, 0.0};
  double q_ht = 0.0, q_htt = 0.0, q_hx = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double t = dt * i;
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const BathymetrySamples s = sampler.sample(t);
    const double n0 = h1(s.h, s.hx), n1 = h1(s.ht, s.htx), n2 = h1(s.htt, s.httx);
    sup[0] = std::max(sup[0], n0);
    sup[1] = std::max(sup[1], n1);
    sup[2] = std::max(sup[2], n2);
    q_ht += w * n1;
    q_htt += w * n2;
    q_hx += w * s.hx.max_abs();
  }
  r.w2inf_h1 = sup[0] + sup[1] + sup[2];
  r.l1_ht_h1 = q_ht * dt / 3.0;
  r.l1_htt_h1 = q_htt * dt / 3.0;
  r.l1_hx_linf = q_hx * dt / 3.0;
  r.smallness_sum = r.w2inf_h1 + r.l1_ht_h1 + r.l1_htt_h1;
  r.smallness_ok = r.smallness_sum <= C * epsilon;
  r.slope_ok = r.l1_hx_linf <= C;
  r.pass = r.smallness_ok && r.slope_ok;
  return r;
}

}  // namespace bouss
