#pragma once
// Pseudospectral RK4 integration of
//   eta_t = a u_x - (1+a) T u_x - T (u (eta + h))_x + T (-1 + a1 d_xx) h_t
//   u_t   = c eta_x - (1+c) T eta_x - (1/2) T (u^2)_x + c1 T h_ttx
// with T = (1 - d_xx)^{-1}.

#include "bouss/bathymetry.hpp"
#include "bouss/grid.hpp"
#include "bouss/initial_data.hpp"
#include "bouss/params.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace bouss {

enum class AbortReason { cfl, non_finite, blow_up };

inline const char* abort_name(AbortReason r) {
  switch (r) {
    case AbortReason::cfl: return "cfl";
    case AbortReason::non_finite: return "non-finite";
    case AbortReason::blow_up: return "blow-up";
  }
  return "?";
}

class RunAborted : public std::runtime_error {
 public:
  RunAborted(AbortReason r, double t, const std::string& what)
      : std::runtime_error(what), reason_(r), t_(t) {}
  AbortReason reason() const { return reason_; }
  double time() const { return t_; }

 private:
  AbortReason reason_;
  double t_;
};

struct Tendency {
  Field eta_t;
  Field u_t;
};

/// Linear dispersion relation omega(k) = k sqrt((1 - a k^2)(1 - c k^2)) / (1 + k^2).
inline double dispersion_omega(const AbcdParams& p, double k) {
  return k * std::sqrt((1.0 - p.a * k * k) * (1.0 - p.c * k * k)) / (1.0 + k * k);
}

/// max |d omega / dk| over the resolved wavenumbers, by centered differences.
inline double max_group_speed(const AbcdParams& p, const Grid& g) {
  double best = 0.0;
  const int half = g.size() / 2;
  for (int m = 0; m <= half; ++m) {
    const double k = std::numbers::pi * m / g.half_length();
    const double dk = 1e-6 * std::max(1.0, k);
    const double v = (dispersion_omega(p, k + dk) - dispersion_omega(p, k - dk)) / (2.0 * dk);
    best = std::max(best, std::abs(v));
  }
  return best;
}

/// Right-hand side of the inverted system, evaluated in one spectral pass.
inline Tendency rhs(const State& s, const BathymetrySamples& bs, const AbcdParams& p) {
  require_same_grid(s.eta, s.u);
  require_same_grid(s.u, bs.h);
  const GridPtr& g = s.u.grid();
  const auto& k = g->symbol_wavenumbers();

  const Spectrum U = forward(s.u);
  const Spectrum E = forward(s.eta);
  const Field depth = bs.flat ? s.eta : s.eta + bs.h;
  const Spectrum N1 = dealiased_product_spectrum(s.u, depth);
  const Spectrum N2 = dealiased_product_spectrum(s.u, s.u);

  Spectrum de(U.size()), du(U.size());
  Spectrum Fe, Fu;
  if (!bs.flat) {
    Fe = forward(p.a1 * bs.htxx - bs.ht);
    Fu = forward(p.c1 * bs.httx);
  }
  for (std::size_t m = 0; m < U.size(); ++m) {
    const Complex ik(0.0, k[m]);
    const double T = helmholtz_symbol(k[m]);
    de[m] = (p.a * ik - (1.0 + p.a) * T * ik) * U[m] - T * ik * N1[m];
    du[m] = (p.c * ik - (1.0 + p.c) * T * ik) * E[m] - 0.5 * T * ik * N2[m];
    if (!bs.flat) {
      de[m] += T * Fe[m];
      du[m] += T * Fu[m];
    }
  }
  return {inverse(g, std::move(de)), inverse(g, std::move(du))};
}

/// One model instance: parameters, bottom and grid.
class Model {
 public:
  Model(AbcdParams p, const Bathymetry& b, GridPtr g) : p_(p), sampler_(b, g), grid_(std::move(g)) {}

  const AbcdParams& params() const { return p_; }
  const GridPtr& grid() const { return grid_; }
  const BathymetrySampler& bottom() const { return sampler_; }
  BathymetrySamples sample(double t) const { return sampler_.sample(t); }

  Tendency rhs_at(const State& s) const { return rhs(s, sampler_.sample(s.t), p_); }

  /// Classical RK4 step; bottom sampled at t, t + dt/2, t + dt.
  State step_rk4(const State& s, double dt) const {
    const double t = s.t;
    const BathymetrySamples b0 = sampler_.sample(t);
    const BathymetrySamples bh = sampler_.sample(t + 0.5 * dt);
    const BathymetrySamples b1 = sampler_.sample(t + dt);
    const Tendency k1 = rhs(s, b0, p_);
    const Tendency k2 = rhs({s.eta + (0.5 * dt) * k1.eta_t, s.u + (0.5 * dt) * k1.u_t, t + 0.5 * dt}, bh, p_);
    const Tendency k3 = rhs({s.eta + (0.5 * dt) * k2.eta_t, s.u + (0.5 * dt) * k2.u_t, t + 0.5 * dt}, bh, p_);
    const Tendency k4 = rhs({s.eta + dt * k3.eta_t, s.u + dt * k3.u_t, t + dt}, b1, p_);
    State out;
    out.eta = s.eta + (dt / 6.0) * (k1.eta_t + 2.0 * k2.eta_t + 2.0 * k3.eta_t + k4.eta_t);
    out.u = s.u + (dt / 6.0) * (k1.u_t + 2.0 * k2.u_t + 2.0 * k3.u_t + k4.u_t);
    out.t = t + dt;
    return out;
  }

 private:
  AbcdParams p_;
  BathymetrySampler sampler_;
  GridPtr grid_;
};

struct RunSettings {
  double dt = 1e-3;
  double t_end = 1.0;
  double cfl = 0.5;
  int every = 1;                  // observer cadence in steps
  double blowup_factor = 10.0;
  double blowup_floor = 0.1;      // reference norm used when the initial norm is below it
};

/// Number of steps between t0 and t_end; throws unless the span is a whole
/// number of steps.
inline long step_count(double t0, double t_end, double dt) {
  if (!(dt != 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be nonzero");
  const double span = (t_end - t0) / dt;
  if (!(span > 0.0)) throw std::invalid_argument("t_end must lie ahead of t0 in the direction of dt");
  const long n = std::lround(span);
  if (std::abs(span - static_cast<double>(n)) > 1e-6) throw std::invalid_argument("t_end - t0 must be a multiple of dt");
  return n;
}

inline void check_cfl(const Model& m, double dt, double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("CFL factor must lie in (0,1]");
  const double speed = max_group_speed(m.params(), *m.grid());
  const double limit = cfl * m.grid()->spacing() / speed;
  if (std::abs(dt) > limit)
    throw RunAborted(AbortReason::cfl, 0.0,
                     "dt = " + std::to_string(std::abs(dt)) + " exceeds CFL limit " + std::to_string(limit));
}

/// Observer gets each emitted state and its step index; return false to stop early.
using Observer = std::function<bool(const State&, long)>;

/// Integrates from s0 to t_end. The observer sees step 0, every `every`-th
/// step, and the final step. Returns the final state.
inline State run(const Model& m, State s, const RunSettings& rs, const Observer& observe = {}) {
  if (rs.every < 1) throw std::invalid_argument("observer cadence must be >= 1");
  check_cfl(m, rs.dt, rs.cfl);
  const long n = step_count(s.t, rs.t_end, rs.dt);
  const double t0 = s.t;
  const double norm0 = h1_pair_norm(s);
  const double guard = rs.blowup_factor * std::max(norm0, rs.blowup_floor);
  if (observe && !observe(s, 0)) return s;
  for (long i = 1; i <= n; ++i) {
    s = m.step_rk4(s, rs.dt);
    s.t = t0 + static_cast<double>(i) * rs.dt;
    if (!s.eta.all_finite() || !s.u.all_finite())
      throw RunAborted(AbortReason::non_finite, s.t, "non-finite values at t = " + std::to_string(s.t));
    const bool emit = (i % rs.every == 0) || i == n;
    if (emit || i % 64 == 0) {
      const double nrm = h1_pair_norm(s);
      if (nrm > guard)
        throw RunAborted(AbortReason::blow_up, s.t,
                         "H1xH1 norm " + std::to_string(nrm) + " exceeded guard " + std::to_string(guard) +
                             " at t = " + std::to_string(s.t));
    }
    if (emit && observe && !observe(s, i)) break;
  }
  return s;
}

}  // namespace bouss
