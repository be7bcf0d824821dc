#pragma once
// Helpers shared by the unit and acceptance tests.

#include "bouss/diagnostics.hpp"
#include "bouss/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace bouss::support {

inline double rel(double got, double want, double floor = 1.0) {
  return std::abs(got - want) / std::max(floor, std::abs(want));
}

/// Snapshot functional values along an RK4 trajectory, stored every step.
template <class Fn>
std::vector<double> along(const Model& m, State s, double dt, int steps, Fn&& fn) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  const double t0 = s.t;
  out.push_back(fn(s));
  for (int i = 1; i <= steps; ++i) {
    s = m.step_rk4(s, dt);
    s.t = t0 + i * dt;
    out.push_back(fn(s));
  }
  return out;
}

/// Advances `steps` RK4 steps.
inline State advance(const Model& m, State s, double dt, int steps) {
  const double t0 = s.t;
  for (int i = 1; i <= steps; ++i) {
    s = m.step_rk4(s, dt);
    s.t = t0 + i * dt;
  }
  return s;
}

/// Random band-limited field tapered to vanish at the periodic seam.
inline Field localized_field(const GridPtr& g, int max_mode, std::uint64_t seed) {
  return localized_random_state(g, 1.0, max_mode, seed).u;
}

}  // namespace bouss::support
