#pragma once
// Initial-data presets for (eta, u).

#include "bouss/grid.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace bouss {

struct State {
  Field eta;
  Field u;
  double t = 0.0;
};

/// sqrt(||eta||_{H^1}^2 + ||u||_{H^1}^2).
inline double h1_pair_norm(const State& s) {
  const double e = h1_norm(s.eta), u = h1_norm(s.u);
  return std::sqrt(e * e + u * u);
}

/// (f, g) = (T u, T eta).
inline CanonicalPair canonical_pair(const State& s) { return {helmholtz_inverse(s.u), helmholtz_inverse(s.eta)}; }

inline State zero_state(const GridPtr& g, double t = 0.0) { return {Field(g), Field(g), t}; }

/// (eta, u) = eps (e^{-(x-x0)^2/w^2}, beta e^{-(x-x0)^2/w^2}).
inline State gaussian_state(const GridPtr& g, double eps, double width, double beta, double x0 = 0.0,
                            double t = 0.0) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be positive");
  const Eigen::ArrayXd bump = (-((g->nodes() - x0) / width).square()).exp();
  return {Field(g, eps * bump), Field(g, eps * beta * bump), t};
}

/// (eta, u) = amp (cos(k x), beta cos(k x)) with k = pi m / L.
inline State single_mode_state(const GridPtr& g, double amp, int mode, double beta = 1.0, double t = 0.0) {
  if (mode < 0 || mode >= g->size() / 2) throw std::invalid_argument("mode index out of the resolved range");
  const double k = std::numbers::pi * mode / g->half_length();
  const Eigen::ArrayXd c = (k * g->nodes()).cos();
  return {Field(g, amp * c), Field(g, amp * beta * c), t};
}

/// Field with independent normal Fourier coefficients on modes 1..max_mode,
/// mode amplitudes damped by 1/(1 + (m/max_mode)^2).
inline Field random_band_limited(const GridPtr& g, int max_mode, std::mt19937_64& rng) {
  if (max_mode < 1 || max_mode >= g->size() / 2) throw std::invalid_argument("band limit out of range");
  std::normal_distribution<double> n01(0.0, 1.0);
  Spectrum s(g->spectrum_size(), Complex(0.0, 0.0));
  for (int m = 1; m <= max_mode; ++m) {
    const double damp = 1.0 / (1.0 + (static_cast<double>(m) / max_mode) * (static_cast<double>(m) / max_mode));
    const double re = n01(rng), im = n01(rng);
    s[m] = Complex(re, im) * damp;
  }
  Field f = inverse(g, std::move(s));
  const double peak = f.max_abs();
  if (peak > 0.0) f *= 1.0 / peak;
  return f;
}

/// Random band-limited pair scaled to H^1 x H^1 norm eps.
inline State random_state(const GridPtr& g, double eps, int max_mode, std::uint64_t seed, double t = 0.0) {
  std::mt19937_64 rng(seed);
  State s{random_band_limited(g, max_mode, rng), random_band_limited(g, max_mode, rng), t};
  const double n = h1_pair_norm(s);
  if (n > 0.0) {
    s.eta *= eps / n;
    s.u *= eps / n;
  }
  return s;
}

/// Random pair tapered by e^{-(x/w)^2}, w = L/5 for the half-length L, so it
/// vanishes at the periodic seam to ~1e-11. Needed wherever a tanh weight enters, since
/// tanh(x/lambda) jumps by 2 across the seam. Scaled to H^1 x H^1 norm eps.
inline State localized_random_state(const GridPtr& g, double eps, int max_mode, std::uint64_t seed, double t = 0.0) {
  State s = random_state(g, 1.0, max_mode, seed, t);
  const double w = 0.2 * g->half_length();
  const Eigen::ArrayXd taper = (-(g->nodes() / w).square()).exp();
  s.eta = Field(g, s.eta.values() * taper);
  s.u = Field(g, s.u.values() * taper);
  const double n = h1_pair_norm(s);
  if (n > 0.0) {
    s.eta *= eps / n;
    s.u *= eps / n;
  }
  return s;
}

}  // namespace bouss
