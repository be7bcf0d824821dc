#pragma once
// Energies, momentum, virial functionals and their rate laws, the virial
// decomposition, the local energy, decay metrics, and finite-difference
// residuals along trajectories.

#include "bouss/bathymetry.hpp"
#include "bouss/dispersion.hpp"
#include "bouss/grid.hpp"
#include "bouss/initial_data.hpp"
#include "bouss/params.hpp"
#include "bouss/solver.hpp"
#include "bouss/weights.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bouss {

/// A rate law split into named integral groups.
struct TermList {
  std::vector<std::pair<std::string, double>> terms;

  void add(std::string name, double v) { terms.emplace_back(std::move(name), v); }
  double total() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.second;
    return s;
  }
  /// Sum of |term|, the natural scale for relative residuals.
  double magnitude() const {
    double s = 0.0;
    for (const auto& t : terms) s += std::abs(t.second);
    return s;
  }
  double at(const std::string& name) const {
    for (const auto& t : terms)
      if (t.first == name) return t.second;
    throw std::out_of_range("no term named " + name);
  }
};

namespace detail {

inline Field T(const Field& f) { return helmholtz_inverse(f); }

// T applied to the dealiased product a*b, optionally after d/dx.
inline Field T_prod(const Field& a, const Field& b, int order = 0) {
  const GridPtr& g = a.grid();
  const auto& k = g->symbol_wavenumbers();
  Spectrum s = dealiased_product_spectrum(a, b);
  for (std::size_t m = 0; m < s.size(); ++m) s[m] *= helmholtz_symbol(k[m]) * deriv_symbol(k[m], order);
  return inverse(g, std::move(s));
}

inline double I(const Eigen::ArrayXd& v, const Grid& g) { return integrate(v, g); }

inline Field depth(const State& s, const BathymetrySamples& bs) { return bs.flat ? s.eta : s.eta + bs.h; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Energy and momentum

/// H_h = 1/2 int(-a u_x^2 - c eta_x^2 + u^2 + eta^2 + u^2 (eta + h)).
inline double hamiltonian_h(const State& s, const BathymetrySamples& bs, const AbcdParams& p) {
  const Grid& g = *s.u.grid();
  const auto& u = s.u.values();
  const auto& e = s.eta.values();
  const Eigen::ArrayXd ux = deriv(s.u).values(), ex = deriv(s.eta).values();
  const Eigen::ArrayXd hv = bs.flat ? Eigen::ArrayXd::Zero(u.size()) : bs.h.values();
  return 0.5 * detail::I(-p.a * ux.square() - p.c * ex.square() + u.square() + e.square() + u.square() * (e + hv), g);
}

/// Flat-bottom energy H (h = 0).
inline double hamiltonian(const State& s, const AbcdParams& p) {
  BathymetrySamples flat;
  flat.flat = true;
  return hamiltonian_h(s, flat, p);
}

/// d/dt H_h as six integral lines; every term carries a time derivative of h.
inline TermList hamiltonian_rate_terms(const State& s, const BathymetrySamples& bs, const AbcdParams& p) {
  TermList r;
  if (bs.flat) {
    r.add("total", 0.0);
    return r;
  }
  const Grid& g = *s.u.grid();
  const auto& u = s.u.values();
  const auto& e = s.eta.values();
  const Eigen::ArrayXd ex = deriv(s.eta).values();
  const Eigen::ArrayXd T_httx = detail::T(bs.httx).values();
  const Eigen::ArrayXd T_ht = detail::T(bs.ht).values();
  const Eigen::ArrayXd mix = (1.0 + p.c) * e + 0.5 * u.square();
  const auto& ht = bs.ht.values();
  r.add("-a c1 u httx", -p.a * p.c1 * detail::I(u * bs.httx.values(), g));
  r.add("c1 (1+a+eta+h) u T httx", p.c1 * detail::I((1.0 + p.a + e + bs.h.values()) * u * T_httx, g));
  r.add("c eta ht", p.c * detail::I(e * ht, g));
  r.add("c a1 eta_x htx", p.c * p.a1 * detail::I(ex * bs.htx.values(), g));
  r.add("(a1-1) mix T ht", (p.a1 - 1.0) * detail::I(mix * T_ht, g));
  r.add("-a1 mix ht", -p.a1 * detail::I(mix * ht, g));
  r.add("u^2 ht / 2", 0.5 * detail::I(u.square() * ht, g));
  return r;
}

inline double hamiltonian_rate_rhs(const State& s, const BathymetrySamples& bs, const AbcdParams& p) {
  return hamiltonian_rate_terms(s, bs, p).total();
}

/// Same law grouped with c int eta (1 - a1 d_xx) h_t before integrating by parts.
inline double hamiltonian_rate_rhs_grouped(const State& s, const BathymetrySamples& bs, const AbcdParams& p) {
  if (bs.flat) return 0.0;
  const Grid& g = *s.u.grid();
  const auto& u = s.u.values();
  const auto& e = s.eta.values();
  const auto& ht = bs.ht.values();
  const Eigen::ArrayXd mix = (1.0 + p.c) * e + 0.5 * u.square();
  return -p.a * p.c1 * detail::I(u * bs.httx.values(), g) +
         p.c1 * detail::I((1.0 + p.a + e + bs.h.values()) * u * detail::T(bs.httx).values(), g) +
         p.c * detail::I(e * (ht - p.a1 * bs.htxx.values()), g) +
         (p.a1 - 1.0) * detail::I(mix * detail::T(bs.ht).values(), g) - p.a1 * detail::I(mix * ht, g) +
         0.5 * detail::I(u.square() * ht, g);
}

/// P = int(u eta + u_x eta_x).
inline double momentum(const State& s) {
  const Grid& g = *s.u.grid();
  return detail::I(s.u.values() * s.eta.values() + deriv(s.u).values() * deriv(s.eta).values(), g);
}

// ---------------------------------------------------------------------------
// Virial functionals

/// I = int phi (u eta + u_x eta_x).
inline double virial_I(const State& s, const WeightSet& w) {
  const Grid& g = *s.u.grid();
  return detail::I(w.phi.values() * (s.u.values() * s.eta.values() + deriv(s.u).values() * deriv(s.eta).values()), g);
}

/// J = int phi' eta u_x.
inline double virial_J(const State& s, const WeightSet& w) {
  const Grid& g = *s.u.grid();
  return detail::I(w.phi1.values() * s.eta.values() * deriv(s.u).values(), g);
}

/// Shared fields of the virial rate laws.
struct VirialFields {
  Eigen::ArrayXd u, e, ux, ex, h, hx;
  Eigen::ArrayXd Tu, Te, Tux, Tue, Tdx_ue, Tuu, Tuh, Tdx_uh;
  Eigen::ArrayXd T_httxx, T_forcing_x, T_forcing, httx, forcing;  // forcing = -h_t + a1 h_txx
  bool flat = true;

  VirialFields(const State& s, const BathymetrySamples& bs, const AbcdParams& p) {
    u = s.u.values();
    e = s.eta.values();
    ux = deriv(s.u).values();
    ex = deriv(s.eta).values();
    Tu = detail::T(s.u).values();
    Te = detail::T(s.eta).values();
    Tux = helmholtz_inverse_deriv(s.u, 1).values();
    Tue = detail::T_prod(s.u, s.eta).values();
    Tdx_ue = detail::T_prod(s.u, s.eta, 1).values();
    Tuu = detail::T_prod(s.u, s.u).values();
    flat = bs.flat;
    const auto n = u.size();
    if (flat) {
      h = hx = Tuh = Tdx_uh = T_httxx = T_forcing_x = T_forcing = httx = forcing = Eigen::ArrayXd::Zero(n);
      return;
    }
    h = bs.h.values();
    hx = bs.hx.values();
    Tuh = detail::T_prod(s.u, bs.h).values();
    Tdx_uh = detail::T_prod(s.u, bs.h, 1).values();
    T_httxx = detail::T(bs.httxx).values();
    // T (1 - a1 d_xx) h_tx, with the extra x-derivative of h_txx taken spectrally.
    T_forcing_x = detail::T(bs.htx - p.a1 * deriv(bs.htxx)).values();
    const Field forcing_f = p.a1 * bs.htxx - bs.ht;
    forcing = forcing_f.values();
    T_forcing = detail::T(forcing_f).values();
    httx = bs.httx.values();
  }
};

/// d/dt I term by term (fixed weight).
inline TermList virial_rate_I_terms(const State& s, const BathymetrySamples& bs, const AbcdParams& p,
                                    const WeightSet& w) {
  const Grid& g = *s.u.grid();
  const VirialFields v(s, bs, p);
  const auto& f1 = w.phi1.values();
  const auto& f0 = w.phi.values();
  const double a = p.a, c = p.c;
  TermList r;
  r.add("-a/2 phi' ux^2", -0.5 * a * detail::I(f1 * v.ux.square(), g));
  r.add("-c/2 phi' eta_x^2", -0.5 * c * detail::I(f1 * v.ex.square(), g));
  r.add("-(a+1/2) phi' u^2", -(a + 0.5) * detail::I(f1 * v.u.square(), g));
  r.add("-(c+1/2) phi' eta^2", -(c + 0.5) * detail::I(f1 * v.e.square(), g));
  r.add("(1+a) phi' u Tu", (1.0 + a) * detail::I(f1 * v.u * v.Tu, g));
  r.add("(1+c) phi' eta Teta", (1.0 + c) * detail::I(f1 * v.e * v.Te, g));
  r.add("-1/2 phi' u^2 eta", -0.5 * detail::I(f1 * v.u.square() * v.e, g));
  r.add("phi' u T(u eta)", detail::I(f1 * v.u * v.Tue, g));
  r.add("1/2 phi' eta T(u^2)", 0.5 * detail::I(f1 * v.e * v.Tuu, g));
  r.add("-1/2 (phi h)_x u^2", -0.5 * detail::I((f0 * v.hx + f1 * v.h) * v.u.square(), g));
  r.add("phi' u T(u h)", detail::I(f1 * v.u * v.Tuh, g));
  r.add("-c1 phi' eta T httxx", -p.c1 * detail::I(f1 * v.e * v.T_httxx, g));
  r.add("phi' u T(1 - a1 dxx) htx", detail::I(f1 * v.u * v.T_forcing_x, g));
  r.add("c1 phi eta httx", p.c1 * detail::I(f0 * v.e * v.httx, g));
  r.add("phi u (-1 + a1 dxx) ht", detail::I(f0 * v.u * v.forcing, g));
  return r;
}

/// d/dt J term by term (fixed weight).
inline TermList virial_rate_J_terms(const State& s, const BathymetrySamples& bs, const AbcdParams& p,
                                    const WeightSet& w) {
  const Grid& g = *s.u.grid();
  const VirialFields v(s, bs, p);
  const auto& f1 = w.phi1.values();
  const auto& f2 = w.phi2.values();
  const auto& f3 = w.phi3.values();
  const double a = p.a, c = p.c;
  TermList r;
  r.add("(1+c) phi' eta^2", (1.0 + c) * detail::I(f1 * v.e.square(), g));
  r.add("-c phi' eta_x^2", -c * detail::I(f1 * v.ex.square(), g));
  r.add("-(1+a) phi' u^2", -(1.0 + a) * detail::I(f1 * v.u.square(), g));
  r.add("a phi' ux^2", a * detail::I(f1 * v.ux.square(), g));
  r.add("-(1+c) phi' eta Teta", -(1.0 + c) * detail::I(f1 * v.e * v.Te, g));
  r.add("(1+a) phi' u Tu", (1.0 + a) * detail::I(f1 * v.u * v.Tu, g));
  r.add("(1+a) phi'' u T ux", (1.0 + a) * detail::I(f2 * v.u * v.Tux, g));
  r.add("c/2 phi''' eta^2", 0.5 * c * detail::I(f3 * v.e.square(), g));
  r.add("-1/2 phi' u^2 eta", -0.5 * detail::I(f1 * v.u.square() * v.e, g));
  r.add("-1/2 phi' eta T(u^2)", -0.5 * detail::I(f1 * v.e * v.Tuu, g));
  r.add("phi' u T(u eta)", detail::I(f1 * v.u * v.Tue, g));
  r.add("phi'' u T(u eta)_x", detail::I(f2 * v.u * v.Tdx_ue, g));
  r.add("-phi' u^2 h", -detail::I(f1 * v.u.square() * v.h, g));
  r.add("phi' u T(u h)", detail::I(f1 * v.u * v.Tuh, g));
  r.add("phi'' u T(u h)_x", detail::I(f2 * v.u * v.Tdx_uh, g));
  r.add("phi' ux T(-1 + a1 dxx) ht", detail::I(f1 * v.ux * v.T_forcing, g));
  r.add("c1 phi' eta T httxx", p.c1 * detail::I(f1 * v.e * v.T_httxx, g));
  return r;
}

inline double virial_rate_I_rhs(const State& s, const BathymetrySamples& bs, const AbcdParams& p,
                                 const WeightSet& w) {
  return virial_rate_I_terms(s, bs, p, w).total();
}

inline double virial_rate_J_rhs(const State& s, const BathymetrySamples& bs, const AbcdParams& p,
                                 const WeightSet& w) {
  return virial_rate_J_terms(s, bs, p, w).total();
}

/// -(lambda'/lambda) int y sech^2(y) (u eta + u_x eta_x), the extra dI/dt from lambda(t).
inline double moving_weight_I(const State& s, const WeightSet& w) {
  if (w.lambda_prime == 0.0) return 0.0;
  const Grid& g = *s.u.grid();
  return -(w.lambda_prime / w.lambda) *
         detail::I(w.ysech2.values() * (s.u.values() * s.eta.values() + deriv(s.u).values() * deriv(s.eta).values()), g);
}

/// -(lambda'/lambda^2) int (1 - 2y tanh y) sech^2(y) eta u_x, the extra dJ/dt from lambda(t).
inline double moving_weight_J(const State& s, const WeightSet& w) {
  if (w.lambda_prime == 0.0) return 0.0;
  const Grid& g = *s.u.grid();
  return -(w.lambda_prime / (w.lambda * w.lambda)) *
         detail::I(w.j_kernel.values() * s.eta.values() * deriv(s.u).values(), g);
}

struct Decomposition {
  double Q = 0, SQ = 0, NQ = 0, NH = 0;
  double moving_I = 0, moving_J = 0;  // moving_J already carries the factor alpha

  double fixed_weight_total() const { return Q + SQ + NQ + NH; }
  double total() const { return Q + SQ + NQ + NH + moving_I + moving_J; }
};

/// Q written in (u, eta).
inline double quadratic_form_uv(const State& s, const AbcdParams& p, double alpha, const WeightSet& w) {
  const Grid& g = *s.u.grid();
  const auto lc = leading_coeffs(p.a, p.c, alpha);
  const auto& f1 = w.phi1.values();
  const auto& u = s.u.values();
  const auto& e = s.eta.values();
  const Eigen::ArrayXd ux = deriv(s.u).values(), ex = deriv(s.eta).values();
  const Eigen::ArrayXd Tu = detail::T(s.u).values(), Te = detail::T(s.eta).values();
  return lc.eta2 * detail::I(f1 * e.square(), g) + lc.eta_x2 * detail::I(f1 * ex.square(), g) +
         lc.u2 * detail::I(f1 * u.square(), g) + lc.u_x2 * detail::I(f1 * ux.square(), g) +
         lc.eta_T * detail::I(f1 * e * Te, g) + lc.u_T * detail::I(f1 * u * Tu, g);
}

/// Q written in the canonical variables f = T u, g = T eta.
inline double quadratic_form_fg(const State& s, const QuadCoeffs& q, const WeightSet& w) {
  const Grid& gr = *s.u.grid();
  const Field f = detail::T(s.u), g = detail::T(s.eta);
  const Eigen::ArrayXd f0 = f.values(), f1 = deriv(f, 1).values(), f2 = deriv(f, 2).values(), f3 = deriv(f, 3).values();
  const Eigen::ArrayXd g0 = g.values(), g1 = deriv(g, 1).values(), g2 = deriv(g, 2).values(), g3 = deriv(g, 3).values();
  const auto& p1 = w.phi1.values();
  const auto& p3 = w.phi3.values();
  return detail::I(p1 * (q.A1 * f0.square() + q.A2 * f1.square() + q.A3 * f2.square() + q.A4 * f3.square()), gr) +
         detail::I(p1 * (q.B1 * g0.square() + q.B2 * g1.square() + q.B3 * g2.square() + q.B4 * g3.square()), gr) +
         detail::I(p3 * (q.D11 * f0.square() + q.D12 * f1.square() + q.D21 * g0.square() + q.D22 * g1.square()), gr);
}

/// d/dt (I + alpha J) regrouped as Q + SQ + NQ + NH plus the moving-weight terms.
inline Decomposition virial_rate_decomposition(const State& s, const BathymetrySamples& bs, const AbcdParams& p,
                                               double alpha, const WeightSet& w) {
  const Grid& g = *s.u.grid();
  const VirialFields v(s, bs, p);
  const auto& f0 = w.phi.values();
  const auto& f1 = w.phi1.values();
  const auto& f2 = w.phi2.values();
  const auto& f3 = w.phi3.values();
  Decomposition d;
  d.Q = quadratic_form_uv(s, p, alpha, w);
  d.SQ = alpha * (1.0 + p.a) * detail::I(f2 * v.u * v.Tux, g) + 0.5 * alpha * p.c * detail::I(f3 * v.e.square(), g);
  d.NQ = -0.5 * (alpha + 1.0) * detail::I(f1 * v.u.square() * v.e, g) +
         0.5 * (1.0 - alpha) * detail::I(f1 * v.e * v.Tuu, g) + (alpha + 1.0) * detail::I(f1 * v.u * v.Tue, g) +
         alpha * detail::I(f2 * v.u * v.Tdx_ue, g);
  if (!v.flat) {
    d.NH = -0.5 * detail::I((f0 * v.hx + f1 * v.h) * v.u.square(), g) + (1.0 + alpha) * detail::I(f1 * v.u * v.Tuh, g) -
           alpha * detail::I(f1 * v.u.square() * v.h, g) + alpha * detail::I(f2 * v.u * v.Tdx_uh, g) +
           (alpha - 1.0) * p.c1 * detail::I(f1 * v.e * v.T_httxx, g) + detail::I(f1 * v.u * v.T_forcing_x, g) +
           alpha * detail::I(f1 * v.ux * v.T_forcing, g) + p.c1 * detail::I(f0 * v.e * v.httx, g) +
           detail::I(f0 * v.u * v.forcing, g);
  }
  d.moving_I = moving_weight_I(s, w);
  d.moving_J = alpha * moving_weight_J(s, w);
  return d;
}

// ---------------------------------------------------------------------------
// NH bound template

/// Computable pieces of the NH bound
///   (4 delta + C eps) int phi' u^2 + 4 delta int phi'(u_x^2 + eta^2 + eta_x^2)
///   + C_delta (|h_t|^2 + |h_tx|^2 + |h_tt|^2) + C (|h_x|_inf + |h_tt| + |h_tx| + t^{-3/2}).
struct NhBoundParts {
  double phi_u2 = 0;
  double phi_rest = 0;
  double bottom_sq = 0;
  double bottom_lin = 0;
  double tail = 0;

  double bound(double delta, double C, double C_delta, double eps) const {
    return (4.0 * delta + C * eps) * phi_u2 + 4.0 * delta * phi_rest + C_delta * bottom_sq + C * (bottom_lin + tail);
  }
  /// Smallest C (with C_delta = C) for which bound >= |nh|.
  double required_constant(double nh, double delta, double eps) const {
    const double need = std::abs(nh) - 4.0 * delta * (phi_u2 + phi_rest);
    const double per_c = eps * phi_u2 + bottom_sq + bottom_lin + tail;
    if (need <= 0.0) return 0.0;
    return per_c > 0.0 ? need / per_c : std::numeric_limits<double>::infinity();
  }
};

inline NhBoundParts nh_bound_parts(const State& s, const BathymetrySamples& bs, const WeightSet& w, double t) {
  const Grid& g = *s.u.grid();
  const auto& f1 = w.phi1.values();
  NhBoundParts b;
  b.phi_u2 = detail::I(f1 * s.u.values().square(), g);
  b.phi_rest = detail::I(f1 * (deriv(s.u).values().square() + s.eta.values().square() + deriv(s.eta).values().square()), g);
  if (!bs.flat) {
    auto sq = [&](const Field& f) { return detail::I(f.values().square(), g); };
    b.bottom_sq = sq(bs.ht) + sq(bs.htx) + sq(bs.htt);
    b.bottom_lin = bs.hx.max_abs() + std::sqrt(sq(bs.htt)) + std::sqrt(sq(bs.htx));
  }
  b.tail = t > 0.0 ? std::pow(t, -1.5) : 0.0;
  return b;
}

// ---------------------------------------------------------------------------
// Local energy

/// E_loc = 1/2 int psi(-a u_x^2 - c eta_x^2 + u^2 + eta^2 + u^2 (eta + h)).
inline double local_energy(const State& s, const BathymetrySamples& bs, const AbcdParams& p, const WeightSet& w) {
  const Grid& g = *s.u.grid();
  const auto& u = s.u.values();
  const auto& e = s.eta.values();
  const Eigen::ArrayXd ux = deriv(s.u).values(), ex = deriv(s.eta).values();
  const Eigen::ArrayXd hv = bs.flat ? Eigen::ArrayXd::Zero(u.size()) : bs.h.values();
  return 0.5 * detail::I(w.psi.values() * (-p.a * ux.square() - p.c * ex.square() + u.square() + e.square() +
                                           u.square() * (e + hv)),
                         g);
}

/// Local-energy rate law, term-grouped. `historical` selects the historical
/// form whose second nonlinear group and linear coefficients differ from the
/// chain rule by exactly -2 int psi' F_x G_x (see local_energy_rate_rhs).
inline TermList local_energy_rate_terms(const State& s, const BathymetrySamples& bs, const AbcdParams& p,
                                        const WeightSet& w, bool historical = false) {
  const Grid& gr = *s.u.grid();
  const double a = p.a, c = p.c;
  const auto& q = w.psi.values();
  const auto& q1 = w.psi1.values();
  const auto& q2 = w.psi2.values();
  const Field f = detail::T(s.u), g = detail::T(s.eta);
  const Eigen::ArrayXd f0 = f.values(), f1 = deriv(f, 1).values(), f2 = deriv(f, 2).values(), f3 = deriv(f, 3).values();
  const Eigen::ArrayXd g0 = g.values(), g1 = deriv(g, 1).values(), g2 = deriv(g, 2).values(), g3 = deriv(g, 3).values();
  const auto& u = s.u.values();
  const auto& e = s.eta.values();
  const Eigen::ArrayXd ux = deriv(s.u).values(), ex = deriv(s.eta).values();
  const Eigen::ArrayXd uxx = deriv(s.u, 2).values(), exx = deriv(s.eta, 2).values();
  const Field dep = detail::depth(s, bs);
  const Eigen::ArrayXd hv = bs.flat ? Eigen::ArrayXd::Zero(u.size()) : bs.h.values();
  const Eigen::ArrayXd N1 = detail::T_prod(s.u, dep).values(), N1x = detail::T_prod(s.u, dep, 1).values();
  const Eigen::ArrayXd N2 = detail::T_prod(s.u, s.u).values(), N2x = detail::T_prod(s.u, s.u, 1).values();
  auto I = [&](const Eigen::ArrayXd& v) { return detail::I(v, gr); };

  TermList r;
  if (historical) {
    r.add("lin psi' f g", I(q1 * f0 * g0));
    r.add("lin psi' f' g'", (1.0 - 2.0 * (a + c)) * I(q1 * f1 * g1));
    r.add("lin psi' f'' g''", (3.0 * a * c - 2.0 * (a + c)) * I(q1 * f2 * g2));
    r.add("lin psi' f''' g'''", 3.0 * a * c * I(q1 * f3 * g3));
  } else {
    r.add("lin psi' f g", I(q1 * f0 * g0));
    r.add("lin psi' f' g'", (-1.0 - 2.0 * (a + c)) * I(q1 * f1 * g1));
    r.add("lin psi' f'' g''", 3.0 * a * c * I(q1 * f2 * g2));
    r.add("lin psi' f''' g'''", a * c * I(q1 * f3 * g3));
  }

  r.add("SNL0", 0.5 * I(w.psi_t.values() * (-a * ux.square() - c * ex.square() + u.square() + e.square() +
                                             u.square() * (e + hv))));

  // psi'' group
  if (historical) {
    r.add("SNL1 psi'' f'' g'", a * (c - 1.0) * I(q2 * f2 * g1) - a * I(q2 * f2 * g1));
    r.add("SNL1 psi'' f' g''", c * (a - 1.0) * I(q2 * f1 * g2) - c * I(q2 * f1 * g2));
  } else {
    r.add("SNL1 psi'' f'' g'", a * c * I(q2 * f2 * g1));
    r.add("SNL1 psi'' f' g''", a * c * I(q2 * f1 * g2));
  }
  r.add("SNL1 psi'' f' g", -a * I(q2 * f1 * g0));
  r.add("SNL1 psi'' f g'", -c * I(q2 * f0 * g1));
  // N1 = T(u(eta+h)), N2 = T(u^2)
  r.add("SNL1 E1", 0.5 * a * I(q1 * f2 * N2) + 0.5 * I(q1 * f0 * N2) + c * I(q1 * g2 * N1) + I(q1 * g0 * N1) +
                       0.5 * I(q1 * N1 * N2));
  const double s2 = historical ? 1.0 : -1.0;
  r.add("SNL1 E2", s2 * (0.5 * a * I(q1 * f3 * N2x) + 0.5 * I(q1 * f1 * N2x) + c * I(q1 * g3 * N1x) +
                         I(q1 * g1 * N1x) + 0.5 * I(q1 * N1x * N2x)));
  // d/dx(psi' u_x) = psi'' u_x + psi' u_xx
  Eigen::ArrayXd e34 = 0.5 * a * (q2 * ux + q1 * uxx) * N2 + c * (q2 * ex + q1 * exx) * N1;
  double e34_h = 0.0;
  if (!bs.flat) {
    const Field forcing = p.a1 * bs.htxx - bs.ht;
    e34_h = a * p.c1 * I(q1 * ux * detail::T(bs.httx).values()) + c * I(q1 * ex * detail::T(forcing).values());
  }
  r.add("SNL1 E34", I(e34) + e34_h);

  double snlh = 0.0;
  if (!bs.flat) {
    const Eigen::ArrayXd F = a * f2 + f0 + N1;
    const Eigen::ArrayXd G = c * g2 + g0 + 0.5 * N2;
    const Field forcing = p.a1 * bs.htxx - bs.ht;
    const Eigen::ArrayXd& Ph = forcing.values();
    const Eigen::ArrayXd T_httx = detail::T(bs.httx).values();
    const Eigen::ArrayXd T_httxx = detail::T(bs.httxx).values();
    const Eigen::ArrayXd T_Ph = detail::T(forcing).values();
    const Eigen::ArrayXd T_Phx = helmholtz_inverse_deriv(forcing, 1).values();
    snlh = 0.5 * I(q * u.square() * bs.ht.values()) + p.c1 * I(q * F * bs.httx.values()) + I(q * G * Ph) -
           p.c1 * I(q2 * F * T_httx + 2.0 * q1 * F * T_httxx) - I(q2 * G * T_Ph) - 2.0 * I(q1 * G * T_Phx);
  }
  r.add("SNLh", snlh);
  return r;
}

/// d/dt E_loc by the chain rule along the flow.
inline double local_energy_rate_rhs(const State& s, const BathymetrySamples& bs, const AbcdParams& p,
                                    const WeightSet& w) {
  return local_energy_rate_terms(s, bs, p, w, false).total();
}

inline double local_energy_rate_rhs_historical(const State& s, const BathymetrySamples& bs, const AbcdParams& p,
                                               const WeightSet& w) {
  return local_energy_rate_terms(s, bs, p, w, true).total();
}

/// int psi' F_x G_x with F = T(a u_xx + u + u(eta+h)), G = T(c eta_xx + eta + u^2/2).
inline double local_energy_flux_gap(const State& s, const BathymetrySamples& bs, const AbcdParams& p,
                                    const WeightSet& w) {
  const Grid& gr = *s.u.grid();
  const Field dep = detail::depth(s, bs);
  const Eigen::ArrayXd Fx = (p.a * helmholtz_inverse_deriv(s.u, 3) + helmholtz_inverse_deriv(s.u, 1) +
                             detail::T_prod(s.u, dep, 1))
                                .values();
  const Eigen::ArrayXd Gx = (p.c * helmholtz_inverse_deriv(s.eta, 3) + helmholtz_inverse_deriv(s.eta, 1) +
                             0.5 * detail::T_prod(s.u, s.u, 1))
                                .values();
  return detail::I(w.psi1.values() * Fx * Gx, gr);
}

// ---------------------------------------------------------------------------
// Decay metrics

/// int sech^2(x/lambda)(u^2 + eta^2 + u_x^2 + eta_x^2).
inline double windowed_h1(const State& s, double lambda) {
  const Grid& g = *s.u.grid();
  const Eigen::ArrayXd dens = s.u.values().square() + s.eta.values().square() + deriv(s.u).values().square() +
                              deriv(s.eta).values().square();
  const Eigen::ArrayXd wgt = 1.0 / (g.nodes() / lambda).cosh().square();
  return detail::I(wgt * dens, g);
}

/// H^1 x H^1 norm restricted to (-lambda, lambda).
inline double restricted_h1(const State& s, double lambda) {
  const Grid& g = *s.u.grid();
  const Eigen::ArrayXd dens = s.u.values().square() + s.eta.values().square() + deriv(s.u).values().square() +
                              deriv(s.eta).values().square();
  const Eigen::ArrayXd mask = (g.nodes().abs() < lambda).cast<double>();
  return std::sqrt(detail::I(mask * dens, g));
}

struct DecaySample {
  double t = 0;
  double lambda = 0;
  double windowed = 0;       // sech^2(x/lambda(t)) weighted H^1 density integral
  double running = 0;        // int_{t0}^{t} windowed / lambda dt (trapezoid)
  double restricted = 0;     // H^1 x H^1 norm on I(t)
  double norm = 0;           // full H^1 x H^1 norm
};

/// Decay series over snapshots at strictly increasing times >= 11.
class DecayMetrics {
 public:
  void add(const State& s) {
    require_schedule_time(s.t);
    if (!series_.empty() && !(s.t > series_.back().t)) throw std::invalid_argument("decay snapshots must advance in time");
    DecaySample d;
    d.t = s.t;
    d.lambda = schedule_lambda(s.t);
    d.windowed = windowed_h1(s, d.lambda);
    d.restricted = restricted_h1(s, d.lambda);
    d.norm = h1_pair_norm(s);
    if (!series_.empty()) {
      const auto& prev = series_.back();
      d.running = prev.running + 0.5 * (d.t - prev.t) * (d.windowed / d.lambda + prev.windowed / prev.lambda);
    }
    series_.push_back(d);
  }
  const std::vector<DecaySample>& series() const { return series_; }

 private:
  std::vector<DecaySample> series_;
};

struct DecaySummary {
  double norm0 = 0;
  double sup_norm = 0;
  double global_ratio = 0;       // sup norm / initial norm
  double windowed_final = 0;
  double windowed_max = 0;
  double windowed_ratio = 0;     // final / running max
  double running_final = 0;
  double running_growth_tail = 0;  // relative growth over the last fifth of the span
};

inline DecaySummary summarize_decay(const std::vector<DecaySample>& series) {
  if (series.size() < 2) throw std::invalid_argument("decay series too short");
  DecaySummary s;
  s.norm0 = series.front().norm;
  for (const auto& d : series) {
    s.sup_norm = std::max(s.sup_norm, d.norm);
    s.windowed_max = std::max(s.windowed_max, d.windowed);
  }
  s.global_ratio = s.norm0 > 0.0 ? s.sup_norm / s.norm0 : 0.0;
  s.windowed_final = series.back().windowed;
  s.windowed_ratio = s.windowed_max > 0.0 ? s.windowed_final / s.windowed_max : 0.0;
  s.running_final = series.back().running;
  const double t_cut = series.front().t + 0.8 * (series.back().t - series.front().t);
  double at_cut = 0.0;
  for (const auto& d : series)
    if (d.t <= t_cut + 1e-12) at_cut = d.running;
  s.running_growth_tail = at_cut > 0.0 ? (s.running_final - at_cut) / at_cut : 0.0;
  return s;
}

// ---------------------------------------------------------------------------
// Finite-difference time derivatives

/// Centered 3-point derivative at the middle of (f(t-h), f(t+h)).
inline double fd3(double fm, double fp, double h) { return (fp - fm) / (2.0 * h); }

/// Centered 5-point derivative from f(t-2h), f(t-h), f(t+h), f(t+2h).
inline double fd5(double fm2, double fm1, double fp1, double fp2, double h) {
  return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
}

// ---------------------------------------------------------------------------
// Diagnostics pipeline

enum class WeightMode { schedule, fixed, none };

struct DiagnosticsSettings {
  double alpha = 0.0;
  WeightMode weight = WeightMode::schedule;
  double fixed_lambda = 10.0;
  int fd_points = 5;  // 3 or 5
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One snapshot. Virial and local-energy fields are NaN when no weight is
/// defined (schedule before t = 11); residuals are NaN outside the interior.
struct DiagnosticsRecord {
  double t = kNaN;
  double H = kNaN, H_rate = kNaN, P = kNaN;
  double I = kNaN, J = kNaN, Hcal = kNaN;
  double I_rate = kNaN, J_rate = kNaN;  // fixed-weight laws
  double moving_I = kNaN, moving_J = kNaN;  // moving_J without the alpha factor
  double Q = kNaN, SQ = kNaN, NQ = kNaN, NH = kNaN;
  double decomposition_residual = kNaN;
  double E_loc = kNaN, E_rate = kNaN;
  double lambda = kNaN, windowed = kNaN, restricted = kNaN, norm = kNaN;
  double res_H = kNaN, res_I = kNaN, res_J = kNaN, res_E = kNaN;
  double P_rate_fd = kNaN;

  double dI_dt() const { return I_rate + moving_I; }
  double dJ_dt() const { return J_rate + moving_J; }
};

class DiagnosticsPipeline {
 public:
  DiagnosticsPipeline(const Model& m, DiagnosticsSettings s) : model_(m), set_(s) {
    if (set_.fd_points != 3 && set_.fd_points != 5) throw std::invalid_argument("fd stencil must have 3 or 5 points");
  }

  std::optional<WeightSet> weight_at(double t) const {
    switch (set_.weight) {
      case WeightMode::schedule:
        if (t < kScheduleStart) return std::nullopt;
        return WeightSet::schedule(model_.grid(), t);
      case WeightMode::fixed: return WeightSet::fixed(model_.grid(), set_.fixed_lambda, 0.0, t);
      case WeightMode::none: return std::nullopt;
    }
    return std::nullopt;
  }

  DiagnosticsRecord evaluate(const State& s) const {
    const AbcdParams& p = model_.params();
    const BathymetrySamples bs = model_.sample(s.t);
    DiagnosticsRecord r;
    r.t = s.t;
    r.H = hamiltonian_h(s, bs, p);
    r.H_rate = hamiltonian_rate_rhs(s, bs, p);
    r.P = momentum(s);
    r.norm = h1_pair_norm(s);
    if (const auto w = weight_at(s.t)) {
      r.lambda = w->lambda;
      r.I = virial_I(s, *w);
      r.J = virial_J(s, *w);
      r.Hcal = r.I + set_.alpha * r.J;
      r.I_rate = virial_rate_I_rhs(s, bs, p, *w);
      r.J_rate = virial_rate_J_rhs(s, bs, p, *w);
      r.moving_I = moving_weight_I(s, *w);
      r.moving_J = moving_weight_J(s, *w);
      const Decomposition d = virial_rate_decomposition(s, bs, p, set_.alpha, *w);
      r.Q = d.Q;
      r.SQ = d.SQ;
      r.NQ = d.NQ;
      r.NH = d.NH;
      r.decomposition_residual = std::abs(d.fixed_weight_total() - (r.I_rate + set_.alpha * r.J_rate));
      r.E_loc = local_energy(s, bs, p, *w);
      r.E_rate = local_energy_rate_rhs(s, bs, p, *w);
      r.windowed = windowed_h1(s, w->lambda);
      r.restricted = restricted_h1(s, w->lambda);
    }
    return r;
  }

  /// Appends a snapshot; snapshots must be equally spaced in time.
  void push(const State& s) { records_.push_back(evaluate(s)); }

  /// Fills residual columns for interior snapshots and returns all records.
  const std::vector<DiagnosticsRecord>& finalize() {
    const std::size_t n = records_.size();
    const std::size_t reach = set_.fd_points == 5 ? 2 : 1;
    if (n < 2 * reach + 1) return records_;
    const double h = records_[1].t - records_[0].t;
    auto d = [&](std::size_t i, double DiagnosticsRecord::*field) {
      if (reach == 1) return fd3(records_[i - 1].*field, records_[i + 1].*field, h);
      return fd5(records_[i - 2].*field, records_[i - 1].*field, records_[i + 1].*field, records_[i + 2].*field, h);
    };
    for (std::size_t i = reach; i + reach < n; ++i) {
      auto& r = records_[i];
      r.res_H = std::abs(d(i, &DiagnosticsRecord::H) - r.H_rate);
      r.P_rate_fd = d(i, &DiagnosticsRecord::P);
      r.res_I = std::abs(d(i, &DiagnosticsRecord::I) - r.dI_dt());
      r.res_J = std::abs(d(i, &DiagnosticsRecord::J) - r.dJ_dt());
      r.res_E = std::abs(d(i, &DiagnosticsRecord::E_loc) - r.E_rate);
    }
    return records_;
  }

  const std::vector<DiagnosticsRecord>& records() const { return records_; }
  const DiagnosticsSettings& settings() const { return set_; }

 private:
  const Model& model_;
  DiagnosticsSettings set_;
  std::vector<DiagnosticsRecord> records_;
};

}  // namespace bouss
