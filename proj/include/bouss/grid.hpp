#pragma once
// Periodic pseudospectral grid, real fields bound to it, and the spectral
// operators used everywhere else: derivatives, the Helmholtz inverse
// (1 - d^2/dx^2)^{-1}, quadrature and dealiased products.

#include <fftw3.h>

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bouss {

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GridMismatch : public std::invalid_argument {
 public:
  GridMismatch() : std::invalid_argument("fields live on different grids") {}
};

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

namespace detail {

// Owns one FFTW plan. Plans are created with FFTW_UNALIGNED so the
// new-array execute functions can run on caller buffers from any thread.
class FftPlan {
 public:
  FftPlan() = default;
  explicit FftPlan(fftw_plan p) : plan_(p) {}
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&& o) noexcept : plan_(std::exchange(o.plan_, nullptr)) {}
  FftPlan& operator=(FftPlan&& o) noexcept {
    if (this != &o) {
      reset();
      plan_ = std::exchange(o.plan_, nullptr);
    }
    return *this;
  }
  ~FftPlan() { reset(); }
  fftw_plan get() const { return plan_; }

 private:
  void reset() {
    if (plan_ != nullptr) fftw_destroy_plan(plan_);
    plan_ = nullptr;
  }
  fftw_plan plan_ = nullptr;
};

inline fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

// Real <-> half-complex transforms of a fixed length.
class RealFft {
 public:
  explicit RealFft(int n) : n_(n) {
    std::vector<double> r(static_cast<std::size_t>(n));
    Spectrum c(static_cast<std::size_t>(n / 2 + 1));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = FftPlan(fftw_plan_dft_r2c_1d(n, r.data(), as_fftw(c.data()), flags));
    backward_ = FftPlan(fftw_plan_dft_c2r_1d(n, as_fftw(c.data()), r.data(), flags));
    if (forward_.get() == nullptr || backward_.get() == nullptr)
      throw GridError("FFTW plan creation failed for n = " + std::to_string(n));
  }

  int size() const { return n_; }

  // Unnormalized forward transform.
  void forward(const double* in, Complex* out) const {
    // FFTW does not write to the input of an out-of-place r2c transform.
    fftw_execute_dft_r2c(forward_.get(), const_cast<double*>(in), as_fftw(out));
  }

  // Unnormalized inverse transform; `in` is clobbered.
  void backward(Complex* in, double* out) const {
    fftw_execute_dft_c2r(backward_.get(), as_fftw(in), out);
  }

 private:
  int n_;
  FftPlan forward_;
  FftPlan backward_;
};

}  // namespace detail

/// Uniform periodic grid on [-L, L) with N nodes, x_j = -L + 2Lj/N.
///
/// Spectral operators act on the half-complex spectrum m = 0..N/2 with
/// wavenumber k_m = pi m / L. The Nyquist mode m = N/2 is given k = 0 in every
/// differential symbol, so all operators are functions of one real symbol and
/// compose exactly (D^2 == D*D, (1 - D^2) T == identity).
class Grid {
 public:
  Grid(double half_length, int nodes)
      : L_(half_length), N_(nodes), M_(3 * nodes / 2), fft_(validated(half_length, nodes)),
        fft_padded_(3 * nodes / 2) {
    dx_ = 2.0 * L_ / N_;
    x_.resize(N_);
    for (int j = 0; j < N_; ++j) x_[j] = -L_ + dx_ * j;
    k_.assign(static_cast<std::size_t>(N_ / 2 + 1), 0.0);
    for (int m = 0; m < N_ / 2; ++m) k_[m] = std::numbers::pi * m / L_;
  }

  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  double half_length() const { return L_; }
  int size() const { return N_; }
  double spacing() const { return dx_; }
  const Eigen::ArrayXd& nodes() const { return x_; }

  /// Differential-symbol wavenumbers for m = 0..N/2 (Nyquist entry is 0).
  const std::vector<double>& symbol_wavenumbers() const { return k_; }

  /// The symmetric index set k_m = pi m / L, m = -N/2 .. N/2-1.
  std::vector<double> wavenumbers() const {
    std::vector<double> k;
    k.reserve(N_);
    for (int m = -N_ / 2; m < N_ / 2; ++m) k.push_back(std::numbers::pi * m / L_);
    return k;
  }

  std::size_t spectrum_size() const { return static_cast<std::size_t>(N_ / 2 + 1); }
  int padded_size() const { return M_; }

  const detail::RealFft& fft() const { return fft_; }
  const detail::RealFft& padded_fft() const { return fft_padded_; }

 private:
  static int validated(double L, int N) {
    if (!(L > 0.0) || !std::isfinite(L)) throw GridError("box half-length must be positive");
    if (N < 16) throw GridError("node count must be at least 16");
    if (N % 2 != 0) throw GridError("node count must be even");
    return N;
  }

  double L_;
  int N_;
  int M_;
  double dx_ = 0.0;
  Eigen::ArrayXd x_;
  std::vector<double> k_;
  detail::RealFft fft_;
  detail::RealFft fft_padded_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(double half_length, int nodes) {
  return std::make_shared<const Grid>(half_length, nodes);
}

/// Real samples bound to one grid.
class Field {
 public:
  Field() = default;
  explicit Field(GridPtr g) : grid_(std::move(g)), v_(Eigen::ArrayXd::Zero(grid_->size())) {}
  Field(GridPtr g, Eigen::ArrayXd values) : grid_(std::move(g)), v_(std::move(values)) {
    if (v_.size() != grid_->size()) throw GridError("field length does not match grid");
  }

  template <class F>
  static Field from_function(GridPtr g, F&& fn) {
    Eigen::ArrayXd v = g->nodes().unaryExpr(std::forward<F>(fn));
    return Field(std::move(g), std::move(v));
  }
  static Field constant(GridPtr g, double value) {
    const auto n = g->size();
    return Field(std::move(g), Eigen::ArrayXd::Constant(n, value));
  }

  const GridPtr& grid() const { return grid_; }
  const Eigen::ArrayXd& values() const { return v_; }
  Eigen::ArrayXd& values() { return v_; }
  double operator[](Eigen::Index j) const { return v_[j]; }
  Eigen::Index size() const { return v_.size(); }

  bool all_finite() const { return v_.isFinite().all(); }
  double max_abs() const { return v_.abs().maxCoeff(); }

  Field& operator+=(const Field& o) { check(o); v_ += o.v_; return *this; }
  Field& operator-=(const Field& o) { check(o); v_ -= o.v_; return *this; }
  Field& operator*=(double s) { v_ *= s; return *this; }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator-(Field a) { a.v_ = -a.v_; return a; }
  friend Field operator*(double s, Field a) { return a *= s; }
  friend Field operator*(Field a, double s) { return a *= s; }
  /// Pointwise product on the nodes (no dealiasing).
  friend Field operator*(Field a, const Field& b) {
    a.check(b);
    a.v_ *= b.v_;
    return a;
  }

  void check(const Field& o) const {
    if (grid_ != o.grid_) throw GridMismatch();
  }

 private:
  GridPtr grid_;
  Eigen::ArrayXd v_;
};

inline void require_same_grid(const Field& a, const Field& b) { a.check(b); }

// ---------------------------------------------------------------------------
// Spectral transforms

inline Spectrum forward(const Field& f) {
  const Grid& g = *f.grid();
  Spectrum s(g.spectrum_size());
  g.fft().forward(f.values().data(), s.data());
  return s;
}

inline Field inverse(const GridPtr& grid, Spectrum s) {
  Field out(grid);
  grid->fft().backward(s.data(), out.values().data());
  out.values() /= static_cast<double>(grid->size());
  return out;
}

/// Multiplies the spectrum of `f` by symbol(k) and transforms back. The symbol
/// must satisfy symbol(-k) = conj(symbol(k)) for the result to be real.
template <class Symbol>
Field apply_symbol(const Field& f, Symbol&& symbol) {
  const auto& k = f.grid()->symbol_wavenumbers();
  Spectrum s = forward(f);
  for (std::size_t m = 0; m < s.size(); ++m) s[m] *= symbol(k[m]);
  return inverse(f.grid(), std::move(s));
}

inline Complex deriv_symbol(double k, int order) {
  switch (order) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, k};
    case 2: return {-k * k, 0.0};
    case 3: return {0.0, -k * k * k};
    default: return std::pow(Complex(0.0, k), order);
  }
}

inline double helmholtz_symbol(double k) { return 1.0 / (1.0 + k * k); }

/// Spectral derivative of order 1, 2 or 3.
inline Field deriv(const Field& f, int order = 1) {
  if (order < 1 || order > 3)
    throw std::invalid_argument("unsupported derivative order " + std::to_string(order));
  return apply_symbol(f, [order](double k) { return deriv_symbol(k, order); });
}

/// f = (1 - d^2/dx^2)^{-1} u, Fourier symbol 1/(1+k^2).
inline Field helmholtz_inverse(const Field& u) {
  return apply_symbol(u, [](double k) { return Complex(helmholtz_symbol(k), 0.0); });
}

/// (1 - d^2/dx^2)^{-1} d^order/dx^order in one transform.
inline Field helmholtz_inverse_deriv(const Field& u, int order) {
  return apply_symbol(u, [order](double k) { return helmholtz_symbol(k) * deriv_symbol(k, order); });
}

/// (1 - d^2/dx^2) applied spectrally.
inline Field helmholtz_forward(const Field& f) {
  return apply_symbol(f, [](double k) { return Complex(1.0 + k * k, 0.0); });
}

/// Rectangle rule dx * sum_j f_j (spectrally accurate for smooth periodic data).
inline double integrate(const Field& f) { return f.grid()->spacing() * f.values().sum(); }

inline double integrate(const Eigen::ArrayXd& values, const Grid& g) {
  return g.spacing() * values.sum();
}

inline double l2_norm(const Field& f) { return std::sqrt(integrate(f.values().square(), *f.grid())); }

/// sqrt(int f^2 + (f')^2).
inline double h1_norm(const Field& f) {
  const Field fx = deriv(f, 1);
  return std::sqrt(integrate(f.values().square() + fx.values().square(), *f.grid()));
}

// ---------------------------------------------------------------------------
// Dealiased quadratic products

namespace detail {

// Zero-pads an N-grid spectrum to the 3N/2 grid and returns physical samples.
inline Eigen::ArrayXd pad_to_physical(const Grid& g, const Spectrum& s) {
  const int M = g.padded_size();
  Spectrum padded(static_cast<std::size_t>(M / 2 + 1), Complex(0.0, 0.0));
  for (int m = 0; m < g.size() / 2; ++m) padded[m] = s[m];
  Eigen::ArrayXd out(M);
  g.padded_fft().backward(padded.data(), out.data());
  out /= static_cast<double>(g.size());
  return out;
}

// Forward-transforms padded samples and truncates back to the N-grid modes.
inline Spectrum truncate_from_physical(const Grid& g, const Eigen::ArrayXd& p) {
  const int M = g.padded_size();
  Spectrum full(static_cast<std::size_t>(M / 2 + 1));
  g.padded_fft().forward(p.data(), full.data());
  Spectrum s(g.spectrum_size(), Complex(0.0, 0.0));
  const double scale = static_cast<double>(g.size()) / M;
  for (int m = 0; m < g.size() / 2; ++m) s[m] = full[m] * scale;
  return s;
}

}  // namespace detail

/// Spectrum of a*b computed with 3/2 zero-padding: the exact product
/// projected onto the resolved modes (Nyquist dropped), free of aliasing.
inline Spectrum dealiased_product_spectrum(const Field& a, const Field& b) {
  require_same_grid(a, b);
  const Grid& g = *a.grid();
  const Eigen::ArrayXd pa = detail::pad_to_physical(g, forward(a));
  const Eigen::ArrayXd pb = (&a == &b) ? pa : detail::pad_to_physical(g, forward(b));
  return detail::truncate_from_physical(g, pa * pb);
}

inline Field dealiased_product(const Field& a, const Field& b) {
  return inverse(a.grid(), dealiased_product_spectrum(a, b));
}

/// Canonical variables (f, g) = (T u, T eta) with T = (1 - d^2/dx^2)^{-1}.
struct CanonicalPair {
  Field f;
  Field g;
};

}  // namespace bouss
