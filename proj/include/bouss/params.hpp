#pragma once
// Normalized abcd constants (b = d = 1) and their construction from the
// physical (theta, lambda, mu, b) family.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bouss {

class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Physical parameters the normalized set was built from.
struct PhysicalOrigin {
  double theta = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double b = 0.0;  // common value b = d before normalization
};

struct AbcdParams {
  double a = -1.0;
  double c = -1.0;
  double a1 = 0.0;
  double c1 = 0.0;
  std::optional<PhysicalOrigin> origin;  // empty for direct construction

  std::string provenance() const { return origin ? "physical" : "direct"; }

  /// Pre-normalization b (1 for direct construction, where b = d = 1 is assumed).
  double b() const { return origin ? origin->b : 1.0; }

  static AbcdParams direct(double a, double c, double a1 = 0.0, double c1 = 0.0) {
    AbcdParams p;
    p.a = a;
    p.c = c;
    p.a1 = a1;
    p.c1 = c1;
    return p;
  }
};

/// Raw (unnormalized) coefficients of the physical family.
struct RawAbcd {
  double a, b, c, d, a1, c1;
};

inline RawAbcd raw_from_physical(double theta, double lambda, double mu) {
  const double s = theta * theta - 1.0 / 3.0;
  const double r = 1.0 - theta * theta;
  RawAbcd raw{};
  raw.a = 0.5 * s * lambda;
  raw.b = 0.5 * s * (1.0 - lambda);
  raw.c = 0.5 * r * mu;
  raw.d = 0.5 * r * (1.0 - mu);
  raw.a1 = 0.5 * ((1.0 - lambda) * s + 1.0 - 2.0 * theta);
  raw.c1 = 1.0 - theta;
  return raw;
}

/// Builds normalized parameters; throws ParamError naming the violated
/// Hamiltonian-generic condition. `b` is the expected common value b = d.
inline AbcdParams params_from_physical(double theta, double lambda, double mu, double b) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ParamError("theta must lie in [0,1]");
  if (!(b > 0.0)) throw ParamError("b must be positive");
  const RawAbcd raw = raw_from_physical(theta, lambda, mu);
  constexpr double tol = 1e-12;
  if (!(raw.b > 0.0)) throw ParamError("b>0 violated (raw b = " + std::to_string(raw.b) + ")");
  if (!(raw.d > 0.0)) throw ParamError("d>0 violated (raw d = " + std::to_string(raw.d) + ")");
  if (std::abs(raw.b - raw.d) > tol) throw ParamError("b=d violated");
  if (std::abs(raw.b - b) > tol * std::max(1.0, std::abs(b)))
    throw ParamError("raw b = " + std::to_string(raw.b) + " does not match requested b");
  if (!(raw.a < 0.0)) throw ParamError("a<0 violated");
  if (!(raw.c < 0.0)) throw ParamError("c<0 violated");
  const double sum = raw.a + raw.b + raw.c + raw.d;
  if (std::abs(sum - 1.0 / 3.0) > tol) throw ParamError("a+b+c+d = 1/3 violated");

  AbcdParams p;
  p.a = raw.a / raw.b;
  p.c = raw.c / raw.b;
  p.a1 = raw.a1 / raw.b;
  p.c1 = raw.c1 / raw.b;
  p.origin = PhysicalOrigin{theta, lambda, mu, raw.b};
  return p;
}

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violated;
};

/// Sign conditions of the normalized Hamiltonian-generic regime.
inline ValidationReport validate_generic_hamiltonian(const AbcdParams& p) {
  ValidationReport r;
  auto fail = [&r](std::string what) {
    r.ok = false;
    r.violated.push_back(std::move(what));
  };
  if (!std::isfinite(p.a) || !std::isfinite(p.c) || !std::isfinite(p.a1) || !std::isfinite(p.c1))
    fail("finite");
  if (!(p.a < 0.0)) fail("a<0");
  if (!(p.c < 0.0)) fail("c<0");
  if (!(p.c >= -1.0)) fail("c>=-1");
  if (p.origin) {
    if (!(p.origin->b > 0.0)) fail("b>0");
    const double theta = p.origin->theta;
    if (!(theta >= 0.0 && theta <= 1.0)) fail("theta in [0,1]");
    const double b = p.origin->b;
    constexpr double tol = 1e-12;
    if (std::abs((p.a + 1.0) - (theta * theta - 1.0 / 3.0) / (2.0 * b)) > tol) fail("a+1=(theta^2-1/3)/(2b)");
    if (std::abs((p.c + 1.0) - (1.0 - theta * theta) / (2.0 * b)) > tol) fail("c+1=(1-theta^2)/(2b)");
  }
  return r;
}

}  // namespace bouss
