#pragma once
// Virial weights phi = tanh(x/lambda), local-energy weight psi = sech^4(x/lambda),
// and the light-cone schedule lambda(t) = t / (log t log^2(log t)).

#include "bouss/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bouss {

/// Earliest time at which the schedule is defined.
inline constexpr double kScheduleStart = 11.0;

inline void require_schedule_time(double t) {
  if (!(t >= kScheduleStart)) throw std::domain_error("weight schedule needs t >= 11");
}

inline double schedule_lambda(double t) {
  require_schedule_time(t);
  const double l = std::log(t), ll = std::log(l);
  return t / (l * ll * ll);
}

inline double schedule_lambda_prime(double t) {
  require_schedule_time(t);
  const double l = std::log(t), ll = std::log(l);
  return (1.0 - 1.0 / l - 2.0 / (l * ll)) / (l * ll * ll);
}

/// All weight fields at one time. Derivatives are closed-form in y = x/lambda.
struct WeightSet {
  double t = 0.0;
  double lambda = 0.0;
  double lambda_prime = 0.0;  // 0 for a frozen weight
  Field phi, phi1, phi2, phi3;
  Field psi, psi1, psi2, psi_t;
  // Kernels of the moving-weight corrections.
  Field ysech2;                 // y sech^2 y
  Field j_kernel;               // (1 - 2 y tanh y) sech^2 y

  static WeightSet fixed(const GridPtr& g, double lambda, double lambda_prime = 0.0, double t = 0.0) {
    if (!(lambda > 0.0)) throw std::invalid_argument("weight scale must be positive");
    const auto& x = g->nodes();
    const Eigen::ArrayXd y = x / lambda;
    const Eigen::ArrayXd th = y.tanh();
    const Eigen::ArrayXd s2 = 1.0 / y.cosh().square();
    const Eigen::ArrayXd s4 = s2.square();
    const double l = lambda;
    WeightSet w;
    w.t = t;
    w.lambda = lambda;
    w.lambda_prime = lambda_prime;
    w.phi = Field(g, th);
    w.phi1 = Field(g, s2 / l);
    w.phi2 = Field(g, -2.0 * s2 * th / (l * l));
    w.phi3 = Field(g, -2.0 * s2 * (1.0 - 3.0 * th.square()) / (l * l * l));
    w.psi = Field(g, s4);
    w.psi1 = Field(g, -4.0 * s4 * th / l);
    w.psi2 = Field(g, -4.0 * s4 * (1.0 - 5.0 * th.square()) / (l * l));
    w.psi_t = Field(g, 4.0 * s4 * th * y * (lambda_prime / l));
    w.ysech2 = Field(g, y * s2);
    w.j_kernel = Field(g, (1.0 - 2.0 * y * th) * s2);
    return w;
  }

  /// Weight on the schedule lambda(t), t >= 11.
  static WeightSet schedule(const GridPtr& g, double t) {
    return fixed(g, schedule_lambda(t), schedule_lambda_prime(t), t);
  }

  /// psi == 1 (the infinite-scale limit); phi fields are zero.
  static WeightSet flat(const GridPtr& g) {
    WeightSet w;
    w.lambda = std::numeric_limits<double>::infinity();
    Field zero(g);
    w.phi = w.phi1 = w.phi2 = w.phi3 = zero;
    w.psi = Field::constant(g, 1.0);
    w.psi1 = w.psi2 = w.psi_t = zero;
    w.ysech2 = w.j_kernel = zero;
    return w;
  }
};

}  // namespace bouss
