#pragma once
// Refined dispersion-like region, virial quadratic-form coefficients and the
// admissible-alpha witness search.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace bouss {

enum class Branch { main_inequality, refined_case_1, refined_case_2, rejected };

inline const char* branch_name(Branch b) {
  switch (b) {
    case Branch::main_inequality: return "main-inequality";
    case Branch::refined_case_1: return "refined-case-1";
    case Branch::refined_case_2: return "refined-case-2";
    case Branch::rejected: return "rejected";
  }
  return "?";
}

struct RegionVerdict {
  bool accepted = false;
  Branch branch = Branch::rejected;
  double margin = 0.0;  // > 0 iff accepted
};

/// -(19 + sqrt(181))/90, the sub-branch threshold shared by both refined cases.
inline double refined_threshold() { return -(19.0 + std::sqrt(181.0)) / 90.0; }

/// Slack 8ac - 3(a+c) - 2 of the main inequality (positive when it holds).
inline double main_slack(double a, double c) { return 8.0 * a * c - 3.0 * (a + c) - 2.0; }

/// One refined case evaluated on its own. `sub` is 1..3 for the applicable
/// sub-branch, 0 when the scanning variable lies outside every sub-branch.
struct RefinedEvaluation {
  int refined_case = 0;  // 1: c <= a, 2: a <= c
  int sub = 0;
  double slack = 0.0;
};

namespace detail {

// Shared three-piece rule with scanning variable s (the smaller parameter)
// and partner r. The first piece reads 45ac > 1 - r.
inline RefinedEvaluation refined_rule(int which, double s, double r, double lower_bound) {
  RefinedEvaluation e;
  e.refined_case = which;
  const double t = refined_threshold();
  const double ac = s * r;
  if (s >= lower_bound && s < t) {
    e.sub = 1;
    e.slack = 45.0 * ac - (1.0 - r);
  } else if (s >= t && s < -1.0 / 3.0) {
    e.sub = 2;
    e.slack = 18.0 * ac + s + r;
  } else if (s >= -1.0 / 3.0 && s < -1.0 / 9.0) {
    e.sub = 3;
    e.slack = 27.0 * ac - 6.0 * r - 1.0;
  }
  return e;
}

}  // namespace detail

/// Case 1 (c <= a < 0): pieces selected by c, with 45ac > 1-a, 18ac+a+c > 0, 27ac > 6a+1.
inline RefinedEvaluation refined_case_1(double a, double c) {
  return detail::refined_rule(1, c, a, -1.0);
}

/// Case 2 (a <= c < 0): pieces selected by a, with 45ac > 1-c, 18ac+a+c > 0,
/// 27ac > 6c+1; the first piece needs a >= -1 - 1/(6b).
inline RefinedEvaluation refined_case_2(double a, double c, double b) {
  return detail::refined_rule(2, a, c, -1.0 - 1.0 / (6.0 * b));
}

inline void check_region_domain(double a, double c, double b) {
  if (!(a < 0.0)) throw std::domain_error("classifier needs a < 0");
  if (!(c < 0.0 && c >= -1.0)) throw std::domain_error("classifier needs -1 <= c < 0");
  if (!(b > 0.0)) throw std::domain_error("classifier needs b > 0");
}

inline RegionVerdict satisfies_refined_dispersion(double a, double c, double b = 1.0) {
  check_region_domain(a, c, b);
  RegionVerdict v;
  const double m = main_slack(a, c);
  if (m > 0.0) {
    v.accepted = true;
    v.branch = Branch::main_inequality;
    v.margin = m;
    return v;
  }
  double best = m;
  auto consider = [&](const RefinedEvaluation& e, Branch label) {
    if (e.sub == 0) return;
    if (e.slack > 0.0 && !v.accepted) {
      v.accepted = true;
      v.branch = label;
      v.margin = e.slack;
    }
    best = std::max(best, e.slack);
  };
  if (c <= a) consider(refined_case_1(a, c), Branch::refined_case_1);
  if (a <= c) consider(refined_case_2(a, c, b), Branch::refined_case_2);
  if (!v.accepted) {
    v.branch = Branch::rejected;
    v.margin = best;  // <= 0: slack of the least-violated applicable inequality
  }
  return v;
}

/// Coefficients of the virial quadratic form in canonical variables.
struct QuadCoeffs {
  double alpha = 0.0;
  double A1 = 0.5, A2 = 0, A3 = 0, A4 = 0;
  double B1 = 0.5, B2 = 0, B3 = 0, B4 = 0;
  double D11 = 0, D12 = 0, D21 = 0, D22 = 0;

  double min_diagonal() const { return std::min({A2, A3, A4, B2, B3, B4}); }
};

inline QuadCoeffs quadratic_coeffs(double a, double c, double alpha) {
  QuadCoeffs q;
  q.alpha = alpha;
  q.A2 = -alpha - 1.5 * a;
  q.B2 = alpha - 1.5 * c;
  q.A3 = -(1.0 - a) * alpha - 2.0 * a - 0.5;
  q.B3 = (1.0 - c) * alpha - 2.0 * c - 0.5;
  q.A4 = a * (alpha - 0.5);
  q.B4 = -c * (alpha + 0.5);
  q.D11 = 0.5 * (1.0 + a) * (alpha + 1.0) - 0.5;
  q.D12 = -a * (alpha - 0.5);
  q.D21 = 0.5 * (1.0 + c) * (1.0 - alpha) - 0.5;
  q.D22 = c * (alpha + 0.5);
  return q;
}

/// Coefficients of the same quadratic form written in (u, eta):
/// Q = eta2 int phi' eta^2 + eta_x2 int phi' eta_x^2 + u2 int phi' u^2
///   + u_x2 int phi' u_x^2 + eta_T int phi' eta T eta + u_T int phi' u T u.
struct LeadingCoeffs {
  double eta2, eta_x2, u2, u_x2, eta_T, u_T;
};

inline LeadingCoeffs leading_coeffs(double a, double c, double alpha) {
  return {(1.0 + c) * (alpha - 1.0) + 0.5,
          -c * (alpha + 0.5),
          (1.0 + a) * (-alpha - 1.0) + 0.5,
          a * (alpha - 0.5),
          (1.0 + c) * (1.0 - alpha),
          (1.0 + a) * (alpha + 1.0)};
}

struct AlphaWitness {
  double alpha;
  double margin;  // min(A2..B4) at alpha
};

struct AlphaScan {
  double lo = -4.0;
  double hi = 4.0;
  double step = 1e-3;
};

/// Scans alpha for the largest min(A2,A3,A4,B2,B3,B4) with all six >= 0.
/// Ties go to the smallest |alpha|. Grid points are lo + i*step, so alpha = 0
/// is hit exactly whenever lo/step is an integer.
inline std::optional<AlphaWitness> find_admissible_alpha(double a, double c, AlphaScan scan = {}) {
  if (!(a < 0.0) || !(c < 0.0)) throw std::domain_error("alpha search needs a < 0 and c < 0");
  if (!(scan.step > 0.0) || !(scan.hi >= scan.lo)) throw std::invalid_argument("bad alpha scan range");
  const auto i0 = static_cast<std::int64_t>(std::llround(scan.lo / scan.step));
  const auto i1 = static_cast<std::int64_t>(std::llround(scan.hi / scan.step));
  std::optional<AlphaWitness> best;
  for (std::int64_t i = i0; i <= i1; ++i) {
    const double alpha = static_cast<double>(i) * scan.step;
    const double m = quadratic_coeffs(a, c, alpha).min_diagonal();
    if (m < 0.0) continue;
    if (!best || m > best->margin || (m == best->margin && std::abs(alpha) < std::abs(best->alpha)))
      best = AlphaWitness{alpha, m};
  }
  return best;
}

}  // namespace bouss
