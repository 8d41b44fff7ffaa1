#pragma once

// Optimality certificates for invariant designs.

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

#include "rfd/information.hpp"

namespace rfd {

inline constexpr double kDefaultEquivalenceTolerance = 1e-9;

struct EquivalenceReport {
  double max_sensitivity = 0.0;
  int argmax_orbit = 0;
  double bound = 0.0;  // p = K + 1
  double tolerance = 0.0;
  std::map<int, double> sensitivity;      // psi(k) for k = L..U
  std::map<int, double> slack_per_orbit;  // p - psi(k)
  bool bound_holds = false;               // psi(k) <= p + tol everywhere
  bool support_attains = false;           // psi(k) >= p - tol on the support
  bool pass = false;
};

// Kiefer-Wolfowitz check on the orbit level: an invariant design is D-optimal
// iff psi(k) <= p for all k in [L, U]; equality then holds on the support.
inline EquivalenceReport equivalence_check(const OrbitDesign& design,
                                           double tolerance = kDefaultEquivalenceTolerance) {
  const auto poly = sensitivity_coefficients(design);
  const auto& space = design.space();

  EquivalenceReport report;
  report.bound = space.parameters();
  report.tolerance = tolerance;
  report.max_sensitivity = -std::numeric_limits<double>::infinity();
  for (int k : space.orbits()) {
    const double psi = poly(k);
    report.sensitivity[k] = psi;
    report.slack_per_orbit[k] = report.bound - psi;
    if (psi > report.max_sensitivity) {
      report.max_sensitivity = psi;
      report.argmax_orbit = k;
    }
  }
  report.bound_holds = report.max_sensitivity <= report.bound + tolerance;
  report.support_attains = true;
  for (int k : design.support()) {
    if (report.sensitivity[k] < report.bound - tolerance) report.support_attains = false;
  }
  report.pass = report.bound_holds && report.support_attains;
  return report;
}

// Terms of the Bhatia-Davis inequality for Z = 2k - K under the design:
// Var Z <= (max Z - E Z)(E Z - min Z), where Z ranges over [2L - K, 2U - K].
template <typename Number>
struct BhatiaDavisTerms {
  Number mean;
  Number second_moment;
  Number variance;
  Number bound;

  bool holds() const { return variance <= bound; }
};

inline BhatiaDavisTerms<double> bhatia_davis_terms(const OrbitDesign& design) {
  const int factors = design.factors();
  const auto& space = design.space();
  double mean = 0.0;
  double second = 0.0;
  for (const auto& [k, w] : design.weights()) {
    const double z = 2.0 * k - factors;
    mean += w * z;
    second += w * z * z;
  }
  const double hi = 2.0 * space.upper() - factors;
  const double lo = 2.0 * space.lower() - factors;
  return {mean, second, second - mean * mean, (hi - mean) * (mean - lo)};
}

inline BhatiaDavisTerms<Rational> bhatia_davis_terms_exact(const OrbitDesign& design) {
  if (!design.is_exact()) {
    throw std::logic_error("design carries no exact weights");
  }
  const int factors = design.factors();
  const auto& space = design.space();
  Rational mean(0);
  Rational second(0);
  for (const auto& [k, w] : *design.exact_weights()) {
    const Rational z(2 * k - factors);
    mean += w * z;
    second += w * z * z;
  }
  const Rational hi(2 * space.upper() - factors);
  const Rational lo(2 * space.lower() - factors);
  return {mean, second, second - mean * mean, (hi - mean) * (mean - lo)};
}

// Holds for every design on the space; evaluated exactly when the weights are
// rational. With E Z = 0 the bound becomes (K - 2L)(2U - K).
inline bool bhatia_davis_check(const OrbitDesign& design) {
  if (design.is_exact()) {
    return bhatia_davis_terms_exact(design).holds();
  }
  const auto t = bhatia_davis_terms(design);
  // Rounding in the variance is relative to the second moment.
  return t.variance <= t.bound + 1e-12 * std::max(1.0, t.second_moment);
}

}  // namespace rfd
