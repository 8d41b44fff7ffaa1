#pragma once

// Numerical oracle for the closed-form designs: the multiplicative algorithm
// for D-optimality run directly on the orbit simplex, and a cross-check that
// compares it with `solve`.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "rfd/solver.hpp"

namespace rfd {

inline constexpr double kOracleTolerance = 1e-10;
inline constexpr long kOracleMaxIterations = 5'000'000;
inline constexpr double kDeterminantAgreement = 1e-8;
// Weights below this are shown as zero; iterations keep the exact value.
inline constexpr double kZeroWeightClamp = 1e-12;

struct OracleResult {
  std::map<int, double> weights;
  double det = 0.0;
  long iterations = 0;
  bool converged = false;
  double max_sensitivity = 0.0;

  std::map<int, double> clamped_weights() const {
    std::map<int, double> out;
    for (const auto& [k, w] : weights) out[k] = (w < kZeroWeightClamp) ? 0.0 : w;
    return out;
  }
};

// Called once per iteration with (iteration, det) before each update.
using OracleObserver = std::function<void(long, double)>;

inline OracleResult brute_force_solve(const OrbitSpace& space,
                                      long max_iter = kOracleMaxIterations,
                                      double tol = kOracleTolerance,
                                      const OracleObserver& observer = {}) {
  detail::require_factors(space, 2, "multiplicative oracle");
  const int K = space.factors();
  const int n = space.orbit_count();
  const double p = space.parameters();

  std::vector<double> m1(n), m2(n), w(n, 1.0 / n), psi(n);
  for (int i = 0; i < n; ++i) {
    m1[i] = orbit_m1(K, space.lower() + i);
    m2[i] = orbit_m2(K, space.lower() + i);
  }

  OracleResult result;
  for (long iter = 0;; ++iter) {
    MomentSummary moments;
    for (int i = 0; i < n; ++i) {
      moments.m1 += w[i] * m1[i];
      moments.m2 += w[i] * m2[i];
    }
    const auto poly = sensitivity_coefficients(moments, K);
    double max_psi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      psi[i] = poly(space.lower() + i);
      max_psi = std::max(max_psi, psi[i]);
    }
    result.det = det_information(moments, K);
    result.iterations = iter;
    result.max_sensitivity = max_psi;
    if (observer) observer(iter, result.det);
    if (max_psi - p < tol) {
      result.converged = true;
      break;
    }
    if (iter >= max_iter) {
      break;
    }
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      w[i] *= psi[i] / p;
      total += w[i];
    }
    for (double& wi : w) wi /= total;
  }
  for (int i = 0; i < n; ++i) result.weights[space.lower() + i] = w[i];
  return result;
}

struct CrossValidation {
  SolutionReport solution;
  OracleResult oracle;
  double closed_det = 0.0;
  double relative_gap = 0.0;
  bool agree = false;
  std::string message;
};

inline CrossValidation cross_validate(const OrbitSpace& space,
                                      double det_tolerance = kDeterminantAgreement) {
  auto solution = solve(space);
  auto oracle = brute_force_solve(space);
  const double closed = det_information(solution.design);
  const double gap = std::abs(closed - oracle.det) / closed;
  const bool agree = gap <= det_tolerance && solution.certificate.pass;

  std::string message;
  if (!agree) {
    auto dump = [](const std::map<int, double>& ws) {
      std::string s;
      for (const auto& [k, w] : ws) s += " " + std::to_string(k) + ":" + std::to_string(w);
      return s;
    };
    message = "discrepancy for K = " + std::to_string(space.factors()) + ", L = " +
              std::to_string(space.lower()) + ", U = " + std::to_string(space.upper()) +
              ": closed-form det " + std::to_string(closed) + " {" +
              dump(solution.design.weights()) + " }, oracle det " + std::to_string(oracle.det) +
              " {" + dump(oracle.clamped_weights()) + " }";
  }
  return {std::move(solution), std::move(oracle), closed, gap, agree, std::move(message)};
}

}  // namespace rfd
