#pragma once

// Information matrix, determinant, regularity and sensitivity of invariant
// designs. All quantities follow from the two moments (m1, m2).

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "rfd/orbit.hpp"

namespace rfd {

using InformationMatrix = Eigen::MatrixXd;

class SingularDesign : public std::domain_error {
 public:
  explicit SingularDesign(const std::string& what) : std::domain_error(what) {}
};

// [[1, m1 1^T], [m1 1, (1 - m2) I + m2 1 1^T]]
inline InformationMatrix information_matrix(const MomentSummary& moments, int factors) {
  const Eigen::Index p = factors + 1;
  InformationMatrix m = InformationMatrix::Constant(p, p, moments.m2);
  m.row(0).setConstant(moments.m1);
  m.col(0).setConstant(moments.m1);
  m.diagonal().setOnes();
  return m;
}

inline InformationMatrix information_matrix(const OrbitDesign& design) {
  return information_matrix(design_moments(design), design.factors());
}

// The two factors of det M: (1 - m2) and 1 + (K - 1) m2 - K m1^2.
struct DeterminantFactors {
  double mixed;
  double spread;
};

inline DeterminantFactors determinant_factors(const MomentSummary& moments, int factors) {
  return {1.0 - moments.m2,
          1.0 + (factors - 1) * moments.m2 - factors * moments.m1 * moments.m1};
}

// det M = (1 - m2)^(K-1) (1 + (K-1) m2 - K m1^2)
inline double det_information(const MomentSummary& moments, int factors) {
  const auto f = determinant_factors(moments, factors);
  return std::pow(f.mixed, factors - 1) * f.spread;
}

// Regular iff at least two orbits carry weight and, for K >= 2, one of them
// lies strictly between 0 and K. Decided on the support, not on the floating
// determinant.
inline bool is_regular(const OrbitDesign& design) {
  const auto support = design.support();
  if (support.size() < 2) {
    return false;
  }
  const int factors = design.factors();
  if (factors < 2) {
    return true;
  }
  for (int k : support) {
    if (k > 0 && k < factors) return true;
  }
  return false;
}

// Singular designs get exactly 0 instead of the roundoff left in the closed
// form.
inline double det_information(const OrbitDesign& design) {
  if (!is_regular(design)) {
    return 0.0;
  }
  return det_information(design_moments(design), design.factors());
}

// psi(k) = a0 + a1 (2k - K) + a2 (2k - K)^2, the value of f(x)^T M^-1 f(x) on
// every point of orbit k.
struct SensitivityPolynomial {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  int factors = 0;

  double operator()(int k) const {
    const double c = 2.0 * k - factors;
    return a0 + a1 * c + a2 * c * c;
  }
};

inline SensitivityPolynomial sensitivity_coefficients(const MomentSummary& moments, int factors) {
  const auto f = determinant_factors(moments, factors);
  if (!(f.mixed > 0.0) || !(f.spread > 0.0)) {
    throw SingularDesign("information matrix is singular");
  }
  SensitivityPolynomial poly;
  poly.factors = factors;
  poly.a0 = (1.0 + (factors - 1) * moments.m2) / f.spread + factors / f.mixed;
  poly.a1 = -2.0 * moments.m1 / f.spread;
  poly.a2 = (moments.m1 * moments.m1 - moments.m2) / (f.mixed * f.spread);
  return poly;
}

inline SensitivityPolynomial sensitivity_coefficients(const OrbitDesign& design) {
  if (!is_regular(design)) {
    throw SingularDesign("information matrix is singular: at least two orbits with positive "
                         "weight are needed, one of them strictly between 0 and K");
  }
  return sensitivity_coefficients(design_moments(design), design.factors());
}

inline double sensitivity_at(const SensitivityPolynomial& poly, int k) {
  detail::check_orbit_index(poly.factors, k);
  return poly(k);
}

// (det M)^(1/p) relative to the full factorial, whose information matrix is I.
inline double d_efficiency(const MomentSummary& moments, int factors) {
  const double det = det_information(moments, factors);
  if (det <= 0.0) {
    return 0.0;
  }
  return std::pow(det, 1.0 / (factors + 1));
}

inline double d_efficiency(const OrbitDesign& design) {
  if (!is_regular(design)) {
    return 0.0;
  }
  return d_efficiency(design_moments(design), design.factors());
}

}  // namespace rfd
