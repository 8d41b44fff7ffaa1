#pragma once

// Closed-form invariant D-optimal designs.
//
// With margin discriminant (K - 2L)(2U - K) - K:
//   < 0  narrow margins; the optimum sits on the two boundary orbits O_L, O_U.
//   > 0  wide margins; optimal designs are exactly those with m1 = m2 = 0,
//        realized canonically on three orbits L < l < U.
//   = 0  boundary; the interior weight vanishes and O_L, O_U suffice.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rfd/equivalence.hpp"
#include "rfd/information.hpp"
#include "rfd/orbit.hpp"

namespace rfd {

enum class RegionTag { Narrow, Wide, Boundary };

inline std::string_view to_string(RegionTag tag) {
  switch (tag) {
    case RegionTag::Narrow: return "narrow";
    case RegionTag::Wide: return "wide";
    case RegionTag::Boundary: return "boundary";
  }
  return "unknown";
}

struct RegionCase {
  RegionTag tag;
  std::int64_t discriminant;  // (K - 2L)(2U - K) - K
};

enum class Construction { TwoOrbit, ThreeOrbit, BoundaryTwoOrbit, FourOrbitSymmetric, TrivialK1 };

inline std::string_view to_string(Construction c) {
  switch (c) {
    case Construction::TwoOrbit: return "two-orbit";
    case Construction::ThreeOrbit: return "three-orbit";
    case Construction::BoundaryTwoOrbit: return "boundary-two-orbit";
    case Construction::FourOrbitSymmetric: return "four-orbit-symmetric";
    case Construction::TrivialK1: return "trivial-K1";
  }
  return "unknown";
}

class InfeasibleConstruction : public std::invalid_argument {
 public:
  explicit InfeasibleConstruction(const std::string& what) : std::invalid_argument(what) {}
};

namespace detail {

// Exact integer forms of k < (K - sqrt K)/2 and k > (K + sqrt K)/2.
inline bool below_lower_root(int factors, int k) {
  const std::int64_t d = factors - 2 * k;
  return d > 0 && d * d > factors;
}

inline bool above_upper_root(int factors, int k) {
  const std::int64_t d = 2 * k - factors;
  return d > 0 && d * d > factors;
}

// Boundary-orbit weights of the three-orbit design on lo < mid < hi with
// m1 = m2 = 0.
inline std::pair<Rational, Rational> three_orbit_weights(int factors, int lo, int mid, int hi) {
  const std::int64_t K = factors;
  const Rational w_lo(K + (2 * mid - K) * (2 * hi - K),
                      std::int64_t{4} * (mid - lo) * (hi - lo));
  const Rational w_hi(K + (2 * lo - K) * (2 * mid - K),
                      std::int64_t{4} * (hi - mid) * (hi - lo));
  return {w_lo, w_hi};
}

inline void require_factors(const OrbitSpace& space, int minimum, std::string_view what) {
  if (space.factors() < minimum) {
    throw std::invalid_argument(std::string(what) + " needs K >= " + std::to_string(minimum));
  }
}

}  // namespace detail

inline RegionCase region_case(const OrbitSpace& space) {
  const std::int64_t K = space.factors();
  const std::int64_t disc = (K - 2 * space.lower()) * (2 * space.upper() - K) - K;
  const RegionTag tag = disc < 0 ? RegionTag::Narrow
                        : disc > 0 ? RegionTag::Wide
                                   : RegionTag::Boundary;
  return {tag, disc};
}

// Optimal weight on O_L among designs supported on O_L and O_U.
inline double two_orbit_weight(const OrbitSpace& space) {
  if (region_case(space).tag != RegionTag::Narrow) {
    throw std::invalid_argument("two-orbit weight formula applies to narrow margins only");
  }
  const double K = space.factors();
  const double L = space.lower();
  const double U = space.upper();
  if (space.lower() + space.upper() == space.factors()) {
    return 0.5;
  }
  // The denominator is negative when L + U < K; the closed form still holds.
  const double spread = (U - L) * (L + U - K);
  const double denom = 2.0 * spread * (K + 1.0);
  const double root = std::sqrt(spread * spread * K * K + 4.0 * L * (K - L) * U * (K - U));
  return (spread * K - 2.0 * U * (K - U)) / denom + root / denom;
}

inline OrbitDesign solve_narrow(const OrbitSpace& space) {
  const double w_lo = two_orbit_weight(space);
  if (space.lower() + space.upper() == space.factors()) {
    return OrbitDesign(space, std::map<int, Rational>{{space.lower(), Rational(1, 2)},
                                                      {space.upper(), Rational(1, 2)}});
  }
  return OrbitDesign(space, std::map<int, double>{{space.lower(), w_lo},
                                                  {space.upper(), 1.0 - w_lo}});
}

// Interior orbit of the canonical wide-margin design. Odd K prefers (K-1)/2
// whenever L < (K - sqrt K)/2, including when (K+1)/2 would also do.
inline int interior_orbit(const OrbitSpace& space) {
  if (region_case(space).tag == RegionTag::Narrow) {
    throw std::invalid_argument("interior orbit is defined for wide margins only");
  }
  const int K = space.factors();
  if (K % 2 == 0) {
    return K / 2;
  }
  if (detail::below_lower_root(K, space.lower())) {
    return (K - 1) / 2;
  }
  if (detail::above_upper_root(K, space.upper())) {
    return (K + 1) / 2;
  }
  // Only reachable on the boundary with K an odd square and L = (K - sqrt K)/2,
  // where the interior weight is zero for any L < l < U.
  return (K - 1) / 2;
}

inline OrbitDesign solve_wide(const OrbitSpace& space) {
  detail::require_factors(space, 2, "wide-margin construction");
  const auto region = region_case(space);
  if (region.tag == RegionTag::Narrow) {
    throw std::invalid_argument("wide-margin construction needs (K - 2L)(2U - K) >= K");
  }
  const int K = space.factors();
  const int L = space.lower();
  const int U = space.upper();
  if (region.tag == RegionTag::Boundary) {
    return OrbitDesign(space, std::map<int, Rational>{{L, Rational(2 * U - K, 2 * (U - L))},
                                                      {U, Rational(K - 2 * L, 2 * (U - L))}});
  }
  const int mid = interior_orbit(space);
  const auto [w_lo, w_hi] = detail::three_orbit_weights(K, L, mid, U);
  return OrbitDesign(space,
                     std::map<int, Rational>{{L, w_lo}, {mid, Rational(1) - w_lo - w_hi}, {U, w_hi}});
}

// Three-orbit design with m1 = m2 = 0 on lo < mid < hi inside [L, U].
inline OrbitDesign general_three_orbit(const OrbitSpace& space, int lo, int mid, int hi) {
  detail::require_factors(space, 2, "three-orbit construction");
  if (!(space.lower() <= lo && lo < mid && mid < hi && hi <= space.upper())) {
    throw std::invalid_argument("three-orbit construction needs L <= lo < mid < hi <= U");
  }
  const std::int64_t K = space.factors();
  if ((K - 2 * lo) * (2 * hi - K) < K) {
    throw InfeasibleConstruction("infeasible: (K - 2*lo)(2*hi - K) >= K fails");
  }
  if ((2 * mid - K) * (2 * hi - K) < -K) {
    throw InfeasibleConstruction("infeasible: (2*mid - K)(2*hi - K) >= -K fails");
  }
  if ((2 * lo - K) * (2 * mid - K) < -K) {
    throw InfeasibleConstruction("infeasible: (2*lo - K)(2*mid - K) >= -K fails");
  }
  const auto [w_lo, w_hi] = detail::three_orbit_weights(space.factors(), lo, mid, hi);
  return OrbitDesign(space,
                     std::map<int, Rational>{{lo, w_lo}, {mid, Rational(1) - w_lo - w_hi}, {hi, w_hi}});
}

// Weights (w1, w2) of the symmetric design on k1, k2, K - k2, K - k1.
inline std::pair<Rational, Rational> four_orbit_weights(int factors, int k1, int k2) {
  const std::int64_t K = factors;
  const std::int64_t c = K - 2 * k2;
  const Rational w1(K - c * c, std::int64_t{8} * (k2 - k1) * (K - k1 - k2));
  return {w1, (Rational(1) - 2 * w1) / 2};
}

inline OrbitDesign symmetric_four_orbit(const OrbitSpace& space, int k1, int k2) {
  detail::require_factors(space, 2, "four-orbit construction");
  const int K = space.factors();
  if (k1 < space.lower()) {
    throw std::invalid_argument("four-orbit window violated: k1 >= L required");
  }
  if (!detail::below_lower_root(K, k1)) {
    throw std::invalid_argument("four-orbit window violated: k1 < (K - sqrt K)/2 required");
  }
  if (k1 >= k2) {
    throw std::invalid_argument("four-orbit window violated: k1 < k2 required");
  }
  if (detail::below_lower_root(K, k2)) {
    throw std::invalid_argument("four-orbit window violated: k2 >= (K - sqrt K)/2 required");
  }
  if (2 * k2 > K) {
    throw std::invalid_argument("four-orbit window violated: k2 <= K/2 required");
  }
  if (K - k1 > space.upper()) {
    throw std::invalid_argument("four-orbit window violated: K - k1 <= U required");
  }
  const auto [w1, w2] = four_orbit_weights(K, k1, k2);
  std::map<int, Rational> weights;
  weights[k1] += w1;
  weights[k2] += w2;
  weights[K - k2] += w2;  // merges with k2 when k2 = K/2
  weights[K - k1] += w1;
  return OrbitDesign(space, weights);
}

struct SolutionReport {
  OrbitDesign design;
  RegionCase region;
  Construction construction;
  double efficiency;
  EquivalenceReport certificate;
};

inline SolutionReport solve(const OrbitSpace& space,
                            double tolerance = kDefaultEquivalenceTolerance) {
  const auto region = region_case(space);
  auto build = [&]() -> std::pair<OrbitDesign, Construction> {
    if (space.factors() == 1) {
      return {OrbitDesign(space, std::map<int, Rational>{{0, Rational(1, 2)}, {1, Rational(1, 2)}}),
              Construction::TrivialK1};
    }
    switch (region.tag) {
      case RegionTag::Narrow: return {solve_narrow(space), Construction::TwoOrbit};
      case RegionTag::Boundary: return {solve_wide(space), Construction::BoundaryTwoOrbit};
      case RegionTag::Wide: break;
    }
    return {solve_wide(space), Construction::ThreeOrbit};
  };
  auto [design, construction] = build();
  auto certificate = equivalence_check(design, tolerance);
  if (!certificate.pass) {
    throw std::logic_error("closed-form design failed the equivalence check for K = " +
                           std::to_string(space.factors()) + ", L = " +
                           std::to_string(space.lower()) + ", U = " +
                           std::to_string(space.upper()));
  }
  const double efficiency = d_efficiency(design);
  return {std::move(design), region, construction, efficiency, std::move(certificate)};
}

}  // namespace rfd
