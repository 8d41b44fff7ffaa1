#pragma once

// Orbit structure of the restricted two-level design region.
//
// The region holds every x in {-1,+1}^K whose number of +1 entries lies in
// [L, U]. Permuting factors leaves the region invariant; its orbits are the
// level sets O_k = {x : d(x) = k}, k = L..U. Invariant designs are therefore
// weight vectors over orbits, and their information matrices depend only on
// two moments (m1, m2).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rfd/rational.hpp"

namespace rfd {

// Largest factor count for which binomials fit comfortably in 64 bits.
inline constexpr int kMaxFactors = 62;
// Largest factor count for which orbits are materialized point by point.
inline constexpr int kMaxEnumerableFactors = 30;

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 0; i < k; ++i) {
    r = r * static_cast<unsigned>(n - i) / static_cast<unsigned>(i + 1);
  }
  return static_cast<std::uint64_t>(r);
}

class OrbitSpace {
 public:
  OrbitSpace(int factors, int lower, int upper)
      : factors_(factors), lower_(lower), upper_(upper) {
    if (factors < 1 || factors > kMaxFactors) {
      throw std::invalid_argument("factor count K must lie in [1, " +
                                  std::to_string(kMaxFactors) + "], got " +
                                  std::to_string(factors));
    }
    if (lower < 0) {
      throw std::invalid_argument("lower bound L must be >= 0, got " + std::to_string(lower));
    }
    if (upper > factors) {
      throw std::invalid_argument("upper bound U must be <= K = " + std::to_string(factors) +
                                  ", got " + std::to_string(upper));
    }
    if (lower >= upper) {
      // L = U leaves the design matrix without full column rank.
      throw std::invalid_argument("bounds must satisfy L < U, got L = " + std::to_string(lower) +
                                  ", U = " + std::to_string(upper));
    }
  }

  int factors() const { return factors_; }
  int lower() const { return lower_; }
  int upper() const { return upper_; }
  int parameters() const { return factors_ + 1; }
  int orbit_count() const { return upper_ - lower_ + 1; }
  bool contains(int k) const { return k >= lower_ && k <= upper_; }

  std::vector<int> orbits() const {
    std::vector<int> ks;
    ks.reserve(static_cast<std::size_t>(orbit_count()));
    for (int k = lower_; k <= upper_; ++k) ks.push_back(k);
    return ks;
  }

  friend bool operator==(const OrbitSpace&, const OrbitSpace&) = default;

 private:
  int factors_;
  int lower_;
  int upper_;
};

inline OrbitSpace new_orbit_space(int factors, int lower, int upper) {
  return OrbitSpace(factors, lower, upper);
}

inline std::uint64_t orbit_size(const OrbitSpace& space, int k) {
  if (!space.contains(k)) {
    throw std::out_of_range("orbit " + std::to_string(k) + " outside [" +
                            std::to_string(space.lower()) + ", " +
                            std::to_string(space.upper()) + "]");
  }
  return binomial(space.factors(), k);
}

namespace detail {

inline void check_orbit_index(int factors, int k) {
  if (factors < 1) {
    throw std::invalid_argument("factor count must be positive");
  }
  if (k < 0 || k > factors) {
    throw std::out_of_range("orbit " + std::to_string(k) + " outside [0, " +
                            std::to_string(factors) + "]");
  }
}

}  // namespace detail

// First moment of the uniform design on orbit k: (2k - K) / K.
inline Rational orbit_m1_exact(int factors, int k) {
  detail::check_orbit_index(factors, k);
  return Rational(2 * k - factors, factors);
}

// Mixed moment of the uniform design on orbit k: ((2k - K)^2 - K) / (K (K - 1)).
inline Rational orbit_m2_exact(int factors, int k) {
  detail::check_orbit_index(factors, k);
  if (factors < 2) {
    throw std::domain_error("mixed moments need at least two factors");
  }
  const std::int64_t c = 2 * k - factors;
  return Rational(c * c - factors, static_cast<std::int64_t>(factors) * (factors - 1));
}

inline double orbit_m1(int factors, int k) { return to_double(orbit_m1_exact(factors, k)); }
inline double orbit_m2(int factors, int k) { return to_double(orbit_m2_exact(factors, k)); }

struct DesignPoint {
  std::vector<int> coords;

  int factors() const { return static_cast<int>(coords.size()); }

  // d(x) = (K + sum x_j) / 2
  int active_count() const {
    int n = 0;
    for (int c : coords) n += (c > 0) ? 1 : 0;
    return n;
  }

  // f(x) = (1, x^T)^T
  std::vector<double> regression() const {
    std::vector<double> f;
    f.reserve(coords.size() + 1);
    f.push_back(1.0);
    for (int c : coords) f.push_back(static_cast<double>(c));
    return f;
  }

  friend bool operator==(const DesignPoint&, const DesignPoint&) = default;
  friend auto operator<=>(const DesignPoint&, const DesignPoint&) = default;
};

// Visits the first `limit` points of orbit k in enumeration order and returns
// how many were visited. Points are ordered by the +1 position sets compared
// from the highest position down (colexicographic), so for K = 6, k = 2 the
// sequence starts {1,2}, {1,3}, {2,3}, {1,4}, ...
template <typename Visitor>
std::uint64_t for_each_orbit_point(int factors, int k, std::uint64_t limit, Visitor&& visit) {
  detail::check_orbit_index(factors, k);
  if (factors > kMaxEnumerableFactors) {
    throw std::length_error("orbit enumeration limited to K <= " +
                            std::to_string(kMaxEnumerableFactors));
  }
  const std::uint64_t total = binomial(factors, k);
  const std::uint64_t count = std::min(limit, total);
  // Bit j of the mask marks factor j as high; increasing masks with a fixed
  // popcount are exactly the colexicographic order.
  std::uint64_t mask = (k == 0) ? 0 : ((std::uint64_t{1} << k) - 1);
  DesignPoint point{std::vector<int>(static_cast<std::size_t>(factors), -1)};
  for (std::uint64_t i = 0; i < count; ++i) {
    for (int j = 0; j < factors; ++j) {
      point.coords[static_cast<std::size_t>(j)] = ((mask >> j) & 1U) ? 1 : -1;
    }
    visit(static_cast<const DesignPoint&>(point));
    if (mask != 0 && i + 1 < count) {
      // Gosper's hack: next larger integer with the same popcount.
      const std::uint64_t low = mask & (~mask + 1);
      const std::uint64_t ripple = mask + low;
      mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
  }
  return count;
}

inline std::vector<DesignPoint> enumerate_orbit(int factors, int k) {
  std::vector<DesignPoint> points;
  for_each_orbit_point(factors, k, binomial(factors, k),
                       [&](const DesignPoint& p) { points.push_back(p); });
  return points;
}

struct MomentSummary {
  double m1 = 0.0;
  double m2 = 0.0;
};

struct ExactMoments {
  Rational m1;
  Rational m2;

  MomentSummary to_summary() const { return {to_double(m1), to_double(m2)}; }
};

// Invariant approximate design: nonnegative orbit weights summing to one.
// Zero weights are dropped, so the key set is the support.
class OrbitDesign {
 public:
  static constexpr double kSumTolerance = 1e-12;

  OrbitDesign(OrbitSpace space, const std::map<int, double>& weights) : space_(space) {
    double total = 0.0;
    for (const auto& [k, w] : weights) {
      check_key(k);
      if (!(w >= 0.0)) {
        throw std::invalid_argument("weight for orbit " + std::to_string(k) +
                                    " must be nonnegative");
      }
      total += w;
      if (w > 0.0) weights_.emplace(k, w);
    }
    if (std::abs(total - 1.0) > kSumTolerance) {
      throw std::invalid_argument("weights must sum to 1, got " + std::to_string(total));
    }
    if (weights_.empty()) {
      throw std::invalid_argument("design has no support");
    }
  }

  OrbitDesign(OrbitSpace space, const std::map<int, Rational>& weights) : space_(space) {
    Rational total(0);
    std::map<int, Rational> exact;
    for (const auto& [k, w] : weights) {
      check_key(k);
      if (w < 0) {
        throw std::invalid_argument("weight for orbit " + std::to_string(k) +
                                    " must be nonnegative");
      }
      total += w;
      if (w != 0) {
        exact.emplace(k, w);
        weights_.emplace(k, to_double(w));
      }
    }
    if (total != 1) {
      throw std::invalid_argument("exact weights must sum to 1, got " + to_string(total));
    }
    exact_ = std::move(exact);
  }

  const OrbitSpace& space() const { return space_; }
  int factors() const { return space_.factors(); }
  const std::map<int, double>& weights() const { return weights_; }
  bool is_exact() const { return exact_.has_value(); }
  const std::optional<std::map<int, Rational>>& exact_weights() const { return exact_; }

  double weight(int k) const {
    const auto it = weights_.find(k);
    return it == weights_.end() ? 0.0 : it->second;
  }

  std::vector<int> support() const {
    std::vector<int> ks;
    for (const auto& [k, w] : weights_) ks.push_back(k);
    return ks;
  }

 private:
  void check_key(int k) const {
    if (!space_.contains(k)) {
      throw std::invalid_argument("orbit " + std::to_string(k) + " outside [" +
                                  std::to_string(space_.lower()) + ", " +
                                  std::to_string(space_.upper()) + "]");
    }
  }

  OrbitSpace space_;
  std::map<int, double> weights_;
  std::optional<std::map<int, Rational>> exact_;
};

// Exact moments of a design with rational weights. For K = 1 there are no
// mixed moments and m2 is reported as 0, which keeps the determinant and
// sensitivity formulas valid.
inline ExactMoments design_moments_exact(const OrbitDesign& design) {
  if (!design.is_exact()) {
    throw std::logic_error("design carries no exact weights");
  }
  const int factors = design.factors();
  ExactMoments m{Rational(0), Rational(0)};
  for (const auto& [k, w] : *design.exact_weights()) {
    m.m1 += w * orbit_m1_exact(factors, k);
    if (factors >= 2) m.m2 += w * orbit_m2_exact(factors, k);
  }
  return m;
}

inline MomentSummary design_moments(const OrbitDesign& design) {
  if (design.is_exact()) {
    return design_moments_exact(design).to_summary();
  }
  const int factors = design.factors();
  MomentSummary m;
  for (const auto& [k, w] : design.weights()) {
    m.m1 += w * orbit_m1(factors, k);
    if (factors >= 2) m.m2 += w * orbit_m2(factors, k);
  }
  return m;
}

}  // namespace rfd
