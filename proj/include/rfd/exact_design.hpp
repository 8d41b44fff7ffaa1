#pragma once

// Exact N-run designs from orbit weights, and their +-1 design matrices.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rfd/information.hpp"
#include "rfd/orbit.hpp"

namespace rfd {

using DesignMatrix = std::vector<DesignPoint>;

class ExactDesign {
 public:
  ExactDesign(OrbitSpace space, std::map<int, std::int64_t> orbit_runs)
      : space_(space), orbit_runs_(std::move(orbit_runs)) {
    for (auto it = orbit_runs_.begin(); it != orbit_runs_.end();) {
      if (!space_.contains(it->first)) {
        throw std::invalid_argument("orbit " + std::to_string(it->first) + " outside [L, U]");
      }
      if (it->second < 0) {
        throw std::invalid_argument("run counts must be nonnegative");
      }
      runs_ += it->second;
      it = (it->second == 0) ? orbit_runs_.erase(it) : std::next(it);
    }
    if (runs_ <= 0) {
      throw std::invalid_argument("exact design needs at least one run");
    }
  }

  const OrbitSpace& space() const { return space_; }
  std::int64_t runs() const { return runs_; }
  const std::map<int, std::int64_t>& orbit_runs() const { return orbit_runs_; }

  std::int64_t orbit_runs(int k) const {
    const auto it = orbit_runs_.find(k);
    return it == orbit_runs_.end() ? 0 : it->second;
  }

  // Replicates of the point with enumeration rank `rank` in orbit k: the base
  // count for every point, plus one for the first N_k mod C(K,k) points.
  std::int64_t replicates(int k, std::uint64_t rank) const {
    const auto size = binomial(space_.factors(), k);
    if (rank >= size) {
      throw std::out_of_range("point rank outside orbit");
    }
    const auto n = static_cast<std::uint64_t>(orbit_runs(k));
    return static_cast<std::int64_t>(n / size + (rank < n % size ? 1 : 0));
  }

  // Every orbit replicates all of its points equally often.
  bool is_balanced() const {
    for (const auto& [k, n] : orbit_runs_) {
      if (static_cast<std::uint64_t>(n) % binomial(space_.factors(), k) != 0) return false;
    }
    return true;
  }

  // The invariant design with weights N_k / N.
  OrbitDesign induced_design() const {
    std::map<int, Rational> weights;
    for (const auto& [k, n] : orbit_runs_) weights[k] = Rational(n, runs_);
    return OrbitDesign(space_, weights);
  }

 private:
  OrbitSpace space_;
  std::map<int, std::int64_t> orbit_runs_;
  std::int64_t runs_ = 0;
};

// Efficient rounding of N w_k: seed n_k = ceil((N - s/2) w_k) on the s
// support orbits, then add runs where n_k / w_k is smallest or remove them
// where (n_k - 1) / w_k is largest until the total is N. Ties go to the lower
// orbit index.
inline ExactDesign round_to_exact(const OrbitDesign& design, std::int64_t runs) {
  const auto support = design.support();
  const auto s = static_cast<std::int64_t>(support.size());
  if (runs < s) {
    throw std::invalid_argument("N = " + std::to_string(runs) + " is too small: " +
                                std::to_string(s) + " support orbits need one run each");
  }

  std::vector<double> w;
  std::vector<std::int64_t> n;
  for (int k : support) {
    w.push_back(design.weight(k));
    if (design.is_exact()) {
      // ceil(((2N - s) / 2) * w) in exact arithmetic
      const Rational x = Rational(2 * runs - s, 2) * design.exact_weights()->at(k);
      std::int64_t c = x.numerator() / x.denominator();
      if (c * x.denominator() < x.numerator()) ++c;
      n.push_back(c);
    } else {
      const double x = (static_cast<double>(runs) - 0.5 * static_cast<double>(s)) * w.back();
      n.push_back(static_cast<std::int64_t>(std::ceil(x - 1e-9 * std::max(1.0, x))));
    }
    n.back() = std::max<std::int64_t>(n.back(), 1);
  }

  std::int64_t total = 0;
  for (auto v : n) total += v;
  while (total < runs) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n.size(); ++i) {
      if (n[i] / w[i] < n[best] / w[best]) best = i;
    }
    ++n[best];
    ++total;
  }
  while (total > runs) {
    std::size_t best = n.size();
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (n[i] <= 1) continue;
      if (best == n.size() || (n[i] - 1) / w[i] > (n[best] - 1) / w[best]) best = i;
    }
    --n[best];
    --total;
  }

  std::map<int, std::int64_t> orbit_runs;
  for (std::size_t i = 0; i < support.size(); ++i) orbit_runs[support[i]] = n[i];
  return ExactDesign(design.space(), orbit_runs);
}

// Rows grouped by ascending orbit; within an orbit, points follow enumeration
// order with their replicates adjacent.
inline DesignMatrix realize_matrix(const ExactDesign& exact) {
  const int K = exact.space().factors();
  DesignMatrix rows;
  rows.reserve(static_cast<std::size_t>(exact.runs()));
  for (const auto& [k, n_k] : exact.orbit_runs()) {
    std::uint64_t rank = 0;
    for_each_orbit_point(K, k, static_cast<std::uint64_t>(n_k), [&](const DesignPoint& x) {
      const auto reps = exact.replicates(k, rank++);
      for (std::int64_t r = 0; r < reps; ++r) rows.push_back(x);
    });
  }
  return rows;
}

// N^-1 F^T F for the given rows.
inline Eigen::MatrixXd normalized_gram(const DesignMatrix& rows, int factors) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(factors + 1, factors + 1);
  Eigen::VectorXd f(factors + 1);
  for (const auto& x : rows) {
    f(0) = 1.0;
    for (int j = 0; j < factors; ++j) f(j + 1) = x.coords[static_cast<std::size_t>(j)];
    g.noalias() += f * f.transpose();
  }
  return g / static_cast<double>(rows.size());
}

inline double exact_efficiency(const ExactDesign& exact) {
  const int K = exact.space().factors();
  if (exact.is_balanced()) {
    const auto induced = exact.induced_design();
    if (!is_regular(induced)) {
      throw SingularDesign("exact design does not have full column rank");
    }
    return d_efficiency(induced);
  }
  const auto gram = normalized_gram(realize_matrix(exact), K);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (lu.rank() < K + 1) {
    throw SingularDesign("exact design does not have full column rank");
  }
  return std::pow(lu.determinant(), 1.0 / (K + 1));
}

}  // namespace rfd
