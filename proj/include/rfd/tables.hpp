#pragma once

// Regenerates the reference tables of optimal invariant designs: two-orbit
// designs under narrow margins, three-orbit and symmetric four-orbit designs
// under wide margins, and the 30-run design matrix for K = 6, L = 2, U = 4.
// The instance lists are fixed; every number is computed by the solver.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "rfd/exact_design.hpp"
#include "rfd/format.hpp"
#include "rfd/solver.hpp"

namespace rfd::tables {

struct Instance {
  int factors;
  int lower;
  int upper;
};

struct FourOrbitInstance {
  int factors;
  int lower;
  int upper;
  int k1;
  int k2;
};

// Narrow-margin instances with L + U <= K.
inline const std::vector<Instance>& two_orbit_instances() {
  static const std::vector<Instance> rows = {
      {2, 0, 1},
      {3, 0, 1}, {3, 1, 2},
      {4, 0, 1}, {4, 0, 2}, {4, 1, 2},
      {5, 0, 1}, {5, 0, 2}, {5, 1, 2}, {5, 1, 3}, {5, 2, 3},
      {6, 0, 1}, {6, 0, 2}, {6, 0, 3}, {6, 1, 2}, {6, 1, 3}, {6, 2, 3}, {6, 2, 4},
      {9, 0, 1}, {9, 0, 2}, {9, 0, 3}, {9, 0, 4}, {9, 1, 2}, {9, 1, 3}, {9, 1, 4}, {9, 1, 5},
      {9, 2, 3}, {9, 2, 4}, {9, 2, 5}, {9, 3, 4}, {9, 3, 5}, {9, 4, 5},
  };
  return rows;
}

// Wide-margin and boundary instances with L + U <= K.
inline const std::vector<Instance>& three_orbit_instances() {
  static const std::vector<Instance> rows = {
      {2, 0, 2},
      {3, 0, 2}, {3, 0, 3},
      {4, 0, 3}, {4, 0, 4}, {4, 1, 3},
      {5, 0, 3}, {5, 0, 4}, {5, 0, 5}, {5, 1, 4},
      {6, 0, 4}, {6, 0, 5}, {6, 0, 6}, {6, 1, 4}, {6, 1, 5},
      {9, 0, 5}, {9, 0, 6}, {9, 0, 7}, {9, 0, 8}, {9, 0, 9},
      {9, 1, 6}, {9, 1, 7}, {9, 1, 8}, {9, 2, 6}, {9, 2, 7}, {9, 3, 6},
  };
  return rows;
}

inline const std::vector<FourOrbitInstance>& four_orbit_instances() {
  static const std::vector<FourOrbitInstance> rows = {
      {3, 0, 3, 0, 1},
      {4, 0, 4, 0, 1},
      {5, 0, 4, 1, 2}, {5, 0, 5, 0, 2}, {5, 0, 5, 1, 2}, {5, 1, 4, 1, 2},
      {6, 0, 5, 1, 2}, {6, 0, 6, 0, 2}, {6, 0, 6, 1, 2}, {6, 1, 5, 1, 2},
      {9, 0, 7, 2, 4}, {9, 0, 8, 1, 4}, {9, 0, 8, 2, 4}, {9, 0, 9, 0, 4}, {9, 0, 9, 1, 4},
      {9, 0, 9, 2, 4}, {9, 1, 7, 2, 4}, {9, 1, 8, 1, 4}, {9, 1, 8, 2, 4}, {9, 2, 7, 2, 4},
  };
  return rows;
}

inline constexpr Instance kDesignMatrixInstance{6, 2, 4};
inline constexpr std::int64_t kDesignMatrixRuns = 30;

// Weight cell: four decimals, or a dash for a zero weight.
inline std::string weight_cell(double w) {
  return w == 0.0 ? std::string(kDash) : format_fixed(w);
}

inline TextTable two_orbit_table() {
  TextTable t{"optimal invariant two-orbit designs (narrow margins)",
              {"K", "(K-sqrtK)/2", "(K+sqrtK)/2", "L", "U", "wL", "wU", "efficiency"},
              {}};
  for (const auto& [K, L, U] : two_orbit_instances()) {
    const auto report = solve(OrbitSpace(K, L, U));
    const double root = std::sqrt(static_cast<double>(K));
    t.rows.push_back({std::to_string(K), format_fixed((K - root) / 2, 2),
                      format_fixed((K + root) / 2, 2), std::to_string(L), std::to_string(U),
                      weight_cell(report.design.weight(L)), weight_cell(report.design.weight(U)),
                      format_fixed(report.efficiency)});
  }
  return t;
}

inline TextTable three_orbit_table() {
  TextTable t{"optimal invariant three-orbit designs (wide margins)",
              {"K", "L", "U", "l", "wL", "wU", "wl"},
              {}};
  for (const auto& [K, L, U] : three_orbit_instances()) {
    const OrbitSpace space(K, L, U);
    const auto design = solve_wide(space);
    const int mid = interior_orbit(space);
    t.rows.push_back({std::to_string(K), std::to_string(L), std::to_string(U),
                      std::to_string(mid), weight_cell(design.weight(L)),
                      weight_cell(design.weight(U)), weight_cell(design.weight(mid))});
  }
  return t;
}

inline TextTable four_orbit_table() {
  TextTable t{"optimal symmetric invariant four-orbit designs (wide margins)",
              {"K", "L", "U", "k1", "k2", "k3", "k4", "w1", "w2", "w3", "w4"},
              {}};
  for (const auto& [K, L, U, k1, k2] : four_orbit_instances()) {
    // Validates the window; the columns show the per-orbit weights w1, w2.
    symmetric_four_orbit(OrbitSpace(K, L, U), k1, k2);
    const auto [w1r, w2r] = four_orbit_weights(K, k1, k2);
    const double w1 = to_double(w1r);
    const double w2 = to_double(w2r);
    t.rows.push_back({std::to_string(K), std::to_string(L), std::to_string(U),
                      std::to_string(k1), std::to_string(k2), std::to_string(K - k2),
                      std::to_string(K - k1), weight_cell(w1), weight_cell(w2), weight_cell(w2),
                      weight_cell(w1)});
  }
  return t;
}

inline ExactDesign design_matrix_exact() {
  const auto [K, L, U] = kDesignMatrixInstance;
  return round_to_exact(solve(OrbitSpace(K, L, U)).design, kDesignMatrixRuns);
}

inline DesignMatrix design_matrix() { return realize_matrix(design_matrix_exact()); }

}  // namespace rfd::tables
