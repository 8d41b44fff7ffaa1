// Solve one instance, certify it and round it to an exact design.
//
//   solve_and_round [K L U N]     defaults: 6 2 4 30

#include <cstdlib>
#include <iostream>

#include "rfd/rfd.hpp"

int main(int argc, char** argv) {
  int K = 6, L = 2, U = 4;
  long N = 30;
  if (argc == 5) {
    K = std::atoi(argv[1]);
    L = std::atoi(argv[2]);
    U = std::atoi(argv[3]);
    N = std::atol(argv[4]);
  }

  const rfd::OrbitSpace space(K, L, U);
  const auto sol = rfd::solve(space);
  std::cout << "case " << rfd::to_string(sol.region.tag) << ", " << rfd::to_string(sol.construction)
            << " design, efficiency " << rfd::format_fixed(sol.efficiency) << "\n";
  for (const auto& [k, w] : sol.design.weights()) {
    std::cout << "  orbit " << k << ": " << rfd::format_fixed(w) << "\n";
  }

  const auto oracle = rfd::brute_force_solve(space);
  std::cout << "oracle det " << oracle.det << " vs closed form " << rfd::det_information(sol.design)
            << "\n";

  try {
    const auto exact = rfd::round_to_exact(sol.design, N);
    std::cout << N << " runs, exact efficiency " << rfd::format_fixed(rfd::exact_efficiency(exact))
              << "\n"
              << rfd::to_pm_text(rfd::realize_matrix(exact));
  } catch (const std::exception& e) {
    // Too few runs for the rounding, or the rows do not estimate every effect.
    std::cerr << N << " runs: " << e.what() << "\n";
    return 1;
  }
}
