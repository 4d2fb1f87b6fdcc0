#pragma once

#include <vector>

#include "tariff/cp.hpp"
#include "tariff/market.hpp"

namespace tariff {

// Single pricing: one common price for every group.  k_eff == 0 encodes the
// S == 0 degenerate solution (price pinned at theta_1, nobody buys).
struct SpSolution {
  double price = 0;  // p* = sum_{i<=K} N_i theta_i / (S + sum_{i<=K} N_i)
  int k_eff = 0;
  std::vector<double> allocations;
  double revenue = 0;
};

SpSolution solve_sp(const Market& m, double eps = kEpsilon);

// Which side of the single price a group's tailored price falls on.
enum class Side { cp_lower = -1, boundary = 0, cp_higher = 1 };

// Structural comparison of the two schemes: groups above the crossing value
// theta = p*^2/lambda* pay more and receive less under differentiation, the
// rest pay less and receive more.
struct CpSpComparison {
  int k_cp = 0;
  int k_sp = 0;
  double crossing_theta = 0;        // p*^2 / lambda*
  int crossing_index = 0;           // largest 1-based i <= k_sp with theta_i >= crossing
  std::vector<Side> price_side;     // size k_sp: tailored price vs single price
  std::vector<Side> alloc_side;     // size k_sp: tailored allocation vs single-price allocation
};

CpSpComparison compare_cp_sp(const Market& m, double eps = kEpsilon);

}  // namespace tariff
