#pragma once

#include <vector>

#include "tariff/market.hpp"

namespace tariff {

// Complete price differentiation: one tailored price per group.  Vectors are
// indexed like market.groups().  k_eff == 0 encodes the S == 0 degenerate
// solution (all allocations zero, prices at theta, lambda pinned at theta_1).
struct CpSolution {
  double lambda_star = 0;  // multiplier; 1/sqrt(lambda) is the water level
  int k_eff = 0;           // effective market size
  std::vector<double> prices;
  std::vector<double> allocations;
  std::vector<long long> admitted;  // always N_i: admission control is never binding
  double revenue = 0;
};

// lambda(k) = (sum_{i<=k} N_i sqrt(theta_i) / (S + sum_{i<=k} N_i))^2 for the
// prefix of the first k groups (k is 1-based).
double water_fill_lambda(const Market& m, int k);

// Water-fills from k = I downward until theta_k clears the water level, then
// prices each effective group at sqrt(theta_i * lambda).
CpSolution solve_cp(const Market& m, double eps = kEpsilon);

// Revenue split into the effective-market average term and the
// differentiation gain coming from price dispersion.
struct CpDecomposition {
  double n_eff = 0;      // users in the effective market
  double s_bar = 0;      // S / n_eff
  double theta_bar = 0;  // population-weighted mean theta over the effective market
  double gain = 0;       // (1/lambda) sum_{i<j} gamma_i gamma_j (p_i - p_j)^2
  double revenue = 0;    // n_eff * (s_bar*theta_bar + gain) / (s_bar + 1)
};

CpDecomposition cp_revenue_decomposition(const Market& m, const CpSolution& sol);

}  // namespace tariff
