#pragma once

#include <random>
#include <vector>

#include "tariff/iccp.hpp"
#include "tariff/market.hpp"

namespace tariff {

// Brute-force verifiers, deliberately independent of the solvers they check:
// bisection instead of the closed form, grid search instead of threshold
// search, unrestricted partition enumeration instead of consecutive.
struct OracleConfig {
  int price_grid_points = 100000;
  double bisection_tol = 1e-10;       // residual tolerance for the multiplier
  int max_groups_exhaustive = 12;     // unrestricted enumeration caps
  int max_clusters_exhaustive = 4;
};

// Solves sum_i N_i (sqrt(theta_i/lambda) - 1)^+ = S by monotone bisection.
double brute_lambda_bisection(const Market& m, double residual_tol = 1e-10);

struct BruteSpResult {
  double price = 0;
  double revenue = 0;
};

// Maximizes p * demand(p) over a log-spaced grid, skipping prices whose
// induced total demand exceeds the supply.
BruteSpResult brute_best_single_price(const Market& m, int grid_points);

struct PpExhaustive {
  double revenue = 0;                      // max over every effective subset and partition
  std::vector<std::vector<int>> clusters;  // argmax clusters (0-based group indices)
  std::vector<int> effective;              // argmax effective set, ascending
  // Per-shape maxima, for checking that consecutive clusters on a prefix
  // are never beaten by any other shape.
  double best_consecutive_prefix = 0;
  double best_other = 0;
};

// Enumerates every nonempty subset of groups as a candidate effective market
// and every set partition of it into at most j clusters, pricing each
// cluster off the shared multiplier and keeping candidates where every
// member stays effective.
PpExhaustive brute_pp_exhaustive(const Market& m, int j, const OracleConfig& cfg = {});

struct BruteResponse {
  int step = -1;
  double quantity = 0;
  double surplus = 0;
};

// Dense-grid surplus maximization over (0, s_max] against the whole menu.
BruteResponse brute_user_best_response(const PriceMenu& menu, double theta,
                                       double s_max, int grid_points = 200000);

// Random market for differential tests: theta log-uniform on [0.1, 100] with
// pairwise ratios at least 1+1e-3, N uniform on {1..50}, S log-uniform on
// [0.01, 1e3].
Market random_market(std::mt19937_64& rng, int max_groups = 6);

}  // namespace tariff
