#include "tariff/cp.hpp"

#include <cmath>

namespace tariff {

namespace {

// Prefix sums used by the water-filling search.
struct Prefix {
  std::vector<double> weight;  // sum N_i sqrt(theta_i)
  std::vector<double> count;   // sum N_i
};

Prefix prefix_sums(const Market& m) {
  Prefix p;
  p.weight.resize(m.size() + 1, 0.0);
  p.count.resize(m.size() + 1, 0.0);
  for (int i = 0; i < m.size(); ++i) {
    const Group& g = m.group(i);
    p.weight[i + 1] = p.weight[i] + static_cast<double>(g.n) * std::sqrt(g.theta);
    p.count[i + 1] = p.count[i] + static_cast<double>(g.n);
  }
  return p;
}

double lambda_at(const Prefix& p, double supply, int k) {
  const double ratio = p.weight[k] / (supply + p.count[k]);
  return ratio * ratio;
}

}  // namespace

double water_fill_lambda(const Market& m, int k) {
  if (k < 1 || k > m.size())
    throw validation_error("water_fill_lambda: k out of range");
  return lambda_at(prefix_sums(m), m.supply(), k);
}

CpSolution solve_cp(const Market& m, double eps) {
  CpSolution sol;
  const int n = m.size();
  sol.prices.resize(n);
  sol.allocations.assign(n, 0.0);
  sol.admitted.resize(n);
  for (int i = 0; i < n; ++i) {
    sol.prices[i] = m.group(i).theta;
    sol.admitted[i] = m.group(i).n;
  }

  if (m.supply() == 0) {
    sol.k_eff = 0;
    sol.lambda_star = m.group(0).theta;  // water level at the top: nobody buys
    sol.revenue = 0;
    return sol;
  }

  const Prefix p = prefix_sums(m);
  int k = n;
  double lambda = lambda_at(p, m.supply(), k);
  while (m.group(k - 1).theta <= lambda + eps) {
    --k;  // terminates: theta_1 > lambda(1) whenever S > 0
    lambda = lambda_at(p, m.supply(), k);
  }

  sol.k_eff = k;
  sol.lambda_star = lambda;
  double revenue = 0;
  for (int i = 0; i < k; ++i) {
    const Group& g = m.group(i);
    sol.allocations[i] = std::sqrt(g.theta / lambda) - 1.0;
    sol.prices[i] = std::sqrt(g.theta * lambda);
    revenue += static_cast<double>(g.n) * sol.prices[i] * sol.allocations[i];
  }
  sol.revenue = revenue;
  return sol;
}

CpDecomposition cp_revenue_decomposition(const Market& m, const CpSolution& sol) {
  if (static_cast<int>(sol.prices.size()) != m.size() ||
      static_cast<int>(sol.allocations.size()) != m.size())
    throw validation_error("cp_revenue_decomposition: solution does not match market");
  CpDecomposition d;
  if (sol.k_eff == 0) return d;
  const double lambda_check = water_fill_lambda(m, sol.k_eff);
  if (std::abs(lambda_check - sol.lambda_star) >
      1e-6 * std::max(1.0, std::abs(lambda_check)))
    throw validation_error("cp_revenue_decomposition: solution does not match market");

  for (int i = 0; i < sol.k_eff; ++i) d.n_eff += static_cast<double>(m.group(i).n);
  d.s_bar = m.supply() / d.n_eff;
  for (int i = 0; i < sol.k_eff; ++i)
    d.theta_bar += static_cast<double>(m.group(i).n) / d.n_eff * m.group(i).theta;
  for (int i = 0; i < sol.k_eff; ++i) {
    const double gi = static_cast<double>(m.group(i).n) / d.n_eff;
    for (int j = i + 1; j < sol.k_eff; ++j) {
      const double gj = static_cast<double>(m.group(j).n) / d.n_eff;
      const double dp = sol.prices[i] - sol.prices[j];
      d.gain += gi * gj * dp * dp;
    }
  }
  d.gain /= sol.lambda_star;
  d.revenue = d.n_eff * (d.s_bar * d.theta_bar + d.gain) / (d.s_bar + 1.0);
  return d;
}

}  // namespace tariff
