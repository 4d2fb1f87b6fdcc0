#include "tariff/sp.hpp"

#include <cmath>

namespace tariff {

SpSolution solve_sp(const Market& m, double eps) {
  SpSolution sol;
  const int n = m.size();
  sol.allocations.assign(n, 0.0);

  if (m.supply() == 0) {
    sol.k_eff = 0;
    sol.price = m.group(0).theta;
    sol.revenue = 0;
    return sol;
  }

  std::vector<double> value(n + 1, 0.0);  // sum N_i theta_i
  std::vector<double> count(n + 1, 0.0);  // sum N_i
  for (int i = 0; i < n; ++i) {
    value[i + 1] = value[i] + static_cast<double>(m.group(i).n) * m.group(i).theta;
    count[i + 1] = count[i] + static_cast<double>(m.group(i).n);
  }

  int k = n;
  double price = value[k] / (m.supply() + count[k]);
  while (m.group(k - 1).theta <= price + eps) {
    --k;  // terminates: theta_1 > p(1) whenever S > 0
    price = value[k] / (m.supply() + count[k]);
  }

  sol.k_eff = k;
  sol.price = price;
  double revenue = 0;
  for (int i = 0; i < k; ++i) {
    sol.allocations[i] = m.group(i).theta / price - 1.0;
    revenue += static_cast<double>(m.group(i).n) * price * sol.allocations[i];
  }
  sol.revenue = revenue;
  return sol;
}

CpSpComparison compare_cp_sp(const Market& m, double eps) {
  if (m.supply() <= 0)
    throw validation_error("compare_cp_sp: supply must be positive");
  const CpSolution cp = solve_cp(m, eps);
  const SpSolution sp = solve_sp(m, eps);

  CpSpComparison r;
  r.k_cp = cp.k_eff;
  r.k_sp = sp.k_eff;
  r.crossing_theta = sp.price * sp.price / cp.lambda_star;

  r.crossing_index = 0;
  for (int i = 0; i < sp.k_eff; ++i) {
    if (m.group(i).theta >= r.crossing_theta - eps) r.crossing_index = i + 1;
  }
  if (r.crossing_index == 0)
    throw consistency_error("compare_cp_sp: crossing above theta_1 should be impossible");

  auto side = [eps](double cp_value, double sp_value) {
    if (cp_value > sp_value + eps) return Side::cp_higher;
    if (cp_value < sp_value - eps) return Side::cp_lower;
    return Side::boundary;
  };
  r.price_side.resize(sp.k_eff);
  r.alloc_side.resize(sp.k_eff);
  for (int i = 0; i < sp.k_eff; ++i) {
    r.price_side[i] = side(cp.prices[i], sp.price);
    r.alloc_side[i] = side(cp.allocations[i], sp.allocations[i]);
  }
  return r;
}

}  // namespace tariff
