#include "tariff/iccp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tariff/numeric.hpp"

namespace tariff {

double menu_price_at(const PriceMenu& menu, double s) {
  if (menu.steps.empty()) throw validation_error("menu_price_at: empty menu");
  if (s <= 0) throw validation_error("menu_price_at: quantity must be positive");
  std::size_t q = 0;
  while (q < menu.thresholds.size() && s <= menu.thresholds[q]) ++q;
  return menu.steps[q].price;
}

double ic_t_root() {
  // t^2 ln t - (t^2 - 1) is negative on (1, root) and increasing beyond.
  return bisect([](double t) { return t * t * std::log(t) - (t * t - 1.0); },
                1.5, 3.0, 1e-12);
}

double indifference_quantity(double theta_i, double p_i_star, double p_q_star,
                             double s_i_star) {
  if (!(p_q_star > 0) || !(p_q_star < p_i_star))
    throw validation_error("indifference_quantity: need 0 < p_q < p_i");
  if (!(theta_i > p_i_star))
    throw validation_error("indifference_quantity: group must be effective (theta > p)");
  if (!(s_i_star > 0))
    throw validation_error("indifference_quantity: intended quantity must be positive");
  const double target = surplus_at(theta_i, s_i_star, p_i_star);
  // f is strictly increasing on [0, s_i_star] (the demand at p_q lies above
  // s_i_star), f(0) = -target < 0 and f(s_i_star) = s_i_star (p_i - p_q) > 0,
  // so the smaller root is bracketed by construction.
  auto f = [&](double s) { return theta_i * std::log1p(s) - p_q_star * s - target; };
  if (!(f(0.0) < 0) || !(f(s_i_star) > 0))
    throw consistency_error("indifference_quantity: bracket lost its sign change");
  return bisect(f, 0.0, s_i_star, 1e-10, 400);
}

IcFeasibility feasibility_thresholds(const Market& m, const CpSolution& cp) {
  IcFeasibility out;
  const int k = cp.k_eff;
  if (k < 2) return out;  // nothing to separate

  double n_eff = 0;
  for (int i = 0; i < k; ++i) n_eff += static_cast<double>(m.group(i).n);
  const double denom = m.supply() + n_eff;

  double head = 0;  // sum of N over groups 1..q
  out.feasible = true;
  for (int q = 1; q < k; ++q) {
    head += static_cast<double>(m.group(q - 1).n);
    const double tail = static_cast<double>(m.group(q).n);  // N_{q+1}
    auto g = [&](double t) {
      return t * t * std::log(t) - (t * t - 1.0) +
             (t * head + tail) / denom * (t - 1.0);
    };
    // g(1) = 0 with negative slope, g convex, g(2.5) > 0: unique root > 1.
    const double lo = 1.0 + 1e-9;
    if (!(g(lo) < 0))
      throw consistency_error("feasibility_thresholds: slope at 1 not negative");
    const double t_q = bisect(g, lo, 2.5, 1e-10, 400);
    const double ratio = std::sqrt(m.group(q - 1).theta / m.group(q).theta);
    out.t_thresholds.push_back(t_q);
    out.ratios.push_back(ratio);
    out.margins.push_back(ratio - t_q);
    if (ratio - t_q < 0) out.feasible = false;
  }
  return out;
}

PriceMenu build_menu(const Market& m, const CpSolution& cp,
                     ThresholdPlacement placement) {
  const int k = cp.k_eff;
  if (k < 1) throw validation_error("build_menu: empty effective market");
  const IcFeasibility fz = feasibility_thresholds(m, cp);
  if (!fz.feasible) {
    for (std::size_t q = 0; q < fz.margins.size(); ++q) {
      if (fz.margins[q] < 0)
        throw infeasible_error(
            "build_menu: willingness-to-pay ratio " + std::to_string(fz.ratios[q]) +
                " below threshold " + std::to_string(fz.t_thresholds[q]) +
                " for adjacent pair " + std::to_string(q + 1),
            static_cast<int>(q + 1), fz.margins[q]);
    }
  }

  PriceMenu menu;
  const double inf = std::numeric_limits<double>::infinity();
  if (k == 1) {
    menu.steps.push_back(MenuStep{cp.prices[0], 0.0, inf});
    return menu;
  }

  // Admissible band for the threshold between steps q-1 and q:
  // [s*_q, min_{i<q} s_{i->q}].  The tight end keeps intended quantities at
  // their step's inclusive upper edge.
  std::vector<double> band_high(k, inf);
  for (int q = 1; q < k; ++q) {
    double lowest = inf;
    for (int i = 0; i < q; ++i) {
      lowest = std::min(lowest, indifference_quantity(m.group(i).theta, cp.prices[i],
                                                      cp.prices[q], cp.allocations[i]));
    }
    band_high[q] = lowest;
    if (lowest < cp.allocations[q] - 1e-12)
      throw consistency_error("build_menu: admissible threshold band is empty");
  }

  menu.thresholds.resize(k - 1);
  for (int q = 1; q < k; ++q) {
    menu.thresholds[q - 1] = placement == ThresholdPlacement::tight
                                 ? cp.allocations[q]
                                 : 0.5 * (cp.allocations[q] + band_high[q]);
  }
  menu.steps.resize(k);
  for (int q = 0; q < k; ++q) {
    menu.steps[q].price = cp.prices[q];
    menu.steps[q].upper = q == 0 ? inf : menu.thresholds[q - 1];
    menu.steps[q].lower = q == k - 1 ? 0.0 : menu.thresholds[q];
  }
  return menu;
}

SelectionReport simulate_self_selection(const PriceMenu& menu, const Market& m,
                                        const CpSolution& cp) {
  SelectionReport report;
  report.choices.resize(m.size());
  report.compatible = true;

  for (int i = 0; i < m.size(); ++i) {
    const double theta = m.group(i).theta;
    GroupChoice& c = report.choices[i];
    // Staying out is always available.
    c.step = -1;
    c.quantity = 0;
    c.surplus = 0;
    for (std::size_t q = 0; q < menu.steps.size(); ++q) {
      const MenuStep& st = menu.steps[q];
      const double unconstrained = theta / st.price - 1.0;
      double s;
      if (unconstrained >= st.upper)
        s = st.upper;  // the upper edge belongs to this step
      else if (unconstrained > st.lower)
        s = unconstrained;
      else
        continue;  // quantities at or below the lower edge belong to the cheaper step
      if (!std::isfinite(s) || s <= 0) continue;
      const double surplus = surplus_at(theta, s, st.price);
      if (surplus > c.surplus) {
        c.step = static_cast<int>(q);
        c.quantity = s;
        c.surplus = surplus;
      }
    }

    if (i < cp.k_eff && i < static_cast<int>(menu.steps.size())) {
      c.intended_step = i;
      c.intended_quantity = cp.allocations[i];
      c.intended_surplus = surplus_at(theta, cp.allocations[i], cp.prices[i]);
      if (c.step != i || std::abs(c.quantity - c.intended_quantity) > 1e-8)
        report.compatible = false;
    } else {
      // Groups beyond the effective market face prices above their theta and
      // are expected to stay out.
      if (c.quantity > 1e-12) report.compatible = false;
    }
    if (c.step >= 0)
      report.revenue += static_cast<double>(m.group(i).n) *
                        menu.steps[static_cast<std::size_t>(c.step)].price * c.quantity;
  }
  return report;
}

}  // namespace tariff
