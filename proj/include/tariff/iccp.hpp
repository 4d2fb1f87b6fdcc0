#pragma once

#include <vector>

#include "tariff/cp.hpp"
#include "tariff/market.hpp"

namespace tariff {

// One step of the quantity-based menu: the price applies when the purchased
// quantity s satisfies lower < s <= upper (the top step has upper = +inf).
struct MenuStep {
  double price = 0;
  double lower = 0;
  double upper = 0;
};

// Decreasing step function of unit price vs purchased quantity.  Larger
// quantities fall into higher-priced steps, so the observable quantity
// reveals the buyer's willingness to pay.
struct PriceMenu {
  std::vector<MenuStep> steps;      // prices strictly decreasing
  std::vector<double> thresholds;   // size steps-1, strictly decreasing, positive
};

// Unit price the menu charges at quantity s > 0.
double menu_price_at(const PriceMenu& menu, double s);

// Sufficiency thresholds for truthful self-selection: the menu replicates
// the differentiated optimum whenever each adjacent willingness-to-pay ratio
// sqrt(theta_q/theta_{q+1}) clears its threshold t_q.
struct IcFeasibility {
  std::vector<double> t_thresholds;  // t_q, q = 1..K-1, each in (1, t_root)
  std::vector<double> ratios;        // sqrt(theta_q / theta_{q+1})
  std::vector<double> margins;       // ratios - t_thresholds
  bool feasible = true;
};

// Larger root of t^2 ln t = t^2 - 1; every t_q lies strictly below it.
double ic_t_root();

// Quantity at the cheaper price p_q at which a group-i user is exactly as
// well off as at its intended (price, quantity) pair; the smaller of the two
// roots (below s_i_star) is returned, to 1e-10 absolute.
double indifference_quantity(double theta_i, double p_i_star, double p_q_star,
                             double s_i_star);

// Solves each threshold equation by bisection on (1, 2.5]; trivially
// feasible with no thresholds when fewer than two groups are effective.
IcFeasibility feasibility_thresholds(const Market& m, const CpSolution& cp);

enum class ThresholdPlacement {
  tight,     // threshold at the next group's intended quantity
  midpoint,  // halfway up the admissible band, for robustness experiments
};

// Menu with the differentiated prices and quantity thresholds placed so that
// every effective group self-selects its intended pair.  Throws
// infeasible_error when the market fails the incentive condition.
PriceMenu build_menu(const Market& m, const CpSolution& cp,
                     ThresholdPlacement placement = ThresholdPlacement::tight);

struct GroupChoice {
  int step = -1;  // 0-based chosen step; -1 = stays out
  double quantity = 0;
  double surplus = 0;
  int intended_step = -1;
  double intended_quantity = 0;
  double intended_surplus = 0;
};

// Verdict of simulating every group's best response against the menu.
struct SelectionReport {
  std::vector<GroupChoice> choices;
  bool compatible = false;  // every group picks its intended pair (or stays out)
  double revenue = 0;
};

// Exact per-step best response (closed-form clamp into each interval).
SelectionReport simulate_self_selection(const PriceMenu& menu, const Market& m,
                                        const CpSolution& cp);

}  // namespace tariff
