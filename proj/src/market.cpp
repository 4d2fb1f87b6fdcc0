#include "tariff/market.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tariff {

namespace {

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw validation_error(std::string(what) + " must be finite");
}

}  // namespace

double utility(double theta, double s) {
  check_finite(theta, "theta");
  check_finite(s, "quantity");
  if (theta <= 0) throw validation_error("utility: theta must be positive");
  if (s < 0) throw validation_error("utility: quantity must be nonnegative");
  return theta * std::log1p(s);
}

DemandResult demand(double theta, double price) {
  check_finite(theta, "theta");
  check_finite(price, "price");
  if (theta <= 0) throw validation_error("demand: theta must be positive");
  if (price <= 0) throw validation_error("demand: price must be positive");
  DemandResult r;
  r.quantity = std::max(theta / price - 1.0, 0.0);
  r.surplus = r.quantity > 0 ? utility(theta, r.quantity) - price * r.quantity : 0.0;
  return r;
}

double surplus_at(double theta, double s, double price) {
  check_finite(price, "price");
  if (price < 0) throw validation_error("surplus_at: price must be nonnegative");
  return utility(theta, s) - price * s;
}

Market::Market(std::vector<Group> groups, double supply) {
  if (groups.empty()) throw validation_error("market: group list is empty");
  check_finite(supply, "supply");
  if (supply < 0) throw validation_error("market: supply must be nonnegative");
  for (std::size_t i = 0; i < groups.size(); ++i) {
    check_finite(groups[i].theta, "theta");
    if (groups[i].theta <= 0)
      throw validation_error("market: group " + std::to_string(i) + " has nonpositive theta");
    if (groups[i].n < 1)
      throw validation_error("market: group " + std::to_string(i) + " has n < 1");
  }

  // Sort by descending theta while remembering the caller's positions so a
  // duplicate can name both offending entries.
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return groups[a].theta > groups[b].theta;
  });
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    if (groups[order[i]].theta == groups[order[i + 1]].theta)
      throw duplicate_theta_error(order[i], order[i + 1], groups[order[i]].theta);
  }

  groups_.reserve(groups.size());
  for (std::size_t idx : order) groups_.push_back(groups[idx]);
  supply_ = supply;
}

Market validate_market(std::vector<Group> groups, double supply) {
  return Market(std::move(groups), supply);
}

}  // namespace tariff
