#pragma once

#include <vector>

#include "tariff/errors.hpp"
#include "tariff/numeric.hpp"

namespace tariff {

// One user class: willingness to pay and number of homogeneous users.
struct Group {
  double theta = 0;  // > 0
  long long n = 0;   // >= 1
};

// A user's best response to a linear unit price.
struct DemandResult {
  double quantity = 0;  // zero whenever price >= theta
  double surplus = 0;   // utility minus payment at that quantity
};

// theta * ln(1 + s).
double utility(double theta, double s);

// Surplus-maximizing demand at a positive unit price:
// quantity = max(theta/price - 1, 0).
DemandResult demand(double theta, double price);

// theta * ln(1 + s) - price * s at an arbitrary quantity.
double surplus_at(double theta, double s, double price);

// Ordered group list (strictly decreasing theta) plus the shared supply.
// Construction sorts and validates; instances are immutable afterwards.
class Market {
 public:
  Market(std::vector<Group> groups, double supply);

  const std::vector<Group>& groups() const { return groups_; }
  const Group& group(int i) const { return groups_[static_cast<std::size_t>(i)]; }
  double supply() const { return supply_; }
  int size() const { return static_cast<int>(groups_.size()); }

 private:
  std::vector<Group> groups_;
  double supply_ = 0;
};

// Sorts descending by theta and validates; rejects empty lists, nonpositive
// theta, n < 1, negative supply, and duplicate theta values.
Market validate_market(std::vector<Group> groups, double supply);

}  // namespace tariff
