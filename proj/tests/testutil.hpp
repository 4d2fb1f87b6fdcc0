#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tariff/market.hpp"

namespace testutil {

inline tariff::Market two_group_market() {
  return tariff::Market({{4.0, 1}, {1.0, 1}}, 4.0);
}

// Five groups, theta 16/8/4/2/1 with populations 2/3/5/10/80.
inline tariff::Market five_group_market(double supply = 100.0) {
  return tariff::Market({{16, 2}, {8, 3}, {4, 5}, {2, 10}, {1, 80}}, supply);
}

inline double rel_diff(double a, double b, double floor = 1e-12) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace testutil
