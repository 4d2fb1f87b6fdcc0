#include <cmath>
#include <random>

#include "doctest.h"
#include "tariff/oracle.hpp"
#include "tariff/sp.hpp"
#include "testutil.hpp"

using namespace tariff;

TEST_CASE("solve_sp on the worked two-group instance") {
  const Market m = testutil::two_group_market();
  const SpSolution sol = solve_sp(m);
  CHECK(sol.price == doctest::Approx(5.0 / 6).epsilon(1e-14));
  CHECK(sol.k_eff == 2);
  CHECK(sol.allocations[0] == doctest::Approx(3.8).epsilon(1e-12));
  CHECK(sol.allocations[1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(sol.revenue == doctest::Approx(10.0 / 3).epsilon(1e-12));
}

TEST_CASE("solve_sp drops the low group when supply is scarce") {
  const Market m({{4, 1}, {1, 1}}, 1);
  const SpSolution sol = solve_sp(m);
  CHECK(sol.price == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sol.k_eff == 1);
  CHECK(sol.revenue == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("single group: both schemes coincide") {
  const Market m({{4, 1}}, 1);
  CHECK(solve_sp(m).revenue == doctest::Approx(solve_cp(m).revenue).epsilon(1e-12));
  CHECK(solve_sp(m).price == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("zero supply sentinel") {
  const Market m = testutil::two_group_market();
  const Market dry(std::vector<Group>(m.groups()), 0.0);
  const SpSolution sol = solve_sp(dry);
  CHECK(sol.k_eff == 0);
  CHECK(sol.revenue == 0);
  CHECK(sol.price == 4);
}

TEST_CASE("comparison report on the worked instance") {
  const Market m = testutil::two_group_market();
  const CpSpComparison r = compare_cp_sp(m);
  CHECK(r.k_cp == 2);
  CHECK(r.k_sp == 2);
  CHECK(r.crossing_theta == doctest::Approx(25.0 / 9).epsilon(1e-12));
  CHECK(r.crossing_index == 1);
  CHECK(r.price_side[0] == Side::cp_higher);   // 1 > 5/6
  CHECK(r.alloc_side[0] == Side::cp_lower);    // 3 < 3.8
  CHECK(r.price_side[1] == Side::cp_lower);    // 0.5 < 5/6
  CHECK(r.alloc_side[1] == Side::cp_higher);   // 1 > 0.2
}

TEST_CASE("comparison on the five-group instance") {
  const Market m = testutil::five_group_market();
  const CpSpComparison r = compare_cp_sp(m);
  CHECK(r.k_cp == 5);
  CHECK(r.k_sp == 5);
  CHECK(r.k_sp <= r.k_cp);
}

TEST_CASE("single-group comparison is all boundary at the crossing") {
  const Market m({{4, 1}}, 1);
  const CpSpComparison r = compare_cp_sp(m);
  CHECK(r.crossing_index == 1);
  CHECK(r.price_side[0] == Side::boundary);
  CHECK(r.alloc_side[0] == Side::boundary);
}

TEST_CASE("randomized: structural comparison and revenue dominance") {
  std::mt19937_64 rng(555);
  for (int it = 0; it < 300; ++it) {
    const Market m = random_market(rng);
    const CpSolution cp = solve_cp(m);
    const SpSolution sp = solve_sp(m);
    CHECK(cp.revenue >= sp.revenue - 1e-9 * std::max(1.0, sp.revenue));
    if (cp.k_eff == 1) {
      CHECK(testutil::rel_diff(cp.revenue, sp.revenue) < 1e-9);
    } else {
      CHECK(cp.revenue > sp.revenue);
    }

    const CpSpComparison r = compare_cp_sp(m);
    CHECK(r.k_sp <= r.k_cp);
    const int kbar = r.crossing_index;
    for (int i = 0; i < r.k_sp; ++i) {
      if (i + 1 < kbar) {
        CHECK(r.price_side[i] != Side::cp_lower);
        CHECK(r.alloc_side[i] != Side::cp_higher);
      } else if (i + 1 > kbar) {
        CHECK(r.price_side[i] == Side::cp_lower);
        CHECK(r.alloc_side[i] == Side::cp_higher);
      }
    }
    // The crossing value is wedged between the adjacent thetas.
    CHECK(m.group(kbar - 1).theta >= r.crossing_theta - 1e-9);
    if (kbar < m.size())
      CHECK(r.crossing_theta >= m.group(kbar).theta - 1e-9);

    // One common price at the supply-clearing level reconstructs the revenue.
    if (sp.k_eff >= 1) {
      double n_eff = 0, value = 0;
      for (int i = 0; i < sp.k_eff; ++i) {
        n_eff += static_cast<double>(m.group(i).n);
        value += static_cast<double>(m.group(i).n) * m.group(i).theta;
      }
      const double s_bar = m.supply() / n_eff;
      const double theta_bar = value / n_eff;
      const double rebuilt = n_eff * s_bar * theta_bar / (s_bar + 1);
      CHECK(testutil::rel_diff(rebuilt, sp.revenue) < 1e-9);
      CHECK(testutil::rel_diff(sp.price * m.supply(), sp.revenue) < 1e-9);
    }
  }
}

TEST_CASE("randomized: adding a higher-value group raises the revenue") {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int it = 0; it < 200; ++it) {
    const Market m = random_market(rng);
    const SpSolution before = solve_sp(m);
    if (before.k_eff < 1) continue;
    const double theta_k = m.group(before.k_eff - 1).theta;
    // New group strictly above the lowest effective theta and distinct.
    const double theta_new = theta_k * (1.01 + unit(rng) * 3);
    bool clash = false;
    for (const Group& g : m.groups())
      if (std::abs(g.theta / theta_new - 1) < 1e-6) clash = true;
    if (clash) continue;
    std::vector<Group> groups = m.groups();
    groups.push_back(Group{theta_new, 1 + static_cast<long long>(unit(rng) * 20)});
    const Market grown(std::move(groups), m.supply());
    CHECK(solve_sp(grown).revenue > before.revenue);
  }
}

TEST_CASE("randomized: price within grid error of the search oracle") {
  std::mt19937_64 rng(31415);
  for (int it = 0; it < 40; ++it) {
    const Market m = random_market(rng);
    const SpSolution sp = solve_sp(m);
    const BruteSpResult grid = brute_best_single_price(m, 100000);
    CHECK(grid.revenue <= sp.revenue + 1e-9 * std::max(1.0, sp.revenue));
    double n_eff = 0;
    for (int i = 0; i < sp.k_eff; ++i) n_eff += static_cast<double>(m.group(i).n);
    const double slack = n_eff * std::max(0.0, grid.price - sp.price) + 1e-9;
    CHECK(sp.revenue - grid.revenue <= slack);
  }
}
