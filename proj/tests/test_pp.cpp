#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "tariff/oracle.hpp"
#include "tariff/pp.hpp"
#include "tariff/sp.hpp"
#include "testutil.hpp"

using namespace tariff;

namespace {

int count_partitions(int k, int j) {
  ConsecutivePartitionStream stream(k, j);
  Partition a;
  int n = 0;
  while (stream.next(a)) ++n;
  return n;
}

}  // namespace

TEST_CASE("consecutive partition stream") {
  ConsecutivePartitionStream stream(3, 2);
  Partition a;
  REQUIRE(stream.next(a));
  CHECK(a.cuts == std::vector<int>{1});  // (1 | 2,3)
  REQUIRE(stream.next(a));
  CHECK(a.cuts == std::vector<int>{2});  // (1,2 | 3)
  CHECK_FALSE(stream.next(a));

  CHECK(count_partitions(3, 2) == 2);
  CHECK(count_partitions(10, 3) == 36);
  CHECK(count_partitions(100, 2) == 99);
  CHECK(count_partitions(5, 5) == 1);
  CHECK(count_partitions(2, 3) == 0);  // j > k: empty stream

  // No duplicates, every cut vector valid.
  std::set<std::vector<int>> seen;
  ConsecutivePartitionStream s2(7, 3);
  while (s2.next(a)) {
    CHECK(a.clusters() == 3);
    CHECK(seen.insert(a.cuts).second);
    for (int c : a.cuts) CHECK((c >= 1 && c <= 6));
  }
  CHECK(static_cast<int>(seen.size()) == static_cast<int>(binomial(6, 2)));
}

TEST_CASE("partition cluster bookkeeping") {
  Partition a;
  a.k = 5;
  a.cuts = {2, 3};
  CHECK(a.clusters() == 3);
  CHECK(a.cluster_of(0) == 0);
  CHECK(a.cluster_of(1) == 0);
  CHECK(a.cluster_of(2) == 1);
  CHECK(a.cluster_of(3) == 2);
  CHECK(a.cluster_of(4) == 2);
  CHECK(a.cluster_range(0) == std::pair<int, int>{0, 2});
  CHECK(a.cluster_range(1) == std::pair<int, int>{2, 3});
  CHECK(a.cluster_range(2) == std::pair<int, int>{3, 5});
}

TEST_CASE("partition counts") {
  CHECK(stirling_second(10, 2) == 511);
  CHECK(stirling_second(10, 3) == 9330);
  CHECK(stirling_second(7, 1) == 1);
  CHECK(stirling_second(7, 7) == 1);
  CHECK_THROWS_AS(stirling_second(1001, 2), validation_error);
  CHECK_THROWS_AS(stirling_second(5, 6), validation_error);

  CHECK(binomial(9, 1) == 9);
  CHECK(binomial(9, 2) == 36);
  CHECK(binomial(99, 1) == 99);
  CHECK(binomial(99, 2) == 4851);
}

TEST_CASE("level-1 search on the worked two-group instance") {
  const Market m = testutil::two_group_market();

  const auto split = solve_level1(m, 2, 2);
  REQUIRE(split.has_value());
  CHECK(split->partition.cuts == std::vector<int>{1});
  CHECK(split->value == doctest::Approx(3.0).epsilon(1e-12));

  const auto merged = solve_level1(m, 2, 1);
  REQUIRE(merged.has_value());
  CHECK(merged->partition.clusters() == 1);
  CHECK(merged->value == doctest::Approx(2 * std::sqrt(2.5)).epsilon(1e-12));

  CHECK_THROWS_AS(solve_level1(m, 2, 3), validation_error);
  CHECK_THROWS_AS(solve_level1(m, 3, 1), validation_error);
}

TEST_CASE("level-1 search on the five-group instance") {
  const Market m = testutil::five_group_market();
  const auto best = solve_level1(m, 5, 2);
  REQUIRE(best.has_value());
  CHECK(best->partition.cuts == std::vector<int>{3});  // {1,2,3} | {4,5}
  CHECK(best->value == doctest::Approx(122.436427309231825).epsilon(1e-12));
}

TEST_CASE("level-1 reports infeasibility when the lowest group cannot stay in") {
  // Right after the two-group window opens for the complete scheme, no
  // two-cluster split of the first three groups keeps group 3 effective.
  const Market m = testutil::five_group_market(3.3);
  CHECK(solve_cp(m).k_eff == 3);
  CHECK_FALSE(solve_level1(m, 3, 2).has_value());
  CHECK(solve_level1(m, 2, 2).has_value());
}

TEST_CASE("solve_pp degenerates to the single price and complete schemes") {
  const Market m = testutil::two_group_market();
  const PpSolution one = solve_pp(m, 1);
  CHECK(one.revenue == doctest::Approx(10.0 / 3).epsilon(1e-12));
  CHECK(one.k_eff == 2);
  CHECK(one.j_effective == 1);

  const PpSolution two = solve_pp(m, 2);
  CHECK(two.revenue == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(two.cluster_prices[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(two.cluster_prices[1] == doctest::Approx(0.5).epsilon(1e-12));

  // j beyond the market size is capped, with the cap recorded.
  const PpSolution capped = solve_pp(m, 7);
  CHECK(capped.j_requested == 7);
  CHECK(capped.j_effective == 2);
  CHECK(capped.revenue == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("solve_pp two-price tradeoff on the five-group instance") {
  const Market m = testutil::five_group_market();
  const PpSolution pp = solve_pp(m, 2);
  const SpSolution sp = solve_sp(m);
  const CpSolution cp = solve_cp(m);
  CHECK(pp.revenue == doctest::Approx(101.046606338755957).epsilon(1e-12));
  CHECK(sp.revenue == doctest::Approx(88.0).epsilon(1e-12));
  CHECK(cp.revenue == doctest::Approx(103.245131341989870).epsilon(1e-12));
  const double gain = (pp.revenue - sp.revenue) / sp.revenue;
  CHECK(gain == doctest::Approx(0.148256890213).epsilon(1e-9));
  CHECK(pp.partition.cuts == std::vector<int>{3});
  CHECK(pp.k_eff == 5);
}

TEST_CASE("solve_pp keeps the revenue optimum right after the market grows") {
  // In this window the largest feasible candidate market (3 groups) earns
  // less than pricing 2 groups and parking group 3 inside the cheap cluster;
  // the solver must return the latter while the frontier reports the former.
  const Market m = testutil::five_group_market(3.4);
  const PpSolution pp = solve_pp(m, 2);
  CHECK(pp.k_eff == 2);
  CHECK(pp.k_frontier == 3);
  const PpExhaustive ex = brute_pp_exhaustive(m, 2);
  CHECK(testutil::rel_diff(pp.revenue, ex.revenue) < 1e-10);
  CHECK(pp.revenue > 23.6);  // the feasible k=3 candidate earns only ~22.67
}

TEST_CASE("aggregate_supergroup mirrors the single-price scheme") {
  const Market m = testutil::two_group_market();
  const ClusterAggregate agg = aggregate_supergroup(m, 0, 1, 4.0);
  CHECK(agg.k_local == 2);
  CHECK(agg.sg.n_total == 2);
  CHECK(agg.sg.theta_avg == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(agg.revenue == doctest::Approx(10.0 / 3).epsilon(1e-12));
  CHECK(agg.revenue == doctest::Approx(solve_sp(m).revenue).epsilon(1e-12));

  const ClusterAggregate single = aggregate_supergroup(m, 0, 0, 1.0);
  CHECK(single.sg.n_total == 1);
  CHECK(single.sg.theta_avg == 4);
  CHECK(single.revenue == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("aggregate_supergroup keeps only the cluster's effective prefix") {
  const Market m({{4, 1}, {3, 1}, {0.5, 1}, {0.4, 1}}, 10);
  const ClusterAggregate agg = aggregate_supergroup(m, 0, 3, 1.0);
  CHECK(agg.k_local == 2);
  CHECK(agg.sg.n_total == 2);
  CHECK(agg.sg.theta_avg == doctest::Approx(3.5).epsilon(1e-12));

  // Same revenue as a direct single-price solve on the sub-market.
  const Market sub({{4, 1}, {3, 1}, {0.5, 1}, {0.4, 1}}, 1.0);
  CHECK(agg.revenue == doctest::Approx(solve_sp(sub).revenue).epsilon(1e-12));
}

TEST_CASE("randomized: solver matches the unrestricted exhaustive oracle") {
  std::mt19937_64 rng(4242);
  for (int it = 0; it < 120; ++it) {
    const Market m = random_market(rng);
    for (int j = 1; j <= std::min(3, m.size()); ++j) {
      const PpSolution pp = solve_pp(m, j);
      const PpExhaustive ex = brute_pp_exhaustive(m, j);
      CHECK(testutil::rel_diff(pp.revenue, ex.revenue, 1e-9) < 1e-8);
      // No non-consecutive or non-prefix shape beats the consecutive ones.
      CHECK(ex.best_other <= ex.best_consecutive_prefix + 1e-10 * std::max(1.0, ex.revenue));
    }
  }
}

TEST_CASE("randomized: structural invariants of the partial scheme") {
  std::mt19937_64 rng(986);
  for (int it = 0; it < 200; ++it) {
    const Market m = random_market(rng);
    const CpSolution cp = solve_cp(m);
    const SpSolution sp = solve_sp(m);
    double prev_revenue = sp.revenue;
    int prev_k = 0;
    for (int j = 1; j <= m.size(); ++j) {
      const PpSolution pp = solve_pp(m, j);
      CHECK(pp.k_eff <= cp.k_eff);
      CHECK(pp.k_eff >= prev_k);
      prev_k = pp.k_eff;
      CHECK(pp.revenue >= prev_revenue - 1e-9 * std::max(1.0, prev_revenue));
      prev_revenue = pp.revenue;

      // Effective market is exactly the prefix 1..k_eff.
      double used = 0;
      for (int i = 0; i < m.size(); ++i) {
        used += static_cast<double>(m.group(i).n) * pp.allocations[i];
        if (i < pp.k_eff)
          CHECK(pp.allocations[i] > 0);
        else
          CHECK(pp.allocations[i] == 0);
      }
      CHECK(std::abs(used - m.supply()) < 1e-8 * m.supply());

      // Cluster prices strictly decreasing; supergroup means bounded by
      // their cluster's extremes; payment sum equals the closed form.
      double t_sum = 0, closed = 0;
      for (int c = 0; c < pp.j_effective; ++c) {
        if (c > 0) CHECK(pp.cluster_prices[c] < pp.cluster_prices[c - 1]);
        auto [first, last] = pp.partition.cluster_range(c);
        CHECK(pp.supergroups[c].theta_avg <= m.group(first).theta + 1e-12);
        CHECK(pp.supergroups[c].theta_avg >= m.group(last - 1).theta - 1e-12);
        t_sum += static_cast<double>(pp.supergroups[c].n_total) *
                 std::sqrt(pp.supergroups[c].theta_avg);
      }
      double value = 0, count = 0;
      for (int i = 0; i < pp.k_eff; ++i) {
        value += static_cast<double>(m.group(i).n) * m.group(i).theta;
        count += static_cast<double>(m.group(i).n);
      }
      closed = value - t_sum * t_sum / (m.supply() + count);
      CHECK(testutil::rel_diff(closed, pp.revenue, 1e-9) < 1e-9);
      if (pp.k_eff >= 1) {
        const double last_price = pp.cluster_prices[pp.j_effective - 1];
        CHECK(m.group(pp.k_eff - 1).theta > last_price);
      }
    }
    const PpSolution as_sp = solve_pp(m, 1);
    CHECK(testutil::rel_diff(as_sp.revenue, sp.revenue, 1e-9) < 1e-9);
    const PpSolution as_cp = solve_pp(m, m.size());
    CHECK(testutil::rel_diff(as_cp.revenue, cp.revenue, 1e-9) < 1e-9);
  }
}
