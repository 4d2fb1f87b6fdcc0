#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tariff/cp.hpp"
#include "tariff/market.hpp"

namespace tariff {

// Consecutive partition of groups 1..k into nonempty clusters, stored as the
// ascending 1-based cut positions: cluster j covers groups (cuts[j-1], cuts[j]]
// with implicit cuts 0 and k at the ends.
struct Partition {
  int k = 0;
  std::vector<int> cuts;

  int clusters() const { return static_cast<int>(cuts.size()) + 1; }
  // 0-based group index -> 0-based cluster index.
  int cluster_of(int group) const;
  // Half-open 0-based group range [first, last) of cluster j.
  std::pair<int, int> cluster_range(int j) const;
};

// A cluster summarized as one equivalent group.
struct SuperGroup {
  long long n_total = 0;
  double theta_avg = 0;
};

struct PpSolution {
  int j_requested = 0;
  int j_effective = 0;  // clusters actually used (j capped at the market size)
  int k_eff = 0;        // effective market size at the revenue optimum
  // Largest k <= K^cp admitting a feasible j-cluster partition of groups
  // 1..k; this is where a j-price tariff can first carry k effective groups,
  // which may exceed k_eff right after the complete scheme's market grows.
  int k_frontier = 0;
  Partition partition;  // over groups 1..k_eff
  std::vector<SuperGroup> supergroups;
  double lambda = 0;
  std::vector<double> cluster_prices;  // sqrt(theta^j * lambda), strictly decreasing
  std::vector<double> group_prices;    // cluster price inside the effective market, theta_i outside
  std::vector<double> allocations;
  double revenue = 0;
};

// Streams the C(k-1, j-1) consecutive partitions in lexicographic cut order.
class ConsecutivePartitionStream {
 public:
  ConsecutivePartitionStream(int k, int j);
  // Writes the next partition into out; returns false once exhausted.
  bool next(Partition& out);

 private:
  int k_ = 0;
  int j_ = 0;
  bool done_ = false;
  std::vector<int> cuts_;
};

// Exact for results below 2^53; double-precision beyond.
double binomial(int n, int k);

// Number of unrestricted partitions of i labeled items into j nonempty
// blocks (Stirling, second kind).  Documents the search-space reduction from
// S(i,j) down to C(i-1,j-1); rejects i > 1000.
double stirling_second(int i, int j);

struct Level1Result {
  Partition partition;
  double value = 0;  // sum_j N^j sqrt(theta^j), the quantity being minimized
};

// Minimizes sum_j N^j sqrt(theta^j) over consecutive j-cluster partitions of
// groups 1..k, subject to the lowest effective group keeping positive demand
// (theta_k above the last cluster price).  Empty optional when no partition
// qualifies.  Ties break toward the lexicographically smallest cuts.
std::optional<Level1Result> solve_level1(const Market& m, int k, int j,
                                         double eps = kEpsilon);

// Best tariff with at most j distinct prices: scans every candidate
// effective-market size k <= K^cp and every consecutive partition whose
// cluster prices keep all k groups effective, and keeps the revenue maximum.
PpSolution solve_pp(const Market& m, int j, double eps = kEpsilon);

// Level-3 building block: single price inside the cluster of groups
// [first, last] (0-based, inclusive) with its own budget; aggregates only the
// cluster's effective prefix.
struct ClusterAggregate {
  SuperGroup sg;
  int k_local = 0;    // effective groups within the cluster
  double revenue = 0; // budget * N^j theta^j / (budget + N^j)
};

ClusterAggregate aggregate_supergroup(const Market& m, int first, int last,
                                      double budget, double eps = kEpsilon);

}  // namespace tariff
