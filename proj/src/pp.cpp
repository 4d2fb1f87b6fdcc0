#include "tariff/pp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tariff {

int Partition::cluster_of(int group) const {
  int c = 0;
  for (int cut : cuts)
    if (group >= cut) ++c;
  return c;
}

std::pair<int, int> Partition::cluster_range(int j) const {
  const int first = j == 0 ? 0 : cuts[j - 1];
  const int last = j == clusters() - 1 ? k : cuts[j];
  return {first, last};
}

ConsecutivePartitionStream::ConsecutivePartitionStream(int k, int j) : k_(k), j_(j) {
  if (j < 1) throw validation_error("partition stream: j must be >= 1");
  if (k < 1) throw validation_error("partition stream: k must be >= 1");
  done_ = j > k;  // no way to fill j nonempty clusters from k groups
  cuts_.resize(j - 1);
  for (int i = 0; i < j - 1; ++i) cuts_[i] = i + 1;
}

bool ConsecutivePartitionStream::next(Partition& out) {
  if (done_) return false;
  out.k = k_;
  out.cuts = cuts_;
  // Advance the cut combination lexicographically.
  int r = static_cast<int>(cuts_.size()) - 1;
  while (r >= 0 && cuts_[r] == k_ - 1 - (static_cast<int>(cuts_.size()) - 1 - r)) --r;
  if (r < 0) {
    done_ = true;
  } else {
    ++cuts_[r];
    for (std::size_t i = r + 1; i < cuts_.size(); ++i) cuts_[i] = cuts_[i - 1] + 1;
  }
  return true;
}

double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) throw validation_error("binomial: bad arguments");
  k = std::min(k, n - k);
  double r = 1;
  // Each intermediate is the integer C(n-k+i, i), so the division is exact
  // as long as the value fits a double's integer range.
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
  return r < 9.007199254740992e15 ? std::round(r) : r;
}

double stirling_second(int i, int j) {
  if (j < 1 || i < 1 || j > i) throw validation_error("stirling_second: bad arguments");
  if (i > 1000) throw validation_error("stirling_second: i > 1000 rejected (overflow-prone)");
  // S(m, b) = b * S(m-1, b) + S(m-1, b-1)
  std::vector<double> row(j + 1, 0.0);
  row[1] = 1.0;
  for (int m = 2; m <= i; ++m) {
    for (int b = std::min(m, j); b >= 1; --b)
      row[b] = b * row[b] + (b >= 2 ? row[b - 1] : 0.0);
  }
  return row[j];
}

namespace {

struct Prefix {
  std::vector<double> count;   // sum N_i
  std::vector<double> value;   // sum N_i theta_i
};

Prefix prefix_sums(const Market& m) {
  Prefix p;
  p.count.resize(m.size() + 1, 0.0);
  p.value.resize(m.size() + 1, 0.0);
  for (int i = 0; i < m.size(); ++i) {
    p.count[i + 1] = p.count[i] + static_cast<double>(m.group(i).n);
    p.value[i + 1] = p.value[i] + static_cast<double>(m.group(i).n) * m.group(i).theta;
  }
  return p;
}

struct Evaluated {
  double v = 0;            // sum_j N^j sqrt(theta^j)
  double lambda = 0;
  bool last_ok = false;    // theta_k above the last cluster price
  bool all_ok = false;     // every cluster's last member above its cluster price
};

Evaluated evaluate_partition(const Market& m, const Prefix& p, const Partition& a,
                             double eps) {
  Evaluated e;
  const int jn = a.clusters();
  double v = 0;
  for (int j = 0; j < jn; ++j) {
    auto [first, last] = a.cluster_range(j);
    const double nj = p.count[last] - p.count[first];
    const double tj = (p.value[last] - p.value[first]) / nj;
    v += nj * std::sqrt(tj);
  }
  e.v = v;
  const double ratio = v / (m.supply() + p.count[a.k]);
  e.lambda = ratio * ratio;
  e.all_ok = true;
  for (int j = 0; j < jn; ++j) {
    auto [first, last] = a.cluster_range(j);
    const double nj = p.count[last] - p.count[first];
    const double tj = (p.value[last] - p.value[first]) / nj;
    const double price = std::sqrt(tj * e.lambda);
    const bool ok = m.group(last - 1).theta > price + eps;
    if (j == jn - 1) e.last_ok = ok;
    if (!ok) e.all_ok = false;
  }
  return e;
}

}  // namespace

std::optional<Level1Result> solve_level1(const Market& m, int k, int j, double eps) {
  if (k < 1 || k > m.size()) throw validation_error("solve_level1: k out of range");
  if (j < 1 || j > k) throw validation_error("solve_level1: j out of range");
  const Prefix p = prefix_sums(m);
  ConsecutivePartitionStream stream(k, j);
  Partition a;
  std::optional<Level1Result> best;
  while (stream.next(a)) {
    const Evaluated e = evaluate_partition(m, p, a, eps);
    if (!e.last_ok) continue;
    if (!best || e.v < best->value) best = Level1Result{a, e.v};
  }
  return best;
}

PpSolution solve_pp(const Market& m, int j, double eps) {
  if (j < 1) throw validation_error("solve_pp: j must be >= 1");
  PpSolution sol;
  sol.j_requested = j;
  const int n = m.size();
  sol.group_prices.resize(n);
  sol.allocations.assign(n, 0.0);
  for (int i = 0; i < n; ++i) sol.group_prices[i] = m.group(i).theta;

  const CpSolution cp = solve_cp(m, eps);
  if (cp.k_eff == 0) {  // S == 0
    sol.lambda = m.group(0).theta;
    return sol;
  }

  const Prefix p = prefix_sums(m);
  double best_revenue = -std::numeric_limits<double>::infinity();
  Partition best_a;
  double best_lambda = 0;
  bool frontier_found = false;

  // Scan candidate effective markets from the top.  The first k with any
  // feasible partition is the frontier; the revenue argmax may sit at a
  // smaller k right after the complete scheme's market grows, so every k is
  // evaluated.  Ties keep the larger k, then the lexicographically first cuts.
  for (int k = cp.k_eff; k >= 1; --k) {
    const int jk = std::min(j, k);
    ConsecutivePartitionStream stream(k, jk);
    Partition a;
    while (stream.next(a)) {
      const Evaluated e = evaluate_partition(m, p, a, eps);
      if (e.last_ok && !frontier_found) {
        sol.k_frontier = k;
        frontier_found = true;
      }
      if (!e.all_ok) continue;
      const double revenue = p.value[k] - e.v * e.v / (m.supply() + p.count[k]);
      if (revenue > best_revenue) {
        best_revenue = revenue;
        best_a = a;
        best_lambda = e.lambda;
      }
    }
  }
  if (!std::isfinite(best_revenue))
    throw consistency_error("solve_pp: no feasible candidate although S > 0");

  sol.k_eff = best_a.k;
  sol.partition = best_a;
  sol.j_effective = best_a.clusters();
  sol.lambda = best_lambda;
  sol.cluster_prices.resize(best_a.clusters());
  sol.supergroups.resize(best_a.clusters());
  for (int c = 0; c < best_a.clusters(); ++c) {
    auto [first, last] = best_a.cluster_range(c);
    long long nc = 0;
    double tc = 0;
    for (int i = first; i < last; ++i) {
      nc += m.group(i).n;
      tc += static_cast<double>(m.group(i).n) * m.group(i).theta;
    }
    tc /= static_cast<double>(nc);
    sol.supergroups[c] = SuperGroup{nc, tc};
    sol.cluster_prices[c] = std::sqrt(tc * best_lambda);
  }
  double revenue = 0;
  for (int i = 0; i < best_a.k; ++i) {
    const double price = sol.cluster_prices[best_a.cluster_of(i)];
    sol.group_prices[i] = price;
    sol.allocations[i] = m.group(i).theta / price - 1.0;
    revenue += static_cast<double>(m.group(i).n) * price * sol.allocations[i];
  }
  sol.revenue = revenue;
  return sol;
}

ClusterAggregate aggregate_supergroup(const Market& m, int first, int last,
                                      double budget, double eps) {
  if (first < 0 || last >= m.size() || first > last)
    throw validation_error("aggregate_supergroup: bad cluster range");
  if (budget < 0) throw validation_error("aggregate_supergroup: negative budget");
  ClusterAggregate out;
  if (budget == 0) return out;

  // Single-price threshold search restricted to the cluster.
  const int len = last - first + 1;
  std::vector<double> value(len + 1, 0.0), count(len + 1, 0.0);
  for (int i = 0; i < len; ++i) {
    const Group& g = m.group(first + i);
    value[i + 1] = value[i] + static_cast<double>(g.n) * g.theta;
    count[i + 1] = count[i] + static_cast<double>(g.n);
  }
  int k = len;
  double price = value[k] / (budget + count[k]);
  while (m.group(first + k - 1).theta <= price + eps) {
    --k;
    price = value[k] / (budget + count[k]);
  }
  out.k_local = k;
  out.sg.n_total = static_cast<long long>(count[k]);
  out.sg.theta_avg = value[k] / count[k];
  const double nj = count[k];
  out.revenue = budget * nj * out.sg.theta_avg / (budget + nj);
  return out;
}

}  // namespace tariff
