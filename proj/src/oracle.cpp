#include "tariff/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tariff {

double brute_lambda_bisection(const Market& m, double residual_tol) {
  if (m.supply() <= 0)
    throw validation_error("brute_lambda_bisection: supply must be positive");
  auto residual = [&](double lambda) {
    double total = 0;
    for (const Group& g : m.groups()) {
      const double s = std::sqrt(g.theta / lambda) - 1.0;
      if (s > 0) total += static_cast<double>(g.n) * s;
    }
    return total - m.supply();
  };
  double hi = m.group(0).theta;  // residual(theta_1) = -S < 0
  double lo = hi;
  while (residual(lo) <= 0) lo /= 4;  // expand until total demand exceeds S
  for (int i = 0; i < 500; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double r = residual(mid);
    if (std::abs(r) < residual_tol) return mid;
    if (r > 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

BruteSpResult brute_best_single_price(const Market& m, int grid_points) {
  if (grid_points < 1000)
    throw validation_error("brute_best_single_price: need at least 1000 grid points");
  if (m.supply() <= 0)
    throw validation_error("brute_best_single_price: supply must be positive");
  const double lo = m.group(m.size() - 1).theta * 1e-3;
  const double hi = m.group(0).theta;
  const double step = std::log(hi / lo) / (grid_points - 1);
  BruteSpResult best;
  for (int i = 0; i < grid_points; ++i) {
    const double p = lo * std::exp(step * i);
    double total = 0;
    for (const Group& g : m.groups()) {
      const double s = g.theta / p - 1.0;
      if (s > 0) total += static_cast<double>(g.n) * s;
    }
    if (total > m.supply()) continue;  // infeasible price
    const double revenue = p * total;
    if (revenue > best.revenue) {
      best.revenue = revenue;
      best.price = p;
    }
  }
  return best;
}

namespace {

struct Candidate {
  double revenue = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> clusters;
  std::vector<int> members;
};

bool is_prefix(const std::vector<int>& members) {
  for (std::size_t i = 0; i < members.size(); ++i)
    if (members[i] != static_cast<int>(i)) return false;
  return true;
}

bool clusters_consecutive(const std::vector<std::vector<int>>& clusters) {
  for (const auto& c : clusters)
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      if (c[i + 1] != c[i] + 1) return false;
  return true;
}

}  // namespace

PpExhaustive brute_pp_exhaustive(const Market& m, int j, const OracleConfig& cfg) {
  if (m.size() > cfg.max_groups_exhaustive)
    throw validation_error("brute_pp_exhaustive: group count exceeds cap");
  if (j < 1 || j > cfg.max_clusters_exhaustive)
    throw validation_error("brute_pp_exhaustive: cluster count exceeds cap");
  if (m.supply() <= 0)
    throw validation_error("brute_pp_exhaustive: supply must be positive");

  const int n = m.size();
  Candidate best, best_conspre, best_other;

  std::vector<int> members;
  std::vector<int> label(n, 0);  // restricted-growth assignment of members to clusters
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    members.clear();
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) members.push_back(i);
    const int sz = static_cast<int>(members.size());

    // Enumerate set partitions of the members via restricted growth strings
    // with at most j labels.
    std::fill(label.begin(), label.begin() + sz, 0);
    while (true) {
      int blocks = 0;
      for (int i = 0; i < sz; ++i) blocks = std::max(blocks, label[i] + 1);

      // Evaluate: shared multiplier over full-cluster aggregates, every
      // member required to stay effective at its cluster price.
      double v = 0, n_total = 0, value_total = 0;
      std::vector<double> cluster_n(blocks, 0.0), cluster_t(blocks, 0.0);
      for (int i = 0; i < sz; ++i) {
        const Group& g = m.group(members[i]);
        cluster_n[label[i]] += static_cast<double>(g.n);
        cluster_t[label[i]] += static_cast<double>(g.n) * g.theta;
        n_total += static_cast<double>(g.n);
        value_total += static_cast<double>(g.n) * g.theta;
      }
      for (int b = 0; b < blocks; ++b) {
        cluster_t[b] /= cluster_n[b];
        v += cluster_n[b] * std::sqrt(cluster_t[b]);
      }
      const double ratio = v / (m.supply() + n_total);
      const double lambda = ratio * ratio;
      bool valid = true;
      for (int i = 0; i < sz && valid; ++i)
        valid = m.group(members[i]).theta > std::sqrt(cluster_t[label[i]] * lambda);
      if (valid) {
        const double revenue = value_total - v * v / (m.supply() + n_total);
        std::vector<std::vector<int>> clusters(blocks);
        for (int i = 0; i < sz; ++i) clusters[label[i]].push_back(members[i]);
        const bool shape_ok = is_prefix(members) && clusters_consecutive(clusters);
        Candidate& slot = shape_ok ? best_conspre : best_other;
        if (revenue > slot.revenue) {
          slot.revenue = revenue;
          slot.clusters = clusters;
          slot.members = members;
        }
        if (revenue > best.revenue) {
          best.revenue = revenue;
          best.clusters = std::move(clusters);
          best.members = members;
        }
      }

      // Next restricted growth string.
      int pos = sz - 1;
      while (pos > 0) {
        int prefix_max = 0;
        for (int i = 0; i < pos; ++i) prefix_max = std::max(prefix_max, label[i]);
        if (label[pos] < std::min(prefix_max + 1, j - 1)) break;
        --pos;
      }
      if (pos == 0) break;
      ++label[pos];
      std::fill(label.begin() + pos + 1, label.begin() + sz, 0);
    }
  }

  PpExhaustive out;
  out.revenue = best.revenue;
  out.clusters = best.clusters;
  out.effective = best.members;
  out.best_consecutive_prefix = best_conspre.revenue;
  out.best_other = best_other.revenue;
  return out;
}

BruteResponse brute_user_best_response(const PriceMenu& menu, double theta,
                                       double s_max, int grid_points) {
  if (menu.steps.empty())
    throw validation_error("brute_user_best_response: empty menu");
  if (!(s_max > 0) || grid_points < 2)
    throw validation_error("brute_user_best_response: bad grid");
  BruteResponse best;  // staying out: surplus 0
  for (int i = 1; i <= grid_points; ++i) {
    const double s = s_max * i / grid_points;
    const double price = menu_price_at(menu, s);
    const double surplus = theta * std::log1p(s) - price * s;
    if (surplus > best.surplus) {
      best.surplus = surplus;
      best.quantity = s;
      std::size_t q = 0;
      while (q < menu.thresholds.size() && s <= menu.thresholds[q]) ++q;
      best.step = static_cast<int>(q);
    }
  }
  return best;
}

Market random_market(std::mt19937_64& rng, int max_groups) {
  std::uniform_int_distribution<int> group_count(1, max_groups);
  std::uniform_int_distribution<long long> population(1, 50);
  std::uniform_real_distribution<double> log_theta(std::log(0.1), std::log(100.0));
  std::uniform_real_distribution<double> log_supply(std::log(0.01), std::log(1000.0));

  const int count = group_count(rng);
  std::vector<double> thetas;
  while (static_cast<int>(thetas.size()) < count) {
    const double t = std::exp(log_theta(rng));
    bool ok = true;
    for (double u : thetas) {
      const double r = t > u ? t / u : u / t;
      if (r < 1.0 + 1e-3) {
        ok = false;
        break;
      }
    }
    if (ok) thetas.push_back(t);
  }
  std::vector<Group> groups;
  groups.reserve(thetas.size());
  for (double t : thetas) groups.push_back(Group{t, population(rng)});
  return Market(std::move(groups), std::exp(log_supply(rng)));
}

}  // namespace tariff
