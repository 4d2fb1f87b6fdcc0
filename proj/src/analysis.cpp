#include "tariff/analysis.hpp"

#include <cmath>

#include "tariff/pp.hpp"
#include "tariff/sp.hpp"

namespace tariff {

GainPoint gain_two_group(double t, double alpha, double s_bar) {
  if (!(t > 1)) throw validation_error("gain_two_group: t must exceed 1");
  if (!(alpha > 0 && alpha < 1))
    throw validation_error("gain_two_group: alpha must lie in (0,1)");
  if (!(s_bar > 0)) throw validation_error("gain_two_group: s_bar must be positive");

  GainPoint p;
  p.t = t;
  p.alpha = alpha;
  p.s_bar = s_bar;
  // Single pricing drops the low group at t = sqrt(edge); differentiation
  // drops it too (schemes coincide) at t = edge.
  const double edge = (s_bar + alpha) / alpha;
  if (t >= edge) {
    p.region = GainRegion::zero;
    p.gain = 0;
  } else if (t >= std::sqrt(edge)) {
    p.region = GainRegion::decreasing;
    const double d = s_bar + alpha - t * alpha;
    p.gain = (1 - alpha) * d * d / (alpha * s_bar * (1 + s_bar) * t * t);
  } else {
    p.region = GainRegion::increasing;
    p.gain = alpha * (1 - alpha) * (t - 1) * (t - 1) /
             (s_bar * (1 + alpha * (t * t - 1)));
  }
  return p;
}

GainPeak gain_max(double alpha, double s_bar) {
  if (!(alpha > 0 && alpha < 1))
    throw validation_error("gain_max: alpha must lie in (0,1)");
  if (!(s_bar > 0)) throw validation_error("gain_max: s_bar must be positive");
  GainPeak peak;
  peak.t_peak = std::sqrt((s_bar + alpha) / alpha);
  const double d = std::sqrt(s_bar + alpha) - std::sqrt(alpha);
  peak.g_max = (1 - alpha) * d * d / (s_bar * (1 + s_bar));
  return peak;
}

std::vector<GainCurve> sweep_resource(const Market& m,
                                      const std::vector<double>& s_values,
                                      const std::vector<int>& j_set, double eps) {
  for (std::size_t i = 0; i + 1 < s_values.size(); ++i)
    if (!(s_values[i] < s_values[i + 1]))
      throw validation_error("sweep_resource: supply values must be ascending");
  if (!s_values.empty() && s_values.front() < 0)
    throw validation_error("sweep_resource: supply values must be nonnegative");

  std::vector<GainCurve> curves;
  curves.reserve(j_set.size());
  for (int j : j_set) {
    GainCurve c;
    c.j = j;
    c.scheme = j <= 1 ? "sp" : (j >= m.size() ? "cp" : "pp");
    c.samples.reserve(s_values.size());
    curves.push_back(std::move(c));
  }

  for (double s : s_values) {
    const Market at(std::vector<Group>(m.groups()), s);
    const SpSolution sp = solve_sp(at, eps);
    for (std::size_t ci = 0; ci < j_set.size(); ++ci) {
      const PpSolution pp = solve_pp(at, j_set[ci], eps);
      SweepSample sample;
      sample.supply = s;
      sample.revenue = pp.revenue;
      sample.gain_vs_sp = sp.revenue > 0 ? (pp.revenue - sp.revenue) / sp.revenue : 0.0;
      sample.k_eff = pp.k_eff;
      curves[ci].samples.push_back(sample);
      if (curves[ci].separation_points.empty() && j_set[ci] < m.size() &&
          pp.k_frontier > j_set[ci])
        curves[ci].separation_points.push_back(s);
    }
  }
  return curves;
}

}  // namespace tariff
