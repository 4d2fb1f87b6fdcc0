#pragma once

#include <string>
#include <vector>

#include "tariff/market.hpp"

namespace tariff {

// Behaviour of the two-group revenue gain in the willingness-to-pay ratio t:
// rising while both groups stay effective under single pricing, falling once
// single pricing drops the low group, zero once both schemes coincide.
enum class GainRegion { increasing, decreasing, zero };

struct GainPoint {
  double t = 0;      // sqrt(theta_1 / theta_2) > 1
  double alpha = 0;  // N_1 / (N_1 + N_2)
  double s_bar = 0;  // S / (N_1 + N_2)
  double gain = 0;   // (R_cp - R_sp) / R_sp
  GainRegion region = GainRegion::zero;
};

// Closed-form two-group gain.
GainPoint gain_two_group(double t, double alpha, double s_bar);

struct GainPeak {
  double t_peak = 0;  // sqrt((s_bar + alpha) / alpha)
  double g_max = 0;   // (1-alpha) (sqrt(s_bar+alpha) - sqrt(alpha))^2 / (s_bar (1+s_bar))
};

// Peak of the two-group gain over t, reached where single pricing first
// drops the low group.
GainPeak gain_max(double alpha, double s_bar);

struct SweepSample {
  double supply = 0;
  double revenue = 0;
  double gain_vs_sp = 0;
  int k_eff = 0;
};

struct GainCurve {
  std::string scheme;  // "sp", "pp", or "cp"
  int j = 0;
  std::vector<SweepSample> samples;
  // First swept supply at which a j-price tariff supports j+1 effective
  // groups; this is where the curve leaves the higher-j pack.  Empty for the
  // complete scheme and while the market never outgrows j groups.
  std::vector<double> separation_points;
};

// Solves every scheme in j_set at every supply level.  s_values must be
// positive ascending (zero allowed as the first entry).
std::vector<GainCurve> sweep_resource(const Market& m,
                                      const std::vector<double>& s_values,
                                      const std::vector<int>& j_set,
                                      double eps = kEpsilon);

}  // namespace tariff
