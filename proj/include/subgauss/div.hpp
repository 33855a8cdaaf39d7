#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subgauss/conv.hpp"
#include "subgauss/tilt.hpp"

namespace subgauss::div {

inline const std::vector<double> kDefaultAlphas{0.5, 1.001, 2.0, 4.0, 8.0, 16.0, 32.0};

enum class TailMethod { GridOnly, AnalyticTailBound };
std::string to_string(TailMethod m);

// What is known about p_n beyond the resolved part of a grid:
//   p_n(x) / phi(x) <= c1 sqrt(2) exp(-(n-1) A(x / sqrt n)),  c1 = 1 + T_inf(p_1),
// and p_n = 0 for |x| > support.
struct TailBound {
  tilt::LogLaplaceProfile profile;  // of X_1
  double c1 = 1.0;
  int n = 1;
  double support = std::numeric_limits<double>::infinity();

  // Upper bound of r_n on {x >= x_from} (side = +1) or {x <= -x_from} (side = -1).
  // Infinity when the profile does not reach far enough.
  double sup_beyond(double x_from, int side) const;
};

// Profile of X_1 on |t| <= t_max plus c1 from the n = 1 density.
TailBound make_tail_bound(const dist::DistributionSpec& spec, int n, double t_max = 20.0);

// Smallest half-width (from `start` in steps of 2) beyond which the bound
// certifies r_n < 0 on both sides; capped one unit past the support and at 64.
double certified_half_width(const TailBound& tb, double start = 8.0);

struct SupResult {
  double T_inf = 0.0;
  double argmax_x = 0.0;
  TailMethod tail_method = TailMethod::GridOnly;
};

// All functionals refer to the normalized density p / int p, so a mass defect
// of the stored representation does not leak into tiny divergences.

// ess sup of p/phi - 1. Spectral deviations are scanned at 2^16 points per
// period and polished by Newton steps on r'. Grids use their resolved nodes
// (noise below 1e-8 phi), the upper limit at jumps, and the tail bound beyond.
SupResult t_inf(const conv::SumDensity& p, const TailBound* tail = nullptr);
double d_inf(const conv::SumDensity& p, const TailBound* tail = nullptr);

// Tsallis T_alpha and Renyi D_alpha for alpha > 0, alpha != 1.
double tsallis(const conv::SumDensity& p, double alpha);
double renyi(const conv::SumDensity& p, double alpha);
std::vector<double> tsallis_ladder(const conv::SumDensity& p, const std::vector<double>& alphas);
// Direct quadratures used as consistency oracles.
double chi_square(const conv::SumDensity& p);  // int (p - phi)^2 / phi
double kl(const conv::SumDensity& p);          // int p log(p / phi)

struct DivergenceReport {
  std::vector<double> alphas, D_alpha, T_alpha;
  double D_inf = 0.0, T_inf = 0.0, argmax_x = 0.0;
  TailMethod tail_method = TailMethod::GridOnly;
  std::size_t clipped_nodes = 0;  // grid values below -accuracy treated as 0
};

DivergenceReport divergence_report(const conv::SumDensity& p, const std::vector<double>& alphas = kDefaultAlphas,
                                   const TailBound* tail = nullptr);
nlohmann::json to_json(const DivergenceReport& r);
// CSV: alpha,D,T rows and a final inf,D_inf,T_inf,argmax_x row.
std::string to_csv(const DivergenceReport& r);

// Number of grid nodes with p < -accuracy (counted, then treated as 0).
std::size_t clipped_nodes(const conv::SumDensity& p);

}  // namespace subgauss::div
