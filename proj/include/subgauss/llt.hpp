#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subgauss/conv.hpp"
#include "subgauss/tilt.hpp"

namespace subgauss::llt {

struct GapReport {
  std::vector<int> n_list;
  std::vector<double> sup_gap;     // sup_x |p_n - phi|
  std::vector<double> scaled_gap;  // sqrt(n) sup_gap / (M^2 beta3)
  double M = 0.0, beta3 = 0.0;
  bool bounded = true;  // scaled_gap never exceeds 1.25x its first value
  double spread() const;  // max / min of scaled_gap
};

GapReport uniform_llt_gap(const dist::DistributionSpec& spec, const std::vector<int>& n_list);

struct TiltedRow {
  int n = 0;
  double x = 0.0, lhs = 0.0, rhs = 0.0, residual = 0.0;
};

// lhs = p_n(x sqrt n) / phi(x sqrt n), rhs = e^{-nA(x) - n v_x^2 / 2} / sigma_x,
// residual = (lhs - rhs) sqrt(n) / c^4 with c = 1 + T_inf(p_1). Samples must lie in
// the critical zone {A <= a/(n-1)} and n >= 4(a+1); ZoneViolation otherwise.
// Empty samples: nine points across the zone interval around 0, capped at |x| <= 0.5.
std::vector<TiltedRow> tilted_llt_check(const dist::DistributionSpec& spec, int n, double a,
                                        std::vector<double> samples = {});
std::string tilted_csv(const std::vector<TiltedRow>& rows);

struct Cramer {
  double lambda0 = 0.0, lambda1 = 0.0;
};
Cramer cramer_coeffs(const dist::CumulantReport& rep);

struct RichterFit {
  int m = 4;
  double slope = 0.0;   // coefficient of x^m / n^{m/2-1}
  double target = 0.0;  // gamma_m / m!
  std::optional<double> cubic;  // coefficient of x^3 / sqrt(n) when requested
  std::size_t points = 0;
};

// Least squares of log(p_n(x)/phi(x)) on x^m/n^{m/2-1}, x^{m-2}/n^{m/2-1}
// (leading term of the mu correction), 1/n and optionally x^3/sqrt(n), over
// |x| <= window_scale * n^{1/2 - 1/m} for every n in the ladder.
RichterFit richter_fit(const dist::DistributionSpec& spec, const std::vector<int>& n_list, double window_scale = 1.0,
                       bool with_cubic = false, double x_step = 0.05);

struct LogCubeRow {
  int n = 0;
  double excess = 0.0;  // max over |x| <= tau0 sqrt n of p_n/phi - 1
  double C = 0.0;       // excess * n / (log n)^3
};
struct LogCubeExcess {
  double tau0 = 0.25;
  std::vector<LogCubeRow> rows;
  double C_max = 0.0;
  double stability = 0.0;  // max C / min C over the ladder
};
LogCubeExcess log_cube_check(const dist::DistributionSpec& spec, const std::vector<int>& n_list, double tau0 = 0.25);

struct LltReport {
  GapReport gap;
  std::vector<TiltedRow> tilted;
  Cramer cramer;
  std::optional<RichterFit> richter;
  std::optional<LogCubeExcess> log_cube;
};
nlohmann::json to_json(const LltReport& r);

}  // namespace subgauss::llt
