#pragma once

#include <string>
#include <vector>

#include "subgauss/dist.hpp"

namespace subgauss::tilt {

struct ProfileRow {
  double t = 0, K = 0, K1 = 0, K2 = 0, A = 0, A1 = 0, A2 = 0;
};

// Tabulated log-Laplace transform K = log E e^{tX} and A = t^2/2 - K.
struct LogLaplaceProfile {
  std::vector<double> t, K, K1, K2, A, A1, A2;
  std::string source_id;

  std::size_t size() const noexcept { return t.size(); }
  ProfileRow row(std::size_t i) const noexcept { return {t[i], K[i], K1[i], K2[i], A[i], A1[i], A2[i]}; }
  bool covers(double h) const noexcept { return !t.empty() && h >= t.front() && h <= t.back(); }
  // Cubic Hermite interpolation (value + tabulated derivative); OutOfRange outside.
  ProfileRow interpolate(double h) const;
};

ProfileRow profile_point(const dist::DistributionSpec& spec, double t);
LogLaplaceProfile profile(const dist::DistributionSpec& spec, std::span<const double> t_grid);
std::vector<double> uniform_t_grid(double lo, double hi, double step = 1e-2);
std::string profile_csv(const LogLaplaceProfile& p);

struct ProfileCheck {
  double min_K2 = 0;
  double max_A2 = 0;
  double max_slope_excess = 0;  // max of A1^2 - 2A
  double min_A = 0;
  bool strictly_subgaussian = false;
  bool ok = false;  // all invariants hold at their tolerances
};
ProfileCheck check_profile(const LogLaplaceProfile& p);

// Q_h p(x) = e^{hx} p(x) / L(h), normalized by its own trapezoid rule.
dist::GridDensity esscher(const dist::GridDensity& p, double h);
// Density of lambda*X for X ~ p.
dist::GridDensity rescale(const dist::GridDensity& p, double lambda);
// Largest grid value refined by a parabola through the top three nodes.
double max_density(const dist::GridDensity& p);

struct ShiftedMoments {
  double h = 0, m_h = 0, sigma_h = 0, v_h = 0, A_h = 0;
};
ShiftedMoments shifted_moments(const LogLaplaceProfile& p, double h);

// min over h of sigma_h - sqrt(pi / (6 c^2)) e^{-A(h)}.
double sigma_lower_bound_check(const LogLaplaceProfile& p, double c_const, std::span<const double> h_samples);

// E exp(|X(h) - m_h| / 2) under the tilted grid density.
double tilted_mgf_check(const dist::DistributionSpec& spec, double h, int n, double a);

}  // namespace subgauss::tilt
