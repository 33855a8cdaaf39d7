#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subgauss/tilt.hpp"

namespace subgauss::diag {

struct StrictCheck {
  bool strictly_subgaussian = false;
  double min_A = 0.0;
  std::vector<double> zero_set;  // local minima of A with A at the zero level
  bool identically_zero = false;  // A == 0 on the whole range (normal law)
};

// Zeros are minima of A (A >= 0), so they are found from sign changes of A'
// filtered by A <= 1e-8 * max|A|, then polished. Periodic specs pass a
// profile over one period; RangeTooSmall otherwise when A still descends at an end.
StrictCheck strict_check(const tilt::LogLaplaceProfile& p, bool periodic = false);

enum class CondB { Vacuous, Satisfied, Violated, Inconclusive };
std::string to_string(CondB v);

struct ZeroCheck {
  double t = 0.0;
  double A2 = 0.0;
  bool pass = false;
};

struct PeriodicRoot {
  double t = 0.0, P = 0.0, P2 = 0.0;
  bool pass = false;
};

struct SeparationMargin {
  double t0 = 0.0;
  double sup_psi = 0.0;
  double margin = 0.0;
};

struct DiagnosticsReport {
  std::string spec_id;
  bool normal = false;
  StrictCheck strict;
  std::vector<ZeroCheck> cond_a;
  bool cond_a_ok = true;
  CondB cond_b = CondB::Inconclusive;
  std::string cond_b_witness;
  std::vector<SeparationMargin> separation;
  std::optional<double> period;
  std::vector<PeriodicRoot> periodic_criterion;
  std::optional<std::pair<int, double>> first_nonzero_cumulant;
  bool cumulant_sign_ok = true;  // m even and gamma_m < 0 when strictly subgaussian and non-normal
  bool predicted_clt = false;
};

// Roots of the trig polynomial P on [0, h] with P'' there, from exact derivatives.
std::vector<PeriodicRoot> periodic_roots(const dist::TrigPoly& P);

std::vector<SeparationMargin> separation_margin(const tilt::LogLaplaceProfile& p, const std::vector<double>& t0_list,
                                                bool periodic = false);

struct ZoneSet {
  double a = 0.0;
  int n = 2;
  double level = 0.0;  // a / (n - 1)
  std::vector<std::pair<double, double>> intervals;
};

// Sublevel set {A <= a/(n-1)} on the profile range. Endpoints are polished on
// A_of when given (exact), otherwise on the profile interpolant.
ZoneSet critical_zone(const tilt::LogLaplaceProfile& p, double a, int n,
                      const std::function<double(double)>& A_of = nullptr);

std::pair<int, double> first_nonzero_cumulant(const dist::CumulantReport& rep);

// Default profile range: one period [0, h] for trig specs, |t| <= t_max otherwise.
tilt::LogLaplaceProfile diagnostic_profile(const dist::DistributionSpec& spec, double t_max = 20.0);

DiagnosticsReport diagnose(const dist::DistributionSpec& spec);
nlohmann::json to_json(const DiagnosticsReport& r);
// Human-readable verdict table.
std::string verdict_table(const DiagnosticsReport& r);

}  // namespace subgauss::diag
