#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subgauss/conv.hpp"

namespace subgauss::sweep {

inline const std::vector<int> kDefaultLadder{16, 32, 64, 128, 256, 512, 1024};
inline constexpr int kMaxLadderN = 4096;

enum class VerdictKind { Converges, StallsAt, Inconclusive };

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  double level = 0.0;  // stall level for StallsAt
  std::string to_string() const;
};

// Artifact conventions for the ladder verdict.
struct VerdictRule {
  double stall_band = 0.25;            // last three values within this fraction of their median
  double resolvable_factor = 10.0;     // stall level must exceed this multiple of the route accuracy
  double monotone_jitter = 0.05;       // allowed relative increase in the upper half
};

struct RateSweep {
  std::string spec_id;
  std::vector<int> n_list;
  std::vector<double> T_inf, argmax_x, D_inf, rate_constant, sup_gap;
  std::vector<std::string> method;
  double loglog_slope = 0.0;  // NaN when fewer than two positive values in the upper half
  double resolvable = 0.0;    // largest route accuracy over the ladder
  bool predicted_clt = false;
  Verdict verdict;
};

// Ladder entries run as independent tasks on up to `threads` workers and are
// collected in n order, so the report does not depend on the thread count.
RateSweep run_sweep(const dist::DistributionSpec& spec, const std::vector<int>& n_list, int threads = 1,
                    const VerdictRule& rule = {});

// Stall if the last three values lie within the band of their median L and
// L exceeds the resolvable floor; converges if predicted_clt and the upper half
// is nonincreasing within the jitter; inconclusive otherwise.
Verdict classify(const std::vector<double>& T_inf, double resolvable, bool predicted_clt, const VerdictRule& rule = {});

// CSV: n,T_inf,argmax_x,D_inf,rate_constant,sup_gap
std::string to_csv(const RateSweep& s);
nlohmann::json to_json(const RateSweep& s);

// sup |p_n - phi| / phi over |x| <= c_window sqrt(log n).
double restricted_sup_check(const dist::DistributionSpec& spec, int n, double c_window);
// sup |p_n - phi| / phi on the whole line: scan up to one unit past the
// support edge (or |x| <= 40 for unbounded laws).
double unrestricted_abs_sup(const dist::DistributionSpec& spec, int n);

struct TailDecayRow {
  int n = 0;
  double sup_ratio = 0.0;  // sup over |x| >= tau0 sqrt n of p_n / phi
  double argmax_x = 0.0;
};
struct TailDecay {
  double tau0 = 0.5;
  std::vector<TailDecayRow> rows;
  double log_slope = 0.0;  // fitted d log(sup_ratio) / dn
  bool geometric = false;  // log_slope < 0 and every step decreases
};
// Requires the separation property from diag (SeparationNotEstablished otherwise,
// including the normal law and periodic laws).
TailDecay tail_decay_check(const dist::DistributionSpec& spec, double tau0, const std::vector<int>& n_list);

}  // namespace subgauss::sweep
