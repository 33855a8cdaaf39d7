#include "subgauss/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "subgauss/diag.hpp"
#include "subgauss/div.hpp"

namespace subgauss::sweep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kGridDx = 0.01;
constexpr double kGapWindow = 8.0;

struct Entry {
  double T = 0.0, x = 0.0, gap = 0.0, accuracy = 0.0;
  std::string method;
};

Entry ladder_entry(const dist::DistributionSpec& spec, int n) {
  Entry e;
  if (spec.is_normal()) {
    e.method = "exact";
    return e;
  }
  const auto tb = div::make_tail_bound(spec, n);
  conv::OutputGrid grid{kGridDx, 0};
  grid.half_count = static_cast<long>(std::llround(div::certified_half_width(tb, kGapWindow) / kGridDx));
  const auto p = conv::density_zn(spec, n, grid);
  const auto sup = div::t_inf(p, &tb);
  e.T = sup.T_inf;
  e.x = sup.argmax_x;
  e.accuracy = p.accuracy;
  e.method = conv::to_string(p.method);
  // Grid payloads end at their own edge; the gap there is below 1e-15 anyway.
  double W = kGapWindow;
  if (const auto* d = p.deviation(); d && d->as<dist::GridForm>()) W = std::min(W, d->as<dist::GridForm>()->x_max());
  if (const auto* g = p.grid()) W = std::min(W, g->x_max());
  const long H = static_cast<long>(std::floor(W / kGridDx + 1e-9));
  for (long j = -H; j <= H; ++j) {
    const double x = static_cast<double>(j) * kGridDx;
    e.gap = std::max(e.gap, std::abs(p.ratio_minus_one(x)) * phi(x));
  }
  return e;
}

double median3(double a, double b, double c) { return std::max(std::min(a, b), std::min(std::max(a, b), c)); }

double fit_slope(const std::vector<int>& n, const std::vector<double>& T) {
  std::vector<double> lx, ly;
  for (std::size_t i = n.size() / 2; i < n.size(); ++i) {
    if (T[i] > 0.0) {
      lx.push_back(std::log(static_cast<double>(n[i])));
      ly.push_back(std::log(T[i]));
    }
  }
  if (lx.size() < 2) return kNaN;
  const std::vector<std::vector<double>> cols{std::vector<double>(lx.size(), 1.0), lx};
  return least_squares(cols, ly)[1];
}

template <class F>
void parallel_for(std::size_t count, int threads, F&& task) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  // Report the failure of the smallest n, whatever the scheduling was.
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Deviation r_n at points, through the contour where it applies.
std::vector<double> ratio_at(const dist::DistributionSpec& spec, int n, const std::vector<double>& xs) {
  if (spec.is_normal()) return std::vector<double>(xs.size(), 0.0);
  if (spec.as<dist::Uniform>() || spec.as<dist::WeightedUniformSum>()) return conv::deviation_at_points(spec, n, xs);
  double X = 0.0;
  for (double x : xs) X = std::max(X, std::abs(x));
  const auto p = conv::density_zn(spec, n, {0.005, static_cast<long>(std::ceil((X + 0.1) / 0.005))});
  std::vector<double> out;
  for (double x : xs) out.push_back(p.ratio_minus_one(x));
  return out;
}

std::vector<double> nodes_between(double lo, double hi, double dx) {
  std::vector<double> xs;
  for (long j = static_cast<long>(std::ceil(lo / dx - 1e-9)); static_cast<double>(j) * dx <= hi + 1e-12; ++j)
    xs.push_back(static_cast<double>(j) * dx);
  return xs;
}

}  // namespace

std::string Verdict::to_string() const {
  switch (kind) {
    case VerdictKind::Converges: return "converges";
    case VerdictKind::StallsAt: return "stalls_at";
    case VerdictKind::Inconclusive: break;
  }
  return "inconclusive";
}

Verdict classify(const std::vector<double>& T, double resolvable, bool predicted_clt, const VerdictRule& rule) {
  const std::size_t N = T.size();
  if (N >= 3) {
    const double L = median3(T[N - 3], T[N - 2], T[N - 1]);
    bool near = L > rule.resolvable_factor * resolvable && L > 0.0;
    for (std::size_t i = N - 3; i < N && near; ++i) near = std::abs(T[i] - L) <= rule.stall_band * L;
    if (near) {
      // A converging ladder may pass through a flat stretch; the gate keeps
      // predicted-CLT specs from being called stalled only when they still decrease.
      const bool decreasing = T[N - 1] < 0.9 * T[N - 3];
      if (!(predicted_clt && decreasing)) return {VerdictKind::StallsAt, L};
    }
  }
  if (!predicted_clt) return {};
  bool monotone = true;
  for (std::size_t i = N / 2 + 1; i < N; ++i) monotone = monotone && T[i] <= (1.0 + rule.monotone_jitter) * T[i - 1];
  if (monotone) return {VerdictKind::Converges, 0.0};
  return {};
}

RateSweep run_sweep(const dist::DistributionSpec& spec, const std::vector<int>& n_list, int threads, const VerdictRule& rule) {
  if (n_list.empty()) throw Error(ErrorKind::InvalidArgument, "empty n ladder");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
    if (n_list[i] > kMaxLadderN) throw Error(ErrorKind::InvalidArgument, "n exceeds " + std::to_string(kMaxLadderN));
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw Error(ErrorKind::InvalidArgument, "n ladder must be increasing");
  }
  RateSweep s;
  s.spec_id = spec.id();
  s.n_list = n_list;
  s.predicted_clt = diag::diagnose(spec).predicted_clt;

  std::vector<Entry> entries(n_list.size());
  parallel_for(n_list.size(), threads, [&](std::size_t i) { entries[i] = ladder_entry(spec, n_list[i]); });

  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const auto& e = entries[i];
    const double n = n_list[i];
    s.T_inf.push_back(e.T);
    s.argmax_x.push_back(e.x);
    s.D_inf.push_back(std::log1p(e.T));
    const double L = std::log(n);
    s.rate_constant.push_back(n > 1 ? e.T * n / (L * L * L) : kNaN);
    s.sup_gap.push_back(e.gap);
    s.method.push_back(e.method);
    s.resolvable = std::max(s.resolvable, e.accuracy);
  }
  s.loglog_slope = fit_slope(s.n_list, s.T_inf);
  s.verdict = spec.is_normal() ? Verdict{VerdictKind::Converges, 0.0} : classify(s.T_inf, s.resolvable, s.predicted_clt, rule);
  return s;
}

std::string to_csv(const RateSweep& s) {
  std::ostringstream os;
  os << "n,T_inf,argmax_x,D_inf,rate_constant,sup_gap\n";
  for (std::size_t i = 0; i < s.n_list.size(); ++i)
    os << s.n_list[i] << ',' << fmt(s.T_inf[i]) << ',' << fmt(s.argmax_x[i]) << ',' << fmt(s.D_inf[i]) << ','
       << fmt(s.rate_constant[i]) << ',' << fmt(s.sup_gap[i]) << '\n';
  return os.str();
}

nlohmann::json to_json(const RateSweep& s) {
  using nlohmann::json;
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json rc = json::array();
  for (double v : s.rate_constant) rc.push_back(num(v));
  json j{{"spec_id", s.spec_id},
         {"n_list", s.n_list},
         {"T_inf", s.T_inf},
         {"argmax_x", s.argmax_x},
         {"D_inf", s.D_inf},
         {"rate_constant", rc},
         {"sup_gap", s.sup_gap},
         {"method", s.method},
         {"loglog_slope", num(s.loglog_slope)},
         {"resolvable", s.resolvable},
         {"predicted_clt", s.predicted_clt}};
  j["verdict"] = s.verdict.to_string();
  j["stall_level"] = s.verdict.kind == VerdictKind::StallsAt ? json(s.verdict.level) : json(nullptr);
  return j;
}

double restricted_sup_check(const dist::DistributionSpec& spec, int n, double c_window) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  const double X = c_window * std::sqrt(std::log(static_cast<double>(n)));
  auto xs = nodes_between(-X, X, kGridDx);
  // The window is closed; its edges are where |r| usually peaks.
  xs.insert(xs.begin(), -X);
  xs.push_back(X);
  double best = 0.0;
  for (double r : ratio_at(spec, n, xs)) best = std::max(best, std::abs(r));
  return best;
}

double unrestricted_abs_sup(const dist::DistributionSpec& spec, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  const double X = std::min(40.0, spec.support_halfwidth() * std::sqrt(static_cast<double>(n)) + 1.0);
  const auto xs = nodes_between(-X, X, 0.05);
  double best = 0.0;
  for (double r : ratio_at(spec, n, xs)) best = std::max(best, std::abs(r));
  return best;
}

TailDecay tail_decay_check(const dist::DistributionSpec& spec, double tau0, const std::vector<int>& n_list) {
  if (spec.is_normal()) throw Error(ErrorKind::SeparationNotEstablished, "the normal law has ratio identically 1");
  if (spec.as<dist::TrigGaussian>())
    throw Error(ErrorKind::SeparationNotEstablished, "periodic Psi returns to 1 at every period");
  const auto rep = diag::diagnose(spec);
  for (const auto& m : rep.separation)
    if (!(m.margin > 0.0))
      throw Error(ErrorKind::SeparationNotEstablished, "sup Psi over |t| >= " + fmt(m.t0) + " is " + fmt(m.sup_psi));
  if (!(tau0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "tau0 must be positive");

  TailDecay out;
  out.tau0 = tau0;
  for (int n : n_list) {
    const double rn = std::sqrt(static_cast<double>(n));
    const double from = tau0 * rn;
    const double to = std::min(40.0, spec.support_halfwidth() * rn + 0.5);
    TailDecayRow row{n, 0.0, from};
    if (from < to) {
      const auto xs = nodes_between(from, to, kGridDx);
      const auto r = ratio_at(spec, n, xs);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (1.0 + r[i] > row.sup_ratio) {
          row.sup_ratio = 1.0 + r[i];
          row.argmax_x = xs[i];
        }
      }
      if (!spec.is_symmetric()) {
        std::vector<double> neg(xs.size());
        std::transform(xs.begin(), xs.end(), neg.begin(), [](double x) { return -x; });
        const auto rneg = ratio_at(spec, n, neg);
        for (std::size_t i = 0; i < neg.size(); ++i) {
          if (1.0 + rneg[i] > row.sup_ratio) {
            row.sup_ratio = 1.0 + rneg[i];
            row.argmax_x = neg[i];
          }
        }
      }
    }
    out.rows.push_back(row);
  }
  std::vector<double> ns, ls;
  bool steps = true;
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    if (out.rows[i].sup_ratio > 0.0) {
      ns.push_back(out.rows[i].n);
      ls.push_back(std::log(out.rows[i].sup_ratio));
    }
    if (i > 0) steps = steps && out.rows[i].sup_ratio < out.rows[i - 1].sup_ratio;
  }
  out.log_slope = ns.size() >= 2 ? least_squares({std::vector<double>(ns.size(), 1.0), ns}, ls)[1] : kNaN;
  out.geometric = steps && out.log_slope < 0.0;
  return out;
}

}  // namespace subgauss::sweep
