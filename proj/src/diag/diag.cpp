#include "subgauss/diag.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace subgauss::diag {

namespace {

constexpr double kZeroRel = 1e-8;       // A counts as zero below this fraction of max|A|
constexpr double kCondAGrid = 1e-6;     // |A''| at zeros, sampled path
constexpr double kCondATrig = 1e-8;     // |P''| relative to sum |coef| k^2, exact path
const std::vector<double> kSeparationT0{0.5, 1.0, 2.0, 4.0};

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Bisection for a sign change of f on [lo, hi].
double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void push_unique(std::vector<double>& v, double t, double tol) {
  for (double s : v)
    if (std::abs(s - t) <= tol) return;
  v.push_back(t);
}

double trig_scale(const dist::TrigPoly& P, int power) {
  double s = std::abs(P.a0()) * (power == 0 ? 1.0 : 0.0);
  for (const auto* list : {&P.cos_terms(), &P.sin_terms()})
    for (const auto& c : *list) s += std::abs(c.coef) * std::pow(c.k, power);
  return s;
}

}  // namespace

std::string to_string(CondB v) {
  switch (v) {
    case CondB::Vacuous: return "vacuous";
    case CondB::Satisfied: return "satisfied";
    case CondB::Violated: return "violated";
    case CondB::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

StrictCheck strict_check(const tilt::LogLaplaceProfile& p, bool periodic) {
  if (p.size() < 3) throw Error(ErrorKind::RangeTooSmall, "profile needs at least three points");
  StrictCheck out;
  out.min_A = *std::min_element(p.A.begin(), p.A.end());
  out.strictly_subgaussian = out.min_A >= -1e-10;
  const double scale = max_abs(p.A);
  if (scale == 0.0) {
    out.identically_zero = true;
    return out;
  }
  const double tol = kZeroRel * scale;
  const std::size_t n = p.size();
  if (!periodic) {
    if ((p.A1.back() < 0 && p.A.back() > tol) || (p.A1.front() > 0 && p.A.front() > tol))
      throw Error(ErrorKind::RangeTooSmall, "A still descending at the end of the profile range");
  }
  const double cell = p.t[1] - p.t[0];
  auto A1_at = [&](double t) { return p.interpolate(t).A1; };
  if (p.A.front() <= tol) push_unique(out.zero_set, p.t.front(), 0.5 * cell);
  for (std::size_t i = 1; i < n; ++i) {
    if (p.A1[i - 1] < 0.0 && p.A1[i] >= 0.0) {
      const double t = p.A1[i] == 0.0 ? p.t[i] : bisect(A1_at, p.t[i - 1], p.t[i]);
      if (p.interpolate(t).A <= tol) push_unique(out.zero_set, t, 0.5 * cell);
    }
  }
  if (p.A.back() <= tol) push_unique(out.zero_set, p.t.back(), 0.5 * cell);
  std::sort(out.zero_set.begin(), out.zero_set.end());
  return out;
}

std::vector<PeriodicRoot> periodic_roots(const dist::TrigPoly& P) {
  const double h = P.period();
  const double s0 = trig_scale(P, 0), s2 = trig_scale(P, 2);
  std::vector<PeriodicRoot> out;
  if (s0 == 0.0) return out;
  constexpr int kCells = 8192;
  const double cell = h / kCells;
  std::vector<double> v(kCells + 1);
  for (int i = 0; i <= kCells; ++i) v[static_cast<std::size_t>(i)] = P.eval(i * cell);
  std::vector<double> roots;
  for (int i = 0; i <= kCells; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const bool left_ok = i == 0 || v[k] <= v[k - 1];
    const bool right_ok = i == kCells || v[k] <= v[k + 1];
    if (!left_ok || !right_ok) continue;
    // Newton on P' from the sampled minimum.
    double t = i * cell;
    for (int it = 0; it < 60; ++it) {
      const double d1 = P.eval(t, 1), d2 = P.eval(t, 2);
      if (d2 == 0.0) break;
      const double tn = std::clamp(t - d1 / d2, (i - 2) * cell, (i + 2) * cell);
      if (std::abs(tn - t) <= 1e-16 * std::max(1.0, std::abs(t))) break;
      t = tn;
    }
    t = std::clamp(t, 0.0, h);
    if (std::abs(P.eval(t)) <= 1e-10 * s0) push_unique(roots, t, 2.0 * cell);
  }
  std::sort(roots.begin(), roots.end());
  for (double t : roots) {
    const double p2 = P.eval(t, 2);
    out.push_back({t, P.eval(t), p2, std::abs(p2) <= kCondATrig * s2});
  }
  return out;
}

std::vector<SeparationMargin> separation_margin(const tilt::LogLaplaceProfile& p, const std::vector<double>& t0_list,
                                                bool periodic) {
  std::vector<SeparationMargin> out;
  const bool flat = max_abs(p.A) == 0.0;
  if (!periodic && !flat && (p.A1.back() <= 0.0 || p.A1.front() >= 0.0))
    throw Error(ErrorKind::RangeTooSmall, "Psi not visibly decreasing at the end of the profile range");
  for (double t0 : t0_list) {
    double min_A = INFINITY;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (periodic || std::abs(p.t[i]) >= t0) min_A = std::min(min_A, p.A[i]);
    if (!std::isfinite(min_A)) throw Error(ErrorKind::RangeTooSmall, "no profile point with |t| >= " + fmt(t0));
    // Psi = e^{-A}; 1 - sup Psi via expm1 keeps tiny margins.
    out.push_back({t0, std::exp(-min_A), -std::expm1(-min_A)});
  }
  return out;
}

ZoneSet critical_zone(const tilt::LogLaplaceProfile& p, double a, int n, const std::function<double(double)>& A_of) {
  if (!(a > 0.0) || n < 2) throw Error(ErrorKind::InvalidArgument, "critical zone needs a > 0 and n >= 2");
  ZoneSet z;
  z.a = a;
  z.n = n;
  z.level = a / (n - 1);
  const auto A = A_of ? A_of : std::function<double(double)>([&p](double t) { return p.interpolate(t).A; });
  auto g = [&](double t) { return A(t) - z.level; };
  const std::size_t N = p.size();
  std::size_t i = 0;
  while (i < N) {
    if (p.A[i] > z.level) {
      ++i;
      continue;
    }
    const double lo = i == 0 ? p.t[0] : bisect(g, p.t[i - 1], p.t[i]);
    std::size_t j = i;
    while (j + 1 < N && p.A[j + 1] <= z.level) ++j;
    const double hi = j + 1 == N ? p.t[N - 1] : bisect(g, p.t[j], p.t[j + 1]);
    z.intervals.emplace_back(lo, hi);
    i = j + 1;
  }
  return z;
}

std::pair<int, double> first_nonzero_cumulant(const dist::CumulantReport& rep) {
  if (!rep.first_nonzero)
    throw Error(ErrorKind::AllZeroUpToJ, "no cumulant of order 3.." + std::to_string(rep.J()) + " exceeds its zero threshold");
  return *rep.first_nonzero;
}

tilt::LogLaplaceProfile diagnostic_profile(const dist::DistributionSpec& spec, double t_max) {
  if (const auto* t = spec.as<dist::TrigGaussian>()) {
    const double h = t->poly.period();
    return tilt::profile(spec, linspace(0.0, h, 4097));
  }
  return tilt::profile(spec, tilt::uniform_t_grid(-t_max, t_max));
}

DiagnosticsReport diagnose(const dist::DistributionSpec& spec) {
  DiagnosticsReport r;
  r.spec_id = spec.id();
  const auto* trig = spec.as<dist::TrigGaussian>();
  if (spec.is_normal()) {
    r.normal = true;
    r.strict.strictly_subgaussian = true;
    r.strict.identically_zero = true;
    r.cond_b = CondB::Vacuous;
    r.cond_b_witness = "normal law: A == 0";
    r.separation = {{0.0, 1.0, 0.0}};
    r.predicted_clt = true;
    if (trig) r.period = trig->poly.period();
    return r;
  }
  const bool periodic = trig != nullptr;
  const auto prof = diagnostic_profile(spec);
  r.strict = strict_check(prof, periodic);
  const auto cum = dist::moments_and_cumulants(spec, 8);
  r.first_nonzero_cumulant = cum.first_nonzero;
  if (r.strict.strictly_subgaussian && cum.first_nonzero)
    r.cumulant_sign_ok = cum.first_nonzero->first % 2 == 0 && cum.first_nonzero->second < 0.0;

  if (periodic) {
    r.period = trig->poly.period();
    r.periodic_criterion = periodic_roots(trig->poly);
    // cond a) on P: at a root, A'' = c P''.
    for (const auto& root : r.periodic_criterion) {
      r.cond_a.push_back({root.t, trig->c * root.P2, root.pass});
      r.cond_a_ok = r.cond_a_ok && root.pass;
    }
    r.cond_b = CondB::Vacuous;
    r.cond_b_witness = "periodic Psi: finitely many roots of Psi = 1 per period";
    r.separation = separation_margin(prof, kSeparationT0, true);
  } else {
    for (double t : r.strict.zero_set) {
      const double a2 = prof.interpolate(t).A2;
      const bool pass = std::abs(a2) <= kCondAGrid;
      r.cond_a.push_back({t, a2, pass});
      r.cond_a_ok = r.cond_a_ok && pass;
    }
    r.separation = separation_margin(prof, kSeparationT0, false);
    const bool separated = std::all_of(r.separation.begin(), r.separation.end(), [](const auto& m) { return m.margin > 0.0; });
    if (separated) {
      r.cond_b = CondB::Vacuous;
      r.cond_b_witness = "separation margin positive for every tested t0 (profile range |t| <= " + fmt(prof.t.back()) + ")";
    } else {
      r.cond_b = CondB::Inconclusive;
      r.cond_b_witness = "Psi approaches 1 away from 0 within the profile range; behaviour as t -> infinity not checkable";
    }
  }
  r.predicted_clt = r.strict.strictly_subgaussian && r.cond_a_ok && r.cond_b != CondB::Violated;
  return r;
}

nlohmann::json to_json(const DiagnosticsReport& r) {
  using nlohmann::json;
  json j;
  j["spec_id"] = r.spec_id;
  j["normal"] = r.normal;
  j["strictly_subgaussian"] = r.strict.strictly_subgaussian;
  j["min_A"] = r.strict.min_A;
  j["A_zero_set"] = r.strict.zero_set;
  j["A_identically_zero"] = r.strict.identically_zero;
  j["cond_a"] = json::array();
  for (const auto& z : r.cond_a) j["cond_a"].push_back({{"t", z.t}, {"A2", z.A2}, {"pass", z.pass}});
  j["cond_a_ok"] = r.cond_a_ok;
  j["cond_b"] = to_string(r.cond_b);
  j["cond_b_witness"] = r.cond_b_witness;
  j["separation_margins"] = json::array();
  for (const auto& m : r.separation) j["separation_margins"].push_back({{"t0", m.t0}, {"sup_psi", m.sup_psi}, {"margin", m.margin}});
  j["period"] = r.period ? json(*r.period) : json(nullptr);
  j["periodic_criterion"] = json::array();
  for (const auto& p : r.periodic_criterion)
    j["periodic_criterion"].push_back({{"t", p.t}, {"P", p.P}, {"P2", p.P2}, {"pass", p.pass}});
  j["first_nonzero_cumulant"] =
      r.first_nonzero_cumulant ? json{{"m", r.first_nonzero_cumulant->first}, {"gamma", r.first_nonzero_cumulant->second}} : json(nullptr);
  j["cumulant_sign_ok"] = r.cumulant_sign_ok;
  j["predicted_clt"] = r.predicted_clt;
  return j;
}

std::string verdict_table(const DiagnosticsReport& r) {
  std::ostringstream os;
  auto row = [&](const std::string& k, const std::string& v) { os << "  " << k << std::string(k.size() < 24 ? 24 - k.size() : 1, ' ') << v << '\n'; };
  os << "diagnostics for " << r.spec_id << '\n';
  row("strictly subgaussian", r.strict.strictly_subgaussian ? "yes" : "no");
  row("min A", fmt(r.strict.min_A));
  if (r.strict.identically_zero) {
    row("zeros of A", "A == 0 (normal)");
  } else {
    std::string zs;
    for (double t : r.strict.zero_set) zs += (zs.empty() ? "" : ", ") + fmt(t);
    row("zeros of A", zs.empty() ? "none" : zs);
  }
  row("cond a", r.cond_a_ok ? "holds" : "fails");
  for (const auto& p : r.periodic_criterion)
    row("  root t = " + fmt(p.t), "P'' = " + fmt(p.P2) + (p.pass ? "  ok" : "  VIOLATES"));
  row("cond b", to_string(r.cond_b) + " (" + r.cond_b_witness + ")");
  for (const auto& m : r.separation) row("  margin t0 = " + fmt(m.t0), fmt(m.margin));
  if (r.first_nonzero_cumulant)
    row("first cumulant", "m = " + std::to_string(r.first_nonzero_cumulant->first) + ", gamma = " + fmt(r.first_nonzero_cumulant->second));
  else
    row("first cumulant", "none up to order 8");
  row("predicted CLT in D_inf", r.predicted_clt ? "yes" : "no");
  return os.str();
}

}  // namespace subgauss::diag
