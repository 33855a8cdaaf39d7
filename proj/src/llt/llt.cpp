#include "subgauss/llt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "subgauss/div.hpp"

namespace subgauss::llt {

namespace {

constexpr double kScanDx = 0.01;

int summands(const dist::DistributionSpec& spec) {
  if (const auto* w = spec.as<dist::WeightedUniformSum>()) {
    int k = 0;
    for (double v : w->weights) k += v != 0.0;
    return k;
  }
  return 1;
}

// r_n at arbitrary points: exact pointwise routes where available, otherwise
// interpolation on a CF-inverted grid.
class RatioEval {
 public:
  RatioEval(const dist::DistributionSpec& spec, int n, double x_max) : spec_(spec), n_(n) {
    if (spec.as<dist::TrigGaussian>()) {
      dens_ = conv::density_zn_spectral(spec, n);
    } else if ((spec.as<dist::Uniform>() || spec.as<dist::WeightedUniformSum>()) && n * summands(spec) >= 8) {
      contour_ = true;
    } else {
      conv::OutputGrid g{0.005, static_cast<long>(std::ceil((x_max + 0.1) / 0.005))};
      dens_ = conv::density_zn(spec, n, g);
    }
  }
  std::vector<double> operator()(std::span<const double> xs) const {
    if (contour_) return conv::deviation_at_points(spec_, n_, xs);
    std::vector<double> out;
    for (double x : xs) out.push_back(dens_.ratio_minus_one(x));
    return out;
  }

 private:
  const dist::DistributionSpec& spec_;
  int n_;
  bool contour_ = false;
  conv::SumDensity dens_;
};

// Largest sampled value with a parabolic refinement at the peak.
std::pair<double, double> sampled_max(const std::vector<double>& xs, const std::vector<double>& v) {
  std::size_t b = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[b]) b = i;
  if (b == 0 || b + 1 == v.size()) return {v[b], xs[b]};
  const double denom = v[b - 1] - 2.0 * v[b] + v[b + 1];
  if (!(denom < 0.0)) return {v[b], xs[b]};
  const double d = std::clamp(0.5 * (v[b - 1] - v[b + 1]) / denom, -1.0, 1.0);
  return {v[b] - 0.25 * (v[b - 1] - v[b + 1]) * d, xs[b] + d * (xs[b + 1] - xs[b])};
}

std::vector<double> symmetric_nodes(double X, double dx) {
  const long H = static_cast<long>(std::floor(X / dx + 1e-9));
  std::vector<double> xs;
  for (long j = -H; j <= H; ++j) xs.push_back(static_cast<double>(j) * dx);
  return xs;
}

}  // namespace

double GapReport::spread() const {
  if (scaled_gap.empty()) return 1.0;
  const auto [lo, hi] = std::minmax_element(scaled_gap.begin(), scaled_gap.end());
  return *lo > 0 ? *hi / *lo : (*hi > 0 ? INFINITY : 1.0);
}

GapReport uniform_llt_gap(const dist::DistributionSpec& spec, const std::vector<int>& n_list) {
  GapReport rep;
  rep.n_list = n_list;
  if (spec.is_normal()) {
    rep.sup_gap.assign(n_list.size(), 0.0);
    rep.scaled_gap.assign(n_list.size(), 0.0);
    rep.M = 1.0 / kSqrt2Pi;
    rep.beta3 = 2.0 * std::sqrt(2.0 / kPi);
    return rep;
  }
  const auto cum = dist::moments_and_cumulants(spec, 4);
  rep.M = cum.max_density;
  rep.beta3 = cum.beta3;
  // |p_n - phi| = |r_n| phi is below 1e-15 beyond |x| = 8 for every supported law.
  const auto xs = symmetric_nodes(8.0, kScanDx);
  for (int n : n_list) {
    const auto r = RatioEval(spec, n, 8.0)(xs);
    std::vector<double> g(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) g[i] = std::abs(r[i]) * phi(xs[i]);
    const double gap = sampled_max(xs, g).first;
    rep.sup_gap.push_back(gap);
    rep.scaled_gap.push_back(std::sqrt(static_cast<double>(n)) * gap / (rep.M * rep.M * rep.beta3));
  }
  for (double s : rep.scaled_gap) rep.bounded = rep.bounded && s <= 1.25 * rep.scaled_gap.front();
  return rep;
}

std::vector<TiltedRow> tilted_llt_check(const dist::DistributionSpec& spec, int n, double a, std::vector<double> samples) {
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidArgument, "a must be positive");
  if (static_cast<double>(n) < 4.0 * (a + 1.0))
    throw Error(ErrorKind::ZoneViolation, "n = " + std::to_string(n) + " is below 4(a + 1) = " + fmt(4.0 * (a + 1.0)));
  const double level = a / (n - 1);
  auto A = [&](double t) { return tilt::profile_point(spec, t).A; };
  if (samples.empty()) {
    // Zone interval around 0 on each side, capped at 0.5.
    auto edge = [&](double dir) {
      if (A(0.5 * dir) <= level) return 0.5;
      double lo = 0.0, hi = 0.5;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (A(mid * dir) <= level ? lo : hi) = mid;
      }
      return lo;
    };
    samples = linspace(-0.98 * edge(-1.0), 0.98 * edge(1.0), 9);
  }
  const double rn = std::sqrt(static_cast<double>(n));
  std::vector<double> xs;
  for (double x : samples) {
    if (A(x) > level) throw Error(ErrorKind::ZoneViolation, "x = " + fmt(x) + " lies outside the critical zone A <= " + fmt(level));
    xs.push_back(x * rn);
  }
  double x_max = 0.0;
  for (double y : xs) x_max = std::max(x_max, std::abs(y));
  const auto r = RatioEval(spec, n, x_max)(xs);
  const double c = spec.is_normal() ? 1.0 : div::make_tail_bound(spec, 1).c1;
  std::vector<TiltedRow> rows;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto row = tilt::profile_point(spec, samples[i]);
    const double sigma = std::sqrt(row.K2);
    const double v = row.A1 / sigma;
    const double rhs = std::exp(-n * row.A - 0.5 * n * v * v) / sigma;
    const double lhs = 1.0 + r[i];
    rows.push_back({n, samples[i], lhs, rhs, (lhs - rhs) * rn / std::pow(c, 4)});
  }
  return rows;
}

std::string tilted_csv(const std::vector<TiltedRow>& rows) {
  std::ostringstream os;
  os << "n,x,lhs,rhs,residual\n";
  for (const auto& r : rows) os << r.n << ',' << fmt(r.x) << ',' << fmt(r.lhs) << ',' << fmt(r.rhs) << ',' << fmt(r.residual) << '\n';
  return os.str();
}

Cramer cramer_coeffs(const dist::CumulantReport& rep) {
  if (rep.J() < 4) throw Error(ErrorKind::InvalidArgument, "Cramer coefficients need cumulants to order 4");
  const double g3 = rep.gamma[3], g4 = rep.gamma[4];
  return {g3 / 6.0, (g4 - 3.0 * g3 * g3) / 24.0};
}

RichterFit richter_fit(const dist::DistributionSpec& spec, const std::vector<int>& n_list, double window_scale, bool with_cubic,
                       double x_step) {
  RichterFit fit;
  const auto cum = dist::moments_and_cumulants(spec, 8);
  if (cum.first_nonzero) {
    fit.m = cum.first_nonzero->first;
    fit.target = cum.first_nonzero->second / std::tgamma(fit.m + 1.0);
  }
  const int m = fit.m;
  std::vector<std::vector<double>> cols(with_cubic ? 4 : 3);
  std::vector<double> y;
  for (int n : n_list) {
    const double nd = static_cast<double>(n);
    const double W = window_scale * std::pow(nd, 0.5 - 1.0 / m);
    const auto xs = symmetric_nodes(W, x_step);
    const auto r = RatioEval(spec, n, W)(xs);
    const double scale = std::pow(nd, 0.5 * m - 1.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double x = xs[i];
      cols[0].push_back(std::pow(x, m) / scale);
      cols[1].push_back(std::pow(x, m - 2) / scale);
      cols[2].push_back(1.0 / nd);
      if (with_cubic) cols[3].push_back(x * x * x / std::sqrt(nd));
      y.push_back(std::log1p(r[i]));
    }
  }
  fit.points = y.size();
  if (y.size() < cols.size() + 1) throw Error(ErrorKind::IllConditionedFit, "window holds too few points for the fit");
  const auto beta = least_squares(cols, y);
  fit.slope = beta[0];
  if (with_cubic) fit.cubic = beta[3];
  return fit;
}

LogCubeExcess log_cube_check(const dist::DistributionSpec& spec, const std::vector<int>& n_list, double tau0) {
  LogCubeExcess out;
  out.tau0 = tau0;
  double cmin = INFINITY;
  for (int n : n_list) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "log-cube check needs n >= 2");
    const double X = tau0 * std::sqrt(static_cast<double>(n));
    const auto xs = symmetric_nodes(X, kScanDx);
    const auto r = RatioEval(spec, n, X)(xs);
    const double e = sampled_max(xs, r).first;
    const double L = std::log(static_cast<double>(n));
    out.rows.push_back({n, e, e * n / (L * L * L)});
    out.C_max = std::max(out.C_max, out.rows.back().C);
    cmin = std::min(cmin, out.rows.back().C);
  }
  out.stability = cmin > 0 ? out.C_max / cmin : INFINITY;
  return out;
}

nlohmann::json to_json(const LltReport& r) {
  using nlohmann::json;
  json j;
  j["n_list"] = r.gap.n_list;
  j["sup_gap"] = r.gap.sup_gap;
  j["scaled_gap"] = r.gap.scaled_gap;
  j["M"] = r.gap.M;
  j["beta3"] = r.gap.beta3;
  j["gap_bound_ok"] = r.gap.bounded;
  j["scaled_gap_spread"] = r.gap.spread();
  j["tilted_residuals"] = json::array();
  for (const auto& t : r.tilted)
    j["tilted_residuals"].push_back({{"n", t.n}, {"x", t.x}, {"lhs", t.lhs}, {"rhs", t.rhs}, {"residual", t.residual}});
  j["cramer"] = {{"lambda0", r.cramer.lambda0}, {"lambda1", r.cramer.lambda1}};
  if (r.richter) {
    j["richter_fit"] = {{"m", r.richter->m}, {"slope", r.richter->slope}, {"target", r.richter->target}, {"points", r.richter->points}};
    if (r.richter->cubic) j["richter_fit"]["cubic"] = *r.richter->cubic;
  } else {
    j["richter_fit"] = nullptr;
  }
  if (r.log_cube) {
    json rows = json::array();
    for (const auto& row : r.log_cube->rows) rows.push_back({{"n", row.n}, {"excess", row.excess}, {"C", row.C}});
    j["log_cube"] = {{"tau0", r.log_cube->tau0}, {"rows", rows}, {"C_max", r.log_cube->C_max}, {"stability", r.log_cube->stability}};
  } else {
    j["log_cube"] = nullptr;
  }
  return j;
}

}  // namespace subgauss::llt
