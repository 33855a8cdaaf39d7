#include "subgauss/div.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>

#include "subgauss/fft.hpp"

namespace subgauss::div {

namespace {

constexpr double kResolvedRatioNoise = 1e-8;  // grid nodes count as resolved when noise/phi is below this
constexpr std::size_t kScanPoints = std::size_t{1} << 16;

// h(r) = (1+r)^alpha - 1 - alpha r, series for small r to avoid cancellation.
double power_excess(double r, double alpha) {
  if (std::abs(r) * std::max(alpha, 1.0) < 0.05 && std::abs(r) < 0.05) {
    double term = alpha, sum = 0.0, rk = r;
    for (int k = 2; k <= 24; ++k) {
      term *= (alpha - k + 1) / k;
      rk *= r;
      sum += term * rk;
      if (std::abs(term * rk) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  if (r <= -1.0) return alpha > 0 ? alpha - 1.0 : std::numeric_limits<double>::infinity();
  return std::expm1(alpha * std::log1p(r)) - alpha * r;
}

// (1+r) log(1+r) - r, series for small r.
double entropy_excess(double r) {
  if (std::abs(r) < 0.05) {
    double sum = 0.0, rk = r;
    for (int k = 2; k <= 30; ++k) {
      rk *= r;
      const double t = ((k % 2 == 0) ? 1.0 : -1.0) * rk / (k * (k - 1.0));
      sum += t;
      if (std::abs(t) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  if (r <= -1.0) return 1.0;
  return (1.0 + r) * std::log1p(r) - r;
}

// h(r) phi(x) with the large-ratio branch evaluated in log space.
double weighted_power_excess(double r, double alpha, double x) {
  if (r > 0.0 && alpha * std::log1p(r) > 600.0) {
    const double lg = alpha * std::log1p(r) + log_phi(x);
    if (lg > 700.0) throw Error(ErrorKind::DivergentIntegral, "ratio^alpha overflows at x = " + fmt(x));
    return std::exp(lg) - (1.0 + alpha * r) * phi(x);
  }
  return power_excess(r, alpha) * phi(x);
}

// Deviation values on a fixed node set (grids and grid-form deviations).
struct NodeRatios {
  double x0 = 0.0, dx = 1.0;
  std::vector<double> r;       // p/phi - 1 (-1 where p is zero)
  std::vector<double> log_pa;  // log p (or log((1+r) phi)); -inf where p = 0
  std::size_t clipped = 0;
  double x(std::size_t i) const noexcept { return x0 + static_cast<double>(i) * dx; }
};

NodeRatios node_ratios(const conv::SumDensity& p) {
  NodeRatios out;
  if (const auto* g = p.grid()) {
    out.x0 = g->x0;
    out.dx = g->dx;
    const double noise = p.accuracy;
    for (std::size_t i = 0; i < g->values.size(); ++i) {
      double v = g->values[i];
      if (v < -noise) ++out.clipped;
      if (v <= noise) v = 0.0;
      const double x = g->x(i);
      const double lp = v > 0 ? std::log(v) : -std::numeric_limits<double>::infinity();
      out.log_pa.push_back(lp);
      out.r.push_back(v > 0 ? std::expm1(lp - log_phi(x)) : -1.0);
    }
    return out;
  }
  const auto* f = p.deviation()->as<dist::GridForm>();
  out.x0 = f->x0;
  out.dx = f->dx;
  for (std::size_t i = 0; i < f->values.size(); ++i) {
    double r = f->values[i];
    if (r < -1.0 - p.accuracy) ++out.clipped;
    r = std::max(r, -1.0);
    out.r.push_back(r);
    out.log_pa.push_back(r > -1.0 ? std::log1p(r) + log_phi(out.x(i)) : -std::numeric_limits<double>::infinity());
  }
  return out;
}

double trapezoid(const std::vector<double>& f, double dx) {
  std::vector<double> w(f);
  if (!w.empty()) {
    w.front() *= 0.5;
    w.back() *= 0.5;
  }
  return dx * pairwise_sum(w);
}

// Mass of phi outside [lo, hi].
double gauss_outside(double lo, double hi) {
  return 0.5 * std::erfc(hi / kSqrt2) + 0.5 * std::erfc(-lo / kSqrt2);
}

void check_edges(const NodeRatios& nr, double alpha) {
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nr.r.size(); ++i)
    peak = std::max(peak, alpha * nr.log_pa[i] + (1.0 - alpha) * log_phi(nr.x(i)));
  for (std::size_t i : {std::size_t{0}, nr.r.size() - 1}) {
    const double e = alpha * nr.log_pa[i] + (1.0 - alpha) * log_phi(nr.x(i));
    if (e > peak + std::log(1e-12))
      throw Error(ErrorKind::DivergentIntegral, "integrand of order " + fmt(alpha) + " is not negligible at the grid edge x = " +
                                                    fmt(nr.x(i)));
  }
}

// Spectral deviation: trapezoid over [-X, X] refined by halving until stable.
class SpectralSampler {
 public:
  SpectralSampler(const dist::SpectralForm& f, double X) : f_(f), X_(X) {
    const double nu = f.max_harmonic() * f.base_freq;
    dx_ = std::min(0.1, 2.0 * kPi / (nu + 20.0));
    const auto count = static_cast<std::size_t>(std::ceil(2.0 * X_ / dx_));
    dx_ = 2.0 * X_ / static_cast<double>(count);
    for (std::size_t i = 0; i <= count; ++i) r_.push_back(eval(-X_ + static_cast<double>(i) * dx_));
  }
  double dx() const noexcept { return dx_; }
  const std::vector<double>& r() const noexcept { return r_; }
  double x(std::size_t i) const noexcept { return -X_ + static_cast<double>(i) * dx_; }
  void refine() {
    std::vector<double> next(2 * r_.size() - 1);
    for (std::size_t i = 0; i < r_.size(); ++i) next[2 * i] = r_[i];
    dx_ *= 0.5;
    for (std::size_t i = 1; i < next.size(); i += 2) next[i] = eval(-X_ + static_cast<double>(i) * dx_);
    r_ = std::move(next);
  }
  // int r phi over the line from the coefficients.
  double normalization() const {
    double s = f_.coef(0).real();
    for (int j = 1; j <= f_.max_harmonic(); ++j) {
      const double w = j * f_.base_freq;
      s += 2.0 * f_.coef(j).real() * std::exp(-0.5 * w * w);
    }
    return s;
  }

 private:
  // Harmonics by complex rotation, O(K) per point.
  double eval(double x) const {
    const cplx step = std::polar(1.0, f_.base_freq * x);
    cplx e = step;
    double s = f_.coef(0).real();
    for (int j = 1; j <= f_.max_harmonic(); ++j) {
      s += 2.0 * (f_.coef(j) * e).real();
      e *= step;
    }
    return s;
  }
  const dist::SpectralForm& f_;
  double X_;
  double dx_;
  std::vector<double> r_;
};

double coefficient_abs_sum(const dist::SpectralForm& f) {
  double s = std::abs(f.coef(0));
  for (int j = 1; j <= f.max_harmonic(); ++j) s += 2.0 * std::abs(f.coef(j));
  return s;
}

// Integrals of g(r(x)) phi(x) for each functional in the batch.
using Functional = std::function<double(double r, double x)>;

std::vector<double> spectral_integrals(const dist::SpectralForm& f, const std::vector<Functional>& fs, double alpha_max) {
  const double S = coefficient_abs_sum(f);
  const double X = std::max(10.0, std::sqrt(2.0 * (alpha_max * std::log1p(S) + 45.0)));
  SpectralSampler s(f, X);
  auto integrate = [&](const Functional& g) {
    std::vector<double> v(s.r().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = g(s.r()[i], s.x(i));
    return trapezoid(v, s.dx());
  };
  std::vector<double> prev(fs.size());
  for (std::size_t k = 0; k < fs.size(); ++k) prev[k] = integrate(fs[k]);
  for (int level = 0; level < 7; ++level) {
    s.refine();
    bool done = true;
    for (std::size_t k = 0; k < fs.size(); ++k) {
      const double cur = integrate(fs[k]);
      if (std::abs(cur - prev[k]) > 1e-12 * std::abs(cur) + 1e-300) done = false;
      prev[k] = cur;
    }
    if (done) break;
  }
  return prev;
}

// int p - 1 for the stored representation (p taken as 0 outside a grid).
double mass_defect(const conv::SumDensity& p) {
  if (const auto* d = p.deviation(); d && d->as<dist::SpectralForm>())
    return SpectralSampler(*d->as<dist::SpectralForm>(), 1.0).normalization();
  const auto nr = node_ratios(p);
  std::vector<double> rphi(nr.r.size());
  for (std::size_t i = 0; i < rphi.size(); ++i) rphi[i] = nr.r[i] * phi(nr.x(i));
  return trapezoid(rphi, nr.dx) - gauss_outside(nr.x(0), nr.x(nr.r.size() - 1));
}

// Shared evaluation of (alpha - 1) T_alpha for each alpha, for the normalized
// density p / (1 + eps). With H = int h(r) phi the stored density gives
// int p^alpha phi^{1-alpha} = 1 + S, S = H + alpha int r phi - (phi mass off the grid),
// and normalizing multiplies by (1 + eps)^{-alpha}; the O(eps) terms cancel exactly.
std::vector<double> scaled_tsallis(const conv::SumDensity& p, const std::vector<double>& alphas) {
  for (double a : alphas)
    if (!(a > 0.0) || a == 1.0) throw Error(ErrorKind::InvalidArgument, "alpha must be positive and != 1 (got " + fmt(a) + ")");
  std::vector<double> S(alphas.size());
  if (const auto* d = p.deviation(); d && d->as<dist::SpectralForm>()) {
    const auto& f = *d->as<dist::SpectralForm>();
    std::vector<Functional> fs;
    for (double a : alphas) fs.push_back([a](double r, double x) { return weighted_power_excess(r, a, x); });
    const auto ints = spectral_integrals(f, fs, *std::max_element(alphas.begin(), alphas.end()));
    const double N = SpectralSampler(f, 1.0).normalization();
    for (std::size_t k = 0; k < alphas.size(); ++k) S[k] = ints[k] + alphas[k] * N;
  } else {
    const auto nr = node_ratios(p);
    std::vector<double> rphi(nr.r.size());
    for (std::size_t i = 0; i < rphi.size(); ++i) rphi[i] = nr.r[i] * phi(nr.x(i));
    const double N = trapezoid(rphi, nr.dx);
    const double outside = gauss_outside(nr.x(0), nr.x(nr.r.size() - 1));
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      check_edges(nr, alphas[k]);
      std::vector<double> v(nr.r.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = weighted_power_excess(nr.r[i], alphas[k], nr.x(i));
      S[k] = trapezoid(v, nr.dx) + alphas[k] * N - outside;
    }
  }
  const double eps = mass_defect(p);
  std::vector<double> out(alphas.size());
  for (std::size_t k = 0; k < alphas.size(); ++k) out[k] = std::expm1(-alphas[k] * std::log1p(eps)) * (1.0 + S[k]) + S[k];
  return out;
}

// Largest value of a smooth sampled function near node i by a parabola through i-1, i, i+1.
std::pair<double, double> parabolic_peak(double rm, double r0, double rp, double x, double dx) {
  const double denom = rm - 2.0 * r0 + rp;
  if (!(denom < 0.0)) return {r0, x};
  const double d = std::clamp(0.5 * (rm - rp) / denom, -1.0, 1.0);
  return {r0 - 0.25 * (rm - rp) * d, x + d * dx};
}

SupResult spectral_sup(const dist::SpectralForm& f) {
  const int K = f.max_harmonic();
  const std::size_t M = std::max(kScanPoints, fft::next_pow2(static_cast<std::size_t>(4 * K + 1)));
  std::vector<cplx> a(M);
  for (int j = -K; j <= K; ++j) a[static_cast<std::size_t>((j + static_cast<long>(M)) % static_cast<long>(M))] = f.coef(j);
  const auto v = fft::backward(a);
  const double period = f.period();
  const double cell = period / static_cast<double>(M);
  double vmax = -std::numeric_limits<double>::infinity(), scale = 0.0;
  for (const auto& c : v) {
    vmax = std::max(vmax, c.real());
    scale = std::max(scale, std::abs(c.real()));
  }
  if (scale == 0.0) return {0.0, 0.0, TailMethod::GridOnly};
  // Among near-ties pick the smallest |x| (positive first), x taken in [-period/2, period/2).
  const double tol = 1e-9 * scale;
  double best_x = 0.0;
  bool found = false;
  for (std::size_t m = 0; m < M; ++m) {
    if (v[m].real() < vmax - tol) continue;
    double x = static_cast<double>(m) * cell;
    if (m >= M / 2) x -= period;
    if (!found || std::abs(x) < std::abs(best_x) - 0.5 * cell || (std::abs(std::abs(x) - std::abs(best_x)) <= 0.5 * cell && x > best_x)) {
      best_x = x;
      found = true;
    }
  }
  // Newton polish on r' inside the bracketing cells.
  double x = best_x, rx = f.eval(x);
  for (int it = 0; it < 30; ++it) {
    const double d1 = f.eval(x, 1), d2 = f.eval(x, 2);
    if (!(d2 < 0.0)) break;
    const double xn = std::clamp(x - d1 / d2, best_x - cell, best_x + cell);
    const double rn = f.eval(xn);
    if (rn < rx) break;
    const bool small = std::abs(xn - x) <= 1e-14 * std::max(1.0, std::abs(x));
    x = xn;
    rx = rn;
    if (small) break;
  }
  return {std::max(rx, vmax), x, TailMethod::GridOnly};
}

}  // namespace

std::string to_string(TailMethod m) { return m == TailMethod::GridOnly ? "GridOnly" : "AnalyticTailBound"; }

double TailBound::sup_beyond(double x_from, int side) const {
  if (x_from >= support) return -1.0;
  if (n <= 1) return std::numeric_limits<double>::infinity();
  const double rn = std::sqrt(static_cast<double>(n));
  const double t_from = x_from / rn, t_to = support / rn;
  if (profile.size() < 2) return std::numeric_limits<double>::infinity();
  const double reach = side > 0 ? profile.t.back() : -profile.t.front();
  if (!(reach >= t_to)) return std::numeric_limits<double>::infinity();
  // Minimum of A over the tabulated nodes from one node before t_from outward.
  double min_A = std::numeric_limits<double>::infinity();
  const double dt = profile.t[1] - profile.t[0];
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double t = side * profile.t[i];
    if (t >= t_from - dt && t <= t_to + dt) min_A = std::min(min_A, profile.A[i]);
  }
  if (!std::isfinite(min_A)) return std::numeric_limits<double>::infinity();
  return c1 * kSqrt2 * std::exp(-(n - 1) * std::max(min_A, 0.0)) - 1.0;
}

TailBound make_tail_bound(const dist::DistributionSpec& spec, int n, double t_max) {
  TailBound tb;
  tb.n = n;
  tb.support = spec.support_halfwidth() * std::sqrt(static_cast<double>(n));
  const auto grid = tilt::uniform_t_grid(-t_max, t_max);
  tb.profile = tilt::profile(spec, grid);
  conv::SumDensity p1;
  p1.n = 1;
  if (const auto* law = spec.as<dist::TrigGaussian>()) {
    p1.method = conv::Method::Spectral;
    p1.payload = dist::trig_deviation(*law);
  } else {
    p1.method = conv::Method::GridConv;
    p1.payload = dist::density_grid(spec);
  }
  TailBound support_only;
  support_only.support = spec.support_halfwidth();
  tb.c1 = 1.0 + t_inf(p1, &support_only).T_inf;
  return tb;
}

double certified_half_width(const TailBound& tb, double start) {
  const double cap = std::min(64.0, tb.support + 1.0);
  double X = start;
  while (X < cap && (tb.sup_beyond(X, 1) > 0.0 || tb.sup_beyond(X, -1) > 0.0)) X += 2.0;
  return std::min(X, cap);
}

static SupResult raw_t_inf(const conv::SumDensity& p, const TailBound* tail) {
  if (const auto* d = p.deviation(); d && d->as<dist::SpectralForm>()) return spectral_sup(*d->as<dist::SpectralForm>());
  const auto nr = node_ratios(p);
  const std::size_t N = nr.r.size();
  const bool is_grid = p.grid() != nullptr;
  // Resolved band: noise in the ratio below kResolvedRatioNoise.
  std::vector<bool> ok(N);
  for (std::size_t i = 0; i < N; ++i) ok[i] = !is_grid || p.accuracy <= kResolvedRatioNoise * phi(nr.x(i));
  std::size_t lo = 0, hi = N;
  while (lo < N && !ok[lo]) ++lo;
  while (hi > lo && !ok[hi - 1]) --hi;
  if (lo >= hi) throw Error(ErrorKind::UncertifiedTail, "no grid node resolves the ratio");

  // Ratio values with the upper limit taken at jump nodes.
  std::vector<double> r(nr.r.begin(), nr.r.end());
  std::vector<bool> jump(N, false);
  if (is_grid) {
    const auto& v = p.grid()->values;
    const double peak = p.grid()->max_value();
    // A cell-averaged jump at node i makes the central difference there about
    // twice its neighbours'; smooth stretches keep neighbouring differences alike.
    auto D = [&](std::size_t j) { return std::abs(v[j + 1] - v[j - 1]); };
    for (std::size_t i = lo + 2; i + 2 < hi; ++i) {
      if (D(i) > 1.5 * std::max(D(i - 1), D(i + 1)) && D(i) > 1e-6 * peak) {
        const double L = 2.0 * v[i - 1] - v[i - 2], R = 2.0 * v[i + 1] - v[i + 2];
        jump[i] = true;
        r[i] = std::max(L, R) / phi(nr.x(i)) - 1.0;
      }
    }
  }
  std::size_t best = lo;
  for (std::size_t i = lo; i < hi; ++i) {
    const double xi = std::abs(nr.x(i)), xb = std::abs(nr.x(best));
    if (r[i] > r[best] || (r[i] == r[best] && (xi < xb || (xi == xb && nr.x(i) > nr.x(best))))) best = i;
  }
  SupResult out{r[best], nr.x(best), TailMethod::GridOnly};
  if (best > lo && best + 1 < hi && !jump[best] && !jump[best - 1] && !jump[best + 1]) {
    const auto [val, x] = parabolic_peak(r[best - 1], r[best], r[best + 1], nr.x(best), nr.dx);
    out.T_inf = val;
    out.argmax_x = x;
  }
  // Beyond the resolved band on each side.
  const double x_lo = nr.x(lo), x_hi = nr.x(hi - 1);
  for (int side : {-1, 1}) {
    const double edge = side > 0 ? x_hi : -x_lo;
    const double b = tail ? tail->sup_beyond(edge, side) : std::numeric_limits<double>::infinity();
    if (b <= out.T_inf) {
      if (b > -1.0) out.tail_method = TailMethod::AnalyticTailBound;
      continue;
    }
    if (tail && std::isfinite(b)) {
      // The bound does not certify; the ratio beyond may exceed the grid maximum.
      throw Error(ErrorKind::UncertifiedTail, "tail bound " + fmt(b) + " exceeds grid maximum " + fmt(out.T_inf) + " beyond |x| = " +
                                                  fmt(edge));
    }
    const std::size_t e = side > 0 ? hi - 1 : lo;
    const std::size_t in = side > 0 ? e - 1 : e + 1;
    if (hi - lo >= 2 && r[e] > r[in])
      throw Error(ErrorKind::UncertifiedTail, "ratio still increasing at the resolved edge x = " + fmt(nr.x(e)));
  }
  return out;
}

SupResult t_inf(const conv::SumDensity& p, const TailBound* tail) {
  auto out = raw_t_inf(p, tail);
  const double eps = mass_defect(p);
  out.T_inf = (out.T_inf - eps) / (1.0 + eps);
  return out;
}

double d_inf(const conv::SumDensity& p, const TailBound* tail) { return std::log1p(t_inf(p, tail).T_inf); }

std::vector<double> tsallis_ladder(const conv::SumDensity& p, const std::vector<double>& alphas) {
  auto s = scaled_tsallis(p, alphas);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] /= (alphas[k] - 1.0);
  return s;
}

double tsallis(const conv::SumDensity& p, double alpha) { return tsallis_ladder(p, {alpha})[0]; }

double renyi(const conv::SumDensity& p, double alpha) {
  const double s = scaled_tsallis(p, {alpha})[0];
  return std::log1p(s) / (alpha - 1.0);
}

double chi_square(const conv::SumDensity& p) {
  const double eps = mass_defect(p);
  if (const auto* d = p.deviation(); d && d->as<dist::SpectralForm>()) {
    // Normalized deviation (r - eps) / (1 + eps); eps = int r phi.
    const double I = spectral_integrals(*d->as<dist::SpectralForm>(), {[](double r, double x) { return r * r * phi(x); }}, 2.0)[0];
    return (I - eps * eps) / ((1.0 + eps) * (1.0 + eps));
  }
  const auto nr = node_ratios(p);
  const double m = 1.0 + eps;
  std::vector<double> v(nr.r.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double ph = phi(nr.x(i));
    double pv = 0.0;
    if (std::isfinite(nr.log_pa[i])) pv = (p.grid() ? p.grid()->values[i] : (1.0 + nr.r[i]) * ph) / m;
    v[i] = ph > 0 ? (pv - ph) * (pv - ph) / ph : (pv > 0 ? std::numeric_limits<double>::infinity() : 0.0);
  }
  const double s = trapezoid(v, nr.dx);
  if (!std::isfinite(s)) throw Error(ErrorKind::DivergentIntegral, "chi-square integral diverges on the grid");
  return s + gauss_outside(nr.x(0), nr.x(nr.r.size() - 1));
}

double kl(const conv::SumDensity& p) {
  // int p log(p/phi) for the stored p, then normalization: (1/m) I - log m.
  double I = 0.0;
  if (const auto* d = p.deviation(); d && d->as<dist::SpectralForm>()) {
    const auto& f = *d->as<dist::SpectralForm>();
    I = spectral_integrals(f, {[](double r, double x) { return entropy_excess(r) * phi(x); }}, 1.0)[0] +
        SpectralSampler(f, 1.0).normalization();
  } else {
    const auto nr = node_ratios(p);
    std::vector<double> v(nr.r.size()), rphi(nr.r.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = entropy_excess(nr.r[i]) * phi(nr.x(i));
      rphi[i] = nr.r[i] * phi(nr.x(i));
    }
    I = trapezoid(v, nr.dx) + trapezoid(rphi, nr.dx);
  }
  const double eps = mass_defect(p);
  return I / (1.0 + eps) - std::log1p(eps);
}

std::size_t clipped_nodes(const conv::SumDensity& p) {
  if (const auto* d = p.deviation(); d && d->as<dist::SpectralForm>()) return 0;
  return node_ratios(p).clipped;
}

DivergenceReport divergence_report(const conv::SumDensity& p, const std::vector<double>& alphas, const TailBound* tail) {
  DivergenceReport rep;
  rep.alphas = alphas;
  const auto s = scaled_tsallis(p, alphas);
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    rep.T_alpha.push_back(s[k] / (alphas[k] - 1.0));
    rep.D_alpha.push_back(std::log1p(s[k]) / (alphas[k] - 1.0));
  }
  const auto sup = t_inf(p, tail);
  rep.T_inf = sup.T_inf;
  rep.D_inf = std::log1p(sup.T_inf);
  rep.argmax_x = sup.argmax_x;
  rep.tail_method = sup.tail_method;
  rep.clipped_nodes = clipped_nodes(p);
  return rep;
}

nlohmann::json to_json(const DivergenceReport& r) {
  return {{"alphas", r.alphas},   {"D_alpha", r.D_alpha}, {"T_alpha", r.T_alpha},
          {"D_inf", r.D_inf},     {"T_inf", r.T_inf},     {"argmax_x", r.argmax_x},
          {"tail_method", to_string(r.tail_method)}, {"clipped_nodes", r.clipped_nodes}};
}

std::string to_csv(const DivergenceReport& r) {
  std::ostringstream os;
  os << "alpha,D,T\n";
  for (std::size_t k = 0; k < r.alphas.size(); ++k) os << fmt(r.alphas[k]) << ',' << fmt(r.D_alpha[k]) << ',' << fmt(r.T_alpha[k]) << '\n';
  os << "inf," << fmt(r.D_inf) << ',' << fmt(r.T_inf) << ',' << fmt(r.argmax_x) << '\n';
  return os.str();
}

}  // namespace subgauss::div
