#include <algorithm>
#include <map>

#include "subgauss/conv.hpp"
#include "subgauss/fft.hpp"
#include "subgauss/special.hpp"

namespace subgauss::conv {

namespace {

constexpr double kTrigTailReach = 40.0;        // p_n below phi(40)-scale beyond this
constexpr double kMaxGridCfWork = 2e9;         // grid-spec CF evaluations (points x nodes)
constexpr std::size_t kMaxTailTerms = 20000;   // exponential terms in the sinc tail expansion

// log f(t) for a trig law: log Psi(it) - t^2/2, stable when cosh overflows.
cplx trig_log_cf(const dist::TrigGaussian& law, double t) {
  const auto& P = law.poly;
  const double kmax = P.max_frequency();
  // Psi(it) = 1 - c(a0 + sum a_k cosh kt + i b_k sinh kt), scaled by e^{-kmax|t|}.
  const double s = kmax * std::abs(t);
  const double e = s > 600.0 ? std::exp(-s) : 1.0;
  const double shift = s > 600.0 ? s : 0.0;
  auto scaled_cosh = [&](double kt) { return shift > 0 ? 0.5 * (std::exp(kt - shift) + std::exp(-kt - shift)) : std::cosh(kt); };
  auto scaled_sinh = [&](double kt) { return shift > 0 ? 0.5 * (std::exp(kt - shift) - std::exp(-kt - shift)) : std::sinh(kt); };
  cplx p = law.c * P.a0() * e;
  for (const auto& c : P.cos_terms()) p += law.c * c.coef * scaled_cosh(c.k * t);
  for (const auto& c : P.sin_terms()) p += cplx(0.0, law.c * c.coef * scaled_sinh(c.k * t));
  const cplx psi_scaled = e - p;
  return std::log(psi_scaled) + shift - 0.5 * t * t;
}

double sinc(double z) { return z == 0.0 ? 1.0 : std::sin(z) / z; }

std::vector<double> sinc_scales(const dist::DistributionSpec& spec) {
  if (const auto* u = spec.as<dist::Uniform>()) return {u->halfwidth};
  std::vector<double> b;
  for (double w : spec.as<dist::WeightedUniformSum>()->weights)
    if (w != 0.0) b.push_back(kSqrt3 * std::abs(w));
  return b;
}

// f_n(t) = prod_i sin(b_i t)^n / (B t^N) with prod sin^n = sum_m c_m e^{i nu_m t}.
struct SincTail {
  int N = 0;
  double B = 1.0;
  std::vector<double> nu;
  std::vector<cplx> coef;
};

SincTail sinc_tail(const std::vector<double>& scales, int n) {
  SincTail tail;
  tail.N = n * static_cast<int>(scales.size());
  std::map<double, cplx> acc{{0.0, 1.0}};
  for (double b : scales) {
    tail.B *= std::pow(b, n);
    // sin^n(bt) = (2i)^{-n} sum_j C(n,j) (-1)^{n-j} e^{i(2j-n)bt}
    const cplx pref = std::pow(cplx(0.0, 2.0), -n);
    std::map<double, cplx> next;
    double binom = 1.0;
    for (int j = 0; j <= n; ++j) {
      const double sgn = ((n - j) % 2 == 0) ? 1.0 : -1.0;
      const double freq = (2.0 * j - n) * b;
      for (const auto& [f0, c0] : acc) next[f0 + freq] += c0 * pref * (sgn * binom);
      binom = binom * (n - j) / (j + 1);
    }
    if (next.size() > kMaxTailTerms) return {};
    acc = std::move(next);
  }
  for (const auto& [f, c] : acc) {
    tail.nu.push_back(f);
    tail.coef.push_back(c);
  }
  return tail;
}

// m-th derivative of e^{ist} t^{-N} at t.
cplx osc_power_deriv(double s, int N, double t, int m) {
  cplx sum = 0.0;
  double binom = 1.0;  // C(m, j)
  double falling = 1.0;  // (-N)(-N-1)...(-N-j+1)
  for (int j = 0; j <= m; ++j) {
    sum += binom * std::pow(cplx(0.0, s), m - j) * falling * std::pow(t, -N - j);
    binom = binom * (m - j) / (j + 1);
    falling *= (-N - j);
  }
  return sum * std::exp(cplx(0.0, s * t));
}

// Correction added to the truncated trapezoid sum (already divided by 2 pi):
// the integrals beyond |t| = T plus Euler-Maclaurin end terms through dt^6.
double sinc_tail_correction(const SincTail& tail, double x, double T, double dt) {
  constexpr double kEM[3] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0};  // B_{2k} / (2k)!
  const int N = tail.N;
  const double T1N = std::pow(T, 1 - N);
  cplx sum = 0.0;
  for (std::size_t m = 0; m < tail.nu.size(); ++m) {
    const double s = tail.nu[m] - x;
    const cplx c = tail.coef[m] / tail.B;
    const cplx right = T1N * special::expint_en(N, cplx(0.0, -s * T));
    const cplx left = (N % 2 == 0 ? 1.0 : -1.0) * T1N * special::expint_en(N, cplx(0.0, s * T));
    cplx em = 0.0;
    double h = dt;
    for (int k = 0; k < 3; ++k, h *= dt * dt) {
      const int order = 2 * k + 1;
      em += kEM[k] * h * dt * (osc_power_deriv(s, N, T, order) - osc_power_deriv(s, N, -T, order));
    }
    sum += c * (right + left - em);
  }
  return sum.real() / (2.0 * kPi);
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::Spectral: return "spectral";
    case Method::CfInversion: return "cf";
    case Method::GridConv: return "gridconv";
    case Method::Tilted: return "tilted";
  }
  return "unknown";
}

cplx cf(const dist::DistributionSpec& spec, double t) {
  if (const auto* law = spec.as<dist::TrigGaussian>()) return std::exp(trig_log_cf(*law, t));
  if (spec.as<dist::Uniform>() || spec.as<dist::WeightedUniformSum>()) {
    double f = 1.0;
    for (double b : sinc_scales(spec)) f *= sinc(b * t);
    return f;
  }
  const auto& g = spec.as<dist::GridLaw>()->density;
  std::vector<cplx> terms(g.values.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double w = (i == 0 || i + 1 == terms.size()) ? 0.5 : 1.0;
    terms[i] = w * g.values[i] * g.dx * std::polar(1.0, t * g.x(i));
  }
  return pairwise_sum(terms);
}

SumDensity density_zn_cf(const dist::DistributionSpec& spec, int n, const OutputGrid& grid) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  const bool trig = spec.as<dist::TrigGaussian>() != nullptr;
  const bool sinc_law = spec.as<dist::Uniform>() || spec.as<dist::WeightedUniformSum>();
  const double rn = std::sqrt(static_cast<double>(n));
  if (n == 1 && !trig) throw Error(ErrorKind::MethodUnavailable, "characteristic function not integrable for n = 1");
  // Period of the discrete inversion must exceed the output reach plus the density reach.
  const double reach = trig ? kTrigTailReach : spec.support_halfwidth() * rn;
  const double x_out = grid.x_max();
  // Sinc laws take twice the minimal period so the tail expansion's
  // Euler-Maclaurin series converges quickly (|nu - x| dt <= pi).
  const double span = sinc_law ? 2.0 * (x_out + reach) + 1.0 : x_out + reach + 1.0;
  const std::size_t M = fft::next_pow2(std::max<std::size_t>(static_cast<std::size_t>(2 * grid.half_count + 2),
                                                             static_cast<std::size_t>(std::ceil(span / grid.dx))));
  const double dt = 2.0 * kPi / (static_cast<double>(M) * grid.dx);
  const double T = 0.5 * static_cast<double>(M) * dt;  // = pi / dx
  if (!trig && !sinc_law &&
      static_cast<double>(M) * static_cast<double>(spec.as<dist::GridLaw>()->density.values.size()) > 2.0 * kMaxGridCfWork)
    throw Error(ErrorKind::MethodUnavailable, "grid characteristic function too costly at this resolution");

  auto fn = [&](double t) -> cplx {
    const double u = t / rn;
    if (trig) return std::exp(static_cast<double>(n) * trig_log_cf(*spec.as<dist::TrigGaussian>(), u));
    if (sinc_law) {
      double f = 1.0;
      for (double b : sinc_scales(spec)) f *= sinc(b * u);
      return std::pow(f, n);
    }
    const cplx f = cf(spec, u);
    return std::exp(static_cast<double>(n) * std::log(f));
  };

  std::vector<cplx> g(M);
  double abs_sum = 0.0;
  for (std::size_t k = 0; k <= M / 2; ++k) {
    const double t = static_cast<double>(k) * dt;
    const cplx v = fn(t);
    abs_sum += (k == 0 ? 1.0 : 2.0) * std::abs(v);
    if (k == M / 2) {
      g[k] = v.real();  // (f(T) + f(-T)) / 2, halved end weight on both sides
    } else {
      g[k] = v;
      if (k > 0) g[M - k] = std::conj(v);
    }
  }
  const auto P = fft::forward(g);
  dist::GridDensity out{-x_out, grid.dx, std::vector<double>(static_cast<std::size_t>(2 * grid.half_count + 1))};
  const double scale = dt / (2.0 * kPi);
  for (long j = -grid.half_count; j <= grid.half_count; ++j) {
    const auto idx = static_cast<std::size_t>((j % static_cast<long>(M) + static_cast<long>(M)) % static_cast<long>(M));
    out.values[static_cast<std::size_t>(j + grid.half_count)] = P[idx].real() * scale;
  }
  double tail_bound = 0.0;
  if (sinc_law) {
    const auto tail = sinc_tail(sinc_scales(spec), n);
    // Scale of the neglected tail: int_T^inf t^{-N} / B, with B including 1/sqrt(n) factors.
    std::vector<double> b;
    for (double v : sinc_scales(spec)) b.push_back(v / rn);
    const int N = n * static_cast<int>(b.size());
    double B = 1.0;
    for (double v : b) B *= std::pow(v, n);
    tail_bound = std::pow(T, 1 - N) / ((N - 1) * B * kPi);
    if (!tail.nu.empty() && tail_bound > 1e-18) {
      SincTail scaled = tail;
      for (double& v : scaled.nu) v /= rn;
      scaled.B = B;
      for (long j = -grid.half_count; j <= grid.half_count; ++j)
        out.values[static_cast<std::size_t>(j + grid.half_count)] += sinc_tail_correction(scaled, grid.x(j), T, dt);
      // First omitted Euler-Maclaurin term, B_8/8! dt^8 |g^(7)|.
      double nu_max = 0.0;
      for (double v : scaled.nu) nu_max = std::max(nu_max, std::abs(v));
      tail_bound = std::pow(dt, 8) * std::pow(nu_max + x_out + N / T, 7) * std::pow(T, -N) / (1209600.0 * B * kPi);
    }
  }
  SumDensity s;
  s.n = n;
  s.method = Method::CfInversion;
  s.payload = std::move(out);
  s.accuracy = 4e-16 * abs_sum * scale * std::log2(static_cast<double>(M)) + tail_bound;
  return s;
}

}  // namespace subgauss::conv
