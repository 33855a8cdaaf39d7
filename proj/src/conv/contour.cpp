#include "contour.hpp"

#include <algorithm>

#include "subgauss/fft.hpp"
#include "subgauss/special.hpp"

namespace subgauss::conv::detail {

namespace {

constexpr double kTrigTol = 1e-26;
constexpr double kSincTol = 1e-20;
constexpr std::size_t kMaxNodes = 4'000'000;

// expm1(E) * phi(u) without overflow when Re E is large.
inline cplx weighted_expm1(cplx E, double u, double phi_u) {
  if (E.real() < 50.0) return subgauss::expm1(E) * phi_u;
  return std::exp(E - 0.5 * u * u - kLogSqrt2Pi) - phi_u;
}

PointDeviation finish(std::vector<double>& terms, double dt, double max_term) {
  // terms[0] is the u = 0 node; the others stand for +-u pairs (factor 2 applied).
  PointDeviation out;
  out.nodes = terms.size();
  out.r = dt * pairwise_sum(terms);
  out.max_term = max_term;
  return out;
}

}  // namespace

Contour::Contour(const dist::DistributionSpec& spec, int n) : n_(n), sqrt_n_(std::sqrt(static_cast<double>(n))) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  if (const auto* t = spec.as<dist::TrigGaussian>()) {
    trig_ = true;
    law_ = *t;
    const auto& P = law_.poly;
    const double kmax = P.max_frequency();
    double s_tot = std::abs(P.a0());
    for (const auto& c : P.cos_terms()) s_tot += std::abs(c.coef);
    for (const auto& c : P.sin_terms()) s_tot += std::abs(c.coef);
    const double ac = std::abs(law_.c);
    // Node range: beyond U the log-bound plus the largest possible rise stays below tol.
    const double peak = sqrt_n_ * kmax;
    for (std::size_t l = 0;; ++l) {
      const double u = static_cast<double>(l) * dt_;
      u_.push_back(u);
      if (u_.size() > kMaxNodes) throw Error(ErrorKind::MethodUnavailable, "contour node budget exceeded");
      const double y = n * std::log1p(ac * s_tot * std::cosh(kmax * u / sqrt_n_));
      // log expm1(y) without overflow
      const double log_em1 = y > 30 ? y + std::log1p(-std::exp(-y)) : (y > 0 ? std::log(std::expm1(y)) : -INFINITY);
      const double log_b = log_em1 - 0.5 * u * u - kLogSqrt2Pi;
      const double rise = u < peak ? 0.5 * (peak - u) * (peak - u) : 0.0;
      if (l > 0 && (log_b + rise < std::log(kTrigTol) || ac == 0.0)) break;
    }
    for (double u : u_) phi_u_.push_back(phi(u));
    for (const auto* list : {&P.cos_terms(), &P.sin_terms()})
      for (const auto& term : *list) {
        std::vector<double> ch, sh;
        for (double u : u_) {
          ch.push_back(std::cosh(term.k * u / sqrt_n_));
          sh.push_back(std::sinh(term.k * u / sqrt_n_));
        }
        ch_.push_back(std::move(ch));
        sh_.push_back(std::move(sh));
      }
    return;
  }
  if (const auto* u = spec.as<dist::Uniform>()) {
    halfwidths_ = {u->halfwidth};
  } else if (const auto* w = spec.as<dist::WeightedUniformSum>()) {
    for (double v : w->weights)
      if (v != 0.0) halfwidths_.push_back(kSqrt3 * std::abs(v));
  } else {
    throw Error(ErrorKind::MethodUnavailable, "contour route needs an analytic Laplace transform (trig, uniform, wsum)");
  }
  double var = 0.0;
  for (double a : halfwidths_) {
    var += a * a / 3.0;
    support_ += a;
  }
  var_rest_ = 1.0 - var;
}

PointDeviation Contour::eval(double x) const { return trig_ ? eval_trig(x) : eval_sinc(x); }

PointDeviation Contour::eval_trig(double x) const {
  const auto& P = law_.poly;
  const double c = law_.c;
  if (c == 0.0) return {0.0, 0.0, 1};
  const double a = x / sqrt_n_;
  std::vector<double> ca, sa;
  for (const auto* list : {&P.cos_terms(), &P.sin_terms()})
    for (const auto& term : *list) {
      ca.push_back(std::cos(term.k * a));
      sa.push_back(std::sin(term.k * a));
    }
  std::vector<double> terms(u_.size());
  double max_term = 0.0;
  for (std::size_t l = 0; l < u_.size(); ++l) {
    cplx p = P.a0();
    std::size_t i = 0;
    // cos(k(a+ib)) = cos ka cosh kb - i sin ka sinh kb; sin(k(a+ib)) = sin ka cosh kb + i cos ka sinh kb
    for (const auto& term : P.cos_terms()) {
      p += term.coef * cplx(ca[i] * ch_[i][l], -sa[i] * sh_[i][l]);
      ++i;
    }
    for (const auto& term : P.sin_terms()) {
      p += term.coef * cplx(sa[i] * ch_[i][l], ca[i] * sh_[i][l]);
      ++i;
    }
    const cplx E = static_cast<double>(n_) * subgauss::log1p(-c * p);
    const cplx v = weighted_expm1(E, u_[l], phi_u_[l]);
    max_term = std::max(max_term, std::abs(v));
    terms[l] = l == 0 ? v.real() : 2.0 * v.real();
  }
  return finish(terms, dt_, max_term);
}

PointDeviation Contour::eval_sinc(double x) const {
  const double width = std::abs(x) + support_ * sqrt_n_;
  const double dt = 2.0 * kPi / std::max(width + 1.0, 9.0);
  std::vector<double> terms;
  double max_term = 0.0;
  const double log_tol = std::log(kSincTol);
  for (std::size_t l = 0;; ++l) {
    if (l >= kMaxNodes) throw Error(ErrorKind::MethodUnavailable, "contour node budget exceeded");
    const double u = static_cast<double>(l) * dt;
    const cplx s = cplx(x, u) / sqrt_n_;
    cplx A = 0.5 * var_rest_ * s * s;
    double log_env = -0.5 * x * x;
    for (double a : halfwidths_) {
      const cplx z = a * s;
      A += special::gap(z);
      log_env += n_ * (std::log(std::cosh(a * x / sqrt_n_)) - std::log(std::abs(z)));
    }
    const cplx E = -static_cast<double>(n_) * A;
    const cplx v = weighted_expm1(E, u, phi(u));
    max_term = std::max(max_term, std::abs(v));
    terms.push_back(l == 0 ? v.real() : 2.0 * v.real());
    // Decreasing envelope: e^{-x^2/2} prod (cosh Re z / |z|)^n and phi(u).
    const double log_b = std::max(log_env, -0.5 * u * u) - kLogSqrt2Pi;
    if (l > 0 && log_b < log_tol) break;
  }
  return finish(terms, dt, max_term);
}

}  // namespace subgauss::conv::detail

namespace subgauss::conv {

PointDeviation deviation_at(const dist::DistributionSpec& spec, int n, double x) {
  return detail::Contour(spec, n).eval(x);
}

std::vector<double> deviation_at_points(const dist::DistributionSpec& spec, int n, std::span<const double> xs) {
  const detail::Contour contour(spec, n);
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(contour.eval(x).r);
  return out;
}

SumDensity deviation_zn_tilted(const dist::DistributionSpec& spec, int n, const OutputGrid& grid) {
  const detail::Contour contour(spec, n);
  const long H = grid.half_count;
  dist::GridForm form{-grid.x_max(), grid.dx, std::vector<double>(static_cast<std::size_t>(2 * H + 1))};
  const bool sym = spec.is_symmetric();
  double acc = 0.0;
  for (long j = sym ? 0 : -H; j <= H; ++j) {
    const auto pd = contour.eval(grid.x(j));
    form.values[static_cast<std::size_t>(j + H)] = pd.r;
    if (sym) form.values[static_cast<std::size_t>(H - j)] = pd.r;
    acc = std::max(acc, 1e-15 * pd.max_term * std::sqrt(static_cast<double>(pd.nodes)));
  }
  SumDensity out;
  out.n = n;
  out.method = Method::Tilted;
  out.payload = dist::GaussDeviation(std::move(form));
  out.accuracy = acc;
  return out;
}

SumDensity density_zn_spectral(const dist::DistributionSpec& spec, int n) {
  const auto* law = spec.as<dist::TrigGaussian>();
  if (!law) throw Error(ErrorKind::MethodUnavailable, "spectral route needs a trig spec");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  SumDensity out;
  out.n = n;
  out.method = Method::Spectral;
  if (n == 1) {
    out.payload = dist::trig_deviation(*law);
    return out;
  }
  const int g = law->poly.frequency_gcd();
  const long J = static_cast<long>(law->poly.max_frequency() / g) * n;
  const std::size_t M = fft::next_pow2(static_cast<std::size_t>(2 * J + 1));
  const double omega = g / std::sqrt(static_cast<double>(n));
  const double period = 2.0 * kPi / omega;
  const detail::Contour contour(spec, n);
  std::vector<cplx> samples(M);
  double max_term = 0.0, max_r = 0.0;
  std::size_t nodes = 0;
  for (std::size_t m = 0; m < M; ++m) {
    const auto pd = contour.eval(period * static_cast<double>(m) / static_cast<double>(M));
    samples[m] = pd.r;
    max_term = std::max(max_term, pd.max_term);
    max_r = std::max(max_r, std::abs(pd.r));
    nodes = pd.nodes;
  }
  if (max_term > 1e15 * max_r)
    throw Error(ErrorKind::LiftOverflow, "quadrature terms reach " + fmt(max_term) + " against deviation scale " + fmt(max_r));
  const auto F = fft::forward(samples);
  dist::SpectralForm f{omega, std::vector<cplx>(static_cast<std::size_t>(2 * J + 1))};
  const double inv = 1.0 / static_cast<double>(M);
  for (long j = 0; j <= J; ++j) {
    const cplx cp = F[static_cast<std::size_t>(j)] * inv;
    const cplx cm = F[(M - static_cast<std::size_t>(j)) % M] * inv;
    const cplx c = 0.5 * (cp + std::conj(cm));  // exact Hermitian symmetry
    f.coeffs[static_cast<std::size_t>(J + j)] = c;
    f.coeffs[static_cast<std::size_t>(J - j)] = std::conj(c);
  }
  f.coeffs[static_cast<std::size_t>(J)] = f.coeffs[static_cast<std::size_t>(J)].real();
  out.payload = dist::GaussDeviation(std::move(f));
  out.accuracy = 1e-15 * max_term * std::sqrt(static_cast<double>(nodes));
  return out;
}

}  // namespace subgauss::conv
