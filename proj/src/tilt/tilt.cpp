#include "subgauss/tilt.hpp"

#include <algorithm>
#include <sstream>

#include "subgauss/special.hpp"

namespace subgauss::tilt {

using dist::GridDensity;

namespace {

double hermite(double t0, double t1, double f0, double f1, double d0, double d1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * f0 + h10 * h * d0 + h01 * f1 + h11 * h * d1;
}

double lagrange4(const std::vector<double>& x, const std::vector<double>& y, std::size_t lo, double t) {
  double s = 0.0;
  for (std::size_t i = lo; i < lo + 4; ++i) {
    double w = 1.0;
    for (std::size_t j = lo; j < lo + 4; ++j)
      if (j != i) w *= (t - x[j]) / (x[i] - x[j]);
    s += w * y[i];
  }
  return s;
}

ProfileRow trig_point(const dist::TrigGaussian& law, double t) {
  const double c = law.c;
  const double P = law.poly.eval(t), P1 = law.poly.eval(t, 1), P2 = law.poly.eval(t, 2);
  const double psi = 1.0 - c * P;
  if (!(psi > 0.0)) throw Error(ErrorKind::NonfiniteLaplace, "Psi(t) <= 0 at t = " + fmt(t));
  const double g1 = c * P1 / psi;
  ProfileRow r;
  r.t = t;
  r.A = -std::log1p(-c * P);
  r.A1 = g1;
  r.A2 = c * P2 / psi + g1 * g1;
  r.K = 0.5 * t * t - r.A;
  r.K1 = t - r.A1;
  r.K2 = 1.0 - r.A2;
  return r;
}

// Sum of scaled uniforms with half-widths a_i: A = t^2 (1 - sum a_i^2/3)/2 + sum gap(a_i t).
ProfileRow uniform_point(const std::vector<double>& halfwidths, double t) {
  ProfileRow r;
  r.t = t;
  double var = 0.0;
  for (double a : halfwidths) {
    const double z = a * t;
    r.K += special::log_sinhc(z);
    r.K1 += a * special::log_sinhc_d1(z);
    r.K2 += a * a * special::log_sinhc_d2(z);
    r.A += special::gap(z);
    r.A1 += a * special::gap_d1(z);
    r.A2 += a * a * special::gap_d2(z);
    var += a * a / 3.0;
  }
  const double rest = 1.0 - var;  // zero for standardized laws
  r.A += 0.5 * rest * t * t;
  r.A1 += rest * t;
  r.A2 += rest;
  return r;
}

ProfileRow grid_point(const GridDensity& g, double t) {
  const double extent = std::max(std::abs(g.x0), std::abs(g.x_max()));
  if (std::abs(t) * extent > 700.0)
    throw Error(ErrorKind::NonfiniteLaplace, "e^{tx} leaves the exponent range at t = " + fmt(t));
  const std::size_t n = g.values.size();
  double m = -INFINITY;
  for (std::size_t i = 0; i < n; ++i)
    if (g.values[i] != 0.0) m = std::max(m, t * g.x(i));
  std::vector<double> w(n), wx(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double end = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    w[i] = g.values[i] == 0.0 ? 0.0 : end * g.values[i] * std::exp(t * g.x(i) - m);
    wx[i] = w[i] * g.x(i);
  }
  const double S0 = pairwise_sum(w);
  if (!(S0 > 0.0) || !std::isfinite(S0)) throw Error(ErrorKind::NonfiniteLaplace, "Laplace quadrature failed at t = " + fmt(t));
  const double mean = pairwise_sum(wx) / S0;
  for (std::size_t i = 0; i < n; ++i) wx[i] = w[i] * (g.x(i) - mean) * (g.x(i) - mean);
  ProfileRow r;
  r.t = t;
  r.K = m + std::log(S0 * g.dx);
  r.K1 = mean;
  r.K2 = pairwise_sum(wx) / S0;
  r.A = 0.5 * t * t - r.K;
  r.A1 = t - r.K1;
  r.A2 = 1.0 - r.K2;
  return r;
}

}  // namespace

ProfileRow LogLaplaceProfile::interpolate(double h) const {
  if (!covers(h)) throw Error(ErrorKind::OutOfRange, "h = " + fmt(h) + " outside the profile range");
  const std::size_t n = t.size();
  if (n == 1) return row(0);
  auto it = std::upper_bound(t.begin(), t.end(), h);
  std::size_t i = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
  if (i + 1 >= n) i = n - 2;
  ProfileRow r;
  r.t = h;
  r.K = hermite(t[i], t[i + 1], K[i], K[i + 1], K1[i], K1[i + 1], h);
  r.K1 = hermite(t[i], t[i + 1], K1[i], K1[i + 1], K2[i], K2[i + 1], h);
  r.A = hermite(t[i], t[i + 1], A[i], A[i + 1], A1[i], A1[i + 1], h);
  r.A1 = hermite(t[i], t[i + 1], A1[i], A1[i + 1], A2[i], A2[i + 1], h);
  if (n >= 4) {
    const std::size_t lo = std::min(i > 0 ? i - 1 : 0, n - 4);
    r.K2 = lagrange4(t, K2, lo, h);
    r.A2 = lagrange4(t, A2, lo, h);
  } else {
    const double s = (h - t[i]) / (t[i + 1] - t[i]);
    r.K2 = K2[i] + s * (K2[i + 1] - K2[i]);
    r.A2 = A2[i] + s * (A2[i + 1] - A2[i]);
  }
  return r;
}

ProfileRow profile_point(const dist::DistributionSpec& spec, double t) {
  if (const auto* tg = spec.as<dist::TrigGaussian>()) return trig_point(*tg, t);
  if (const auto* u = spec.as<dist::Uniform>()) return uniform_point({u->halfwidth}, t);
  if (const auto* w = spec.as<dist::WeightedUniformSum>()) {
    std::vector<double> hw;
    for (double v : w->weights) hw.push_back(kSqrt3 * std::abs(v));
    return uniform_point(hw, t);
  }
  return grid_point(spec.as<dist::GridLaw>()->density, t);
}

LogLaplaceProfile profile(const dist::DistributionSpec& spec, std::span<const double> t_grid) {
  LogLaplaceProfile p;
  p.source_id = spec.id();
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw Error(ErrorKind::InvalidArgument, "profile t grid must increase");
  for (double t : t_grid) {
    const auto r = profile_point(spec, t);
    p.t.push_back(r.t);
    p.K.push_back(r.K);
    p.K1.push_back(r.K1);
    p.K2.push_back(r.K2);
    p.A.push_back(r.A);
    p.A1.push_back(r.A1);
    p.A2.push_back(r.A2);
  }
  return p;
}

std::vector<double> uniform_t_grid(double lo, double hi, double step) {
  if (!(hi > lo) || !(step > 0)) throw Error(ErrorKind::InvalidArgument, "bad t grid");
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
  return linspace(lo, hi, n + 1);
}

std::string profile_csv(const LogLaplaceProfile& p) {
  std::ostringstream os;
  os << "t,K,K1,K2,A,A1,A2\n";
  for (std::size_t i = 0; i < p.size(); ++i)
    os << fmt(p.t[i]) << ',' << fmt(p.K[i]) << ',' << fmt(p.K1[i]) << ',' << fmt(p.K2[i]) << ',' << fmt(p.A[i])
       << ',' << fmt(p.A1[i]) << ',' << fmt(p.A2[i]) << '\n';
  return os.str();
}

ProfileCheck check_profile(const LogLaplaceProfile& p) {
  ProfileCheck c;
  c.min_K2 = INFINITY;
  c.max_A2 = -INFINITY;
  c.max_slope_excess = -INFINITY;
  c.min_A = INFINITY;
  for (std::size_t i = 0; i < p.size(); ++i) {
    c.min_K2 = std::min(c.min_K2, p.K2[i]);
    c.max_A2 = std::max(c.max_A2, p.A2[i]);
    c.max_slope_excess = std::max(c.max_slope_excess, p.A1[i] * p.A1[i] - 2.0 * p.A[i]);
    c.min_A = std::min(c.min_A, p.A[i]);
  }
  c.strictly_subgaussian = c.min_A >= -1e-10;
  c.ok = c.min_K2 > 0.0 && c.max_A2 <= 1.0 + 1e-10 && (!c.strictly_subgaussian || c.max_slope_excess <= 1e-9);
  return c;
}

GridDensity esscher(const GridDensity& p, double h) {
  const double extent = std::max(std::abs(p.x0), std::abs(p.x_max()));
  if (std::abs(h) * extent > 700.0)
    throw Error(ErrorKind::OverflowAtTilt, "|h| * x_max = " + fmt(std::abs(h) * extent) + " exceeds 700");
  GridDensity q = p;
  double m = -INFINITY;
  for (std::size_t i = 0; i < p.values.size(); ++i) m = std::max(m, h * p.x(i));
  for (std::size_t i = 0; i < p.values.size(); ++i) q.values[i] = p.values[i] * std::exp(h * p.x(i) - m);
  const double L = q.integral();
  if (!(L > 0.0)) throw Error(ErrorKind::OverflowAtTilt, "tilted mass vanished at h = " + fmt(h));
  for (double& v : q.values) v /= L;
  return q;
}

GridDensity rescale(const GridDensity& p, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "rescale needs lambda > 0");
  GridDensity q{p.x0 * lambda, p.dx * lambda, p.values};
  for (double& v : q.values) v /= lambda;
  return q;
}

double max_density(const GridDensity& p) {
  const auto it = std::max_element(p.values.begin(), p.values.end());
  const auto i = static_cast<std::size_t>(it - p.values.begin());
  if (i == 0 || i + 1 == p.values.size()) return *it;
  const auto& v = p.values;
  // A parabola through a jump node overshoots; keep the node value there. A jump
  // node's central difference is about twice its neighbours'.
  auto D = [&](std::size_t j) { return std::abs(v[j + 1] - v[j - 1]); };
  for (std::size_t j : {i - 1, i + 1})
    if (j >= 2 && j + 2 < v.size() && D(j) > 1.5 * std::max(D(j - 1), D(j + 1))) return *it;
  const double a = v[i - 1], b = v[i], c = v[i + 1];
  const double denom = a - 2 * b + c;
  if (denom >= 0.0) return b;
  return b - 0.125 * (c - a) * (c - a) / denom;
}

ShiftedMoments shifted_moments(const LogLaplaceProfile& p, double h) {
  const auto r = p.interpolate(h);
  if (!(r.K2 > 0.0)) throw Error(ErrorKind::OutOfRange, "K'' not positive at h = " + fmt(h));
  ShiftedMoments s;
  s.h = h;
  s.m_h = r.K1;
  s.sigma_h = std::sqrt(r.K2);
  s.v_h = r.A1 / s.sigma_h;
  s.A_h = r.A;
  return s;
}

double sigma_lower_bound_check(const LogLaplaceProfile& p, double c_const, std::span<const double> h_samples) {
  if (!(c_const >= 1.0)) throw Error(ErrorKind::InvalidArgument, "c must be >= 1");
  const double k = std::sqrt(kPi / (6.0 * c_const * c_const));
  double worst = INFINITY;
  for (double h : h_samples) {
    const auto s = shifted_moments(p, h);
    worst = std::min(worst, s.sigma_h - k * std::exp(-s.A_h));
  }
  return worst;
}

double tilted_mgf_check(const dist::DistributionSpec& spec, double h, int n, double a) {
  if (!(a > 0.0) || n < 2) throw Error(ErrorKind::InvalidArgument, "need a > 0 and n >= 2");
  if (static_cast<double>(n) < 4.0 * a + 1.0)
    throw Error(ErrorKind::ZoneViolation, "n = " + std::to_string(n) + " is below 4a + 1");
  const auto row = profile_point(spec, h);
  if (row.A > a / (n - 1))
    throw Error(ErrorKind::ZoneViolation, "A(h) = " + fmt(row.A) + " exceeds a/(n-1) = " + fmt(a / (n - 1)));
  const auto q = esscher(dist::density_grid(spec), h);
  const double m = q.moment(1);
  GridDensity f = q;
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] *= std::exp(0.5 * std::abs(q.x(i) - m));
  return f.integral();
}

}  // namespace subgauss::tilt
