#include "subgauss/special.hpp"

#include <array>

namespace subgauss::special {

namespace {

constexpr int kTerms = 12;
constexpr double kSeriesRadius = 0.5;

// c_k with log(sinh z / z) = sum_{k>=1} c_k z^{2k}; c_k = 4^k B_{2k} / (2k (2k)!).
const std::array<double, kTerms + 1>& coeffs() {
  static const std::array<double, kTerms + 1> c = [] {
    const long double bern[kTerms + 1][2] = {
        {0, 1},           {1, 6},          {-1, 30},          {1, 42},          {-1, 30},
        {5, 66},          {-691, 2730},    {7, 6},            {-3617, 510},     {43867, 798},
        {-174611, 330},   {854513, 138},   {-236364091, 2730}};
    std::array<double, kTerms + 1> out{};
    long double fact = 1.0L;  // (2k)!
    long double pow4 = 1.0L;
    for (int k = 1; k <= kTerms; ++k) {
      fact *= static_cast<long double>((2 * k - 1) * (2 * k));
      pow4 *= 4.0L;
      const long double b = bern[k][0] / bern[k][1];
      out[k] = static_cast<double>(pow4 * b / (2.0L * k * fact));
    }
    return out;
  }();
  return c;
}

// sum_{k>=first} c_k * d(k) * z^{2k - shift}, Horner from the top.
template <class T, class F>
T series(T z, int first, int shift, F weight) {
  const auto& c = coeffs();
  const T z2 = z * z;
  T acc = T(0);
  for (int k = kTerms; k >= first; --k) acc = acc * z2 + T(c[k] * weight(k));
  // acc currently sums c_k w_k z^{2(k-first)}; restore the leading power.
  T lead = T(1);
  for (int i = 0; i < 2 * first - shift; ++i) lead *= z;
  return acc * lead;
}

}  // namespace

double log_sinhc(double z) noexcept {
  const double a = std::abs(z);
  if (a < kSeriesRadius) return series(a, 1, 0, [](int) { return 1.0; });
  if (a < 20.0) return std::log(std::sinh(a) / a);
  return a - std::log(2.0) + std::log1p(-std::exp(-2.0 * a)) - std::log(a);
}

double log_sinhc_d1(double z) noexcept {
  const double a = std::abs(z);
  double v;
  if (a < kSeriesRadius)
    v = series(a, 1, 1, [](int k) { return 2.0 * k; });
  else
    v = 1.0 / std::tanh(a) - 1.0 / a;
  return z < 0 ? -v : v;
}

double log_sinhc_d2(double z) noexcept {
  const double a = std::abs(z);
  if (a < kSeriesRadius) return series(a, 1, 2, [](int k) { return 2.0 * k * (2.0 * k - 1.0); });
  const double s = std::sinh(a);
  return 1.0 / (a * a) - 1.0 / (s * s);
}

double gap(double z) noexcept {
  const double a = std::abs(z);
  if (a < kSeriesRadius) return -series(a, 2, 0, [](int) { return 1.0; });
  return a * a / 6.0 - log_sinhc(a);
}

double gap_d1(double z) noexcept {
  const double a = std::abs(z);
  double v;
  if (a < kSeriesRadius)
    v = -series(a, 2, 1, [](int k) { return 2.0 * k; });
  else
    v = a / 3.0 - log_sinhc_d1(a);
  return z < 0 ? -v : v;
}

double gap_d2(double z) noexcept {
  const double a = std::abs(z);
  if (a < kSeriesRadius) return -series(a, 2, 2, [](int k) { return 2.0 * k * (2.0 * k - 1.0); });
  return 1.0 / 3.0 - log_sinhc_d2(a);
}

cplx gap(cplx z) noexcept {
  if (z.real() < 0) z = -z;  // even function
  if (std::abs(z) < kSeriesRadius) return -series(z, 2, 0, [](int) { return 1.0; });
  cplx lsc;
  if (z.real() < 20.0)
    lsc = std::log(std::sinh(z) / z);
  else
    lsc = z - std::log(2.0) + subgauss::log1p(-std::exp(-2.0 * z)) - std::log(z);
  return z * z / 6.0 - lsc;
}

cplx expint_en(int N, cplx z) {
  constexpr double kEuler = 0.57721566490153286;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIt = 200000;
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "expint order must be >= 1");
  const int nm1 = N - 1;
  if (std::abs(z) == 0.0) {
    if (N == 1) throw Error(ErrorKind::InvalidArgument, "E_1(0) diverges");
    return 1.0 / nm1;
  }
  if (std::abs(z) >= 2.0) {
    // Modified Lentz evaluation of the continued fraction.
    constexpr double kTiny = 1e-300;
    cplx b = z + static_cast<double>(N);
    cplx c = 1.0 / kTiny;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i <= kMaxIt; ++i) {
      const double an = -static_cast<double>(i) * (nm1 + i);
      b += 2.0;
      d = 1.0 / (an * d + b);
      c = b + an / c;
      const cplx del = c * d;
      h *= del;
      if (std::abs(del - 1.0) < kEps) return h * std::exp(-z);
    }
    throw Error(ErrorKind::SeriesDivergence, "E_N continued fraction did not converge");
  }
  cplx ans = nm1 != 0 ? cplx(1.0 / nm1) : -std::log(z) - kEuler;
  cplx fact = 1.0;
  for (int i = 1; i <= kMaxIt; ++i) {
    fact *= -z / static_cast<double>(i);
    cplx del;
    if (i != nm1) {
      del = -fact / static_cast<double>(i - nm1);
    } else {
      double psi = -kEuler;
      for (int ii = 1; ii <= nm1; ++ii) psi += 1.0 / ii;
      del = fact * (-std::log(z) + psi);
    }
    ans += del;
    if (std::abs(del) < std::abs(ans) * kEps) return ans;
  }
  throw Error(ErrorKind::SeriesDivergence, "E_N series did not converge");
}

}  // namespace subgauss::special
