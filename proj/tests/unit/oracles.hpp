#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

inline double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

// Composite Simpson rule on [a, b] with an even number of cells.
inline double simpson(const std::function<double(double)>& f, double a, double b, int cells) {
  if (cells % 2) ++cells;
  const double h = (b - a) / cells;
  double s = f(a) + f(b);
  for (int i = 1; i < cells; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Density of (U_1 + ... + U_n)/sqrt(n), U_i uniform on [-sqrt3, sqrt3], from the
// Irwin-Hall alternating sum in quad precision.
inline double irwin_hall_zn(int n, double x) {
  using Q = __float128;
  const Q a = static_cast<Q>(std::sqrt(3.0L));
  const Q s = static_cast<Q>(static_cast<long double>(x) * std::sqrt(static_cast<long double>(n)));
  Q sum = 0, binom = 1, fact = 1;
  for (int k = 1; k < n; ++k) fact *= k;
  for (int k = 0; k <= n; ++k) {
    const Q u = s + n * a - 2 * a * k;
    if (u > 0) {
      Q pw = 1;
      for (int i = 0; i < n - 1; ++i) pw *= u;
      sum += (k % 2 ? -1 : 1) * binom * pw;
    }
    binom = binom * (n - k) / (k + 1);
  }
  Q scale = 1;
  for (int i = 0; i < n; ++i) scale *= 2 * a;
  const Q dens = sum / (scale * fact);
  return static_cast<double>(dens * static_cast<Q>(std::sqrt(static_cast<long double>(n))));
}

// Trig polynomial as explicit cosine/sine coefficient tables indexed by frequency.
struct Trig {
  std::vector<double> a;  // a[k] cos(kt), a[0] constant
  std::vector<double> b;  // b[k] sin(kt)
  double operator()(double t) const {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * std::cos(k * t);
    for (std::size_t k = 0; k < b.size(); ++k) s += b[k] * std::sin(k * t);
    return s;
  }
};

// sin^4 t = (3 - 4 cos 2t + cos 4t) / 8.
inline Trig sin4() { return {{3.0 / 8, 0, -0.5, 0, 1.0 / 8}, {}}; }

// Fourier coefficients of a trig polynomial of degree <= K by a plain DFT.
inline Trig from_samples(const std::function<double(double)>& f, int K) {
  const int M = 8 * K + 16;
  Trig P{std::vector<double>(K + 1, 0.0), std::vector<double>(K + 1, 0.0)};
  for (int k = 0; k <= K; ++k) {
    double c = 0.0, s = 0.0;
    for (int m = 0; m < M; ++m) {
      const double t = 2.0 * kPi * m / M;
      c += f(t) * std::cos(k * t);
      s += f(t) * std::sin(k * t);
    }
    P.a[k] = (k == 0 ? 1.0 : 2.0) * c / M;
    P.b[k] = 2.0 * s / M;
  }
  return P;
}
inline Trig notched_sin4() {
  return from_samples([](double t) {
    const double s = std::sin(t);
    return (1 - 4 * s * s) * (1 - 4 * s * s) * s * s * s * s;
  }, 8);
}

// Deviation of the density of Z_n whose Laplace transform is
// (1 - c P(t / sqrt n))^n e^{t^2/2}: expand the power as exponential
// coefficients and lift each frequency w by e^{w^2/2}.
inline double trig_sum_deviation(const Trig& P, double c, int n, double x) {
  const int K = static_cast<int>(std::max(P.a.size(), P.b.size())) - 1;
  // 1 - cP as coefficients of e^{ikt}, k in [-K, K].
  std::vector<std::complex<double>> base(2 * K + 1, 0.0);
  base[K] = 1.0 - c * P.a[0];
  for (int k = 1; k <= K; ++k) {
    const double ak = k < static_cast<int>(P.a.size()) ? P.a[k] : 0.0;
    const double bk = k < static_cast<int>(P.b.size()) ? P.b[k] : 0.0;
    base[K + k] += -c * std::complex<double>(ak / 2, -bk / 2);
    base[K - k] += -c * std::complex<double>(ak / 2, bk / 2);
  }
  std::vector<std::complex<double>> pw{1.0};
  for (int i = 0; i < n; ++i) {
    std::vector<std::complex<double>> next(pw.size() + base.size() - 1, 0.0);
    for (std::size_t p = 0; p < pw.size(); ++p)
      for (std::size_t q = 0; q < base.size(); ++q) next[p + q] += pw[p] * base[q];
    pw = next;
  }
  const int J = static_cast<int>(pw.size() / 2);
  pw[J] -= 1.0;
  // e^{i w t} in t maps to e^{w^2/2} e^{i w x} in x.
  double r = 0.0;
  for (int j = -J; j <= J; ++j) {
    const double w = j / std::sqrt(static_cast<double>(n));
    r += (pw[J + j] * std::exp(std::complex<double>(0.5 * w * w, w * x))).real();
  }
  return r;
}

}  // namespace oracle
