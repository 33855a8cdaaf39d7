#include <algorithm>
#include <sstream>

#include "subgauss/conv.hpp"

namespace subgauss::conv {

SumDensity density_zn_gridconv(const dist::GridDensity& p, int n) {
  if (n < 1 || n > 64 || (n & (n - 1)) != 0)
    throw Error(ErrorKind::InvalidArgument, "grid convolution needs n a power of two <= 64");
  const double peak = p.max_value();
  const double edge = std::max(std::abs(p.values.front()), std::abs(p.values.back()));
  if (edge > 1e-12 * peak)
    throw Error(ErrorKind::GridTooCoarse, "density has mass at the grid edge (value " + fmt(edge) + ")");
  dist::GridDensity s = p;
  double accuracy = 0.0;
  for (int m = 1; m < n; m *= 2) {
    s = dist::convolve(s, s);
    // FFT rounding: a few ulps of the largest value per doubling.
    accuracy = 2.0 * accuracy + 1e-15 * s.max_value() * std::log2(static_cast<double>(s.values.size()));
  }
  const double rn = std::sqrt(static_cast<double>(n));
  for (double& v : s.values) v *= rn;
  s.x0 /= rn;
  s.dx /= rn;
  SumDensity out;
  out.n = n;
  out.method = Method::GridConv;
  out.accuracy = accuracy * rn;
  out.payload = std::move(s);
  return out;
}

double SumDensity::density(double x) const {
  if (const auto* d = deviation()) return d->density(x);
  return grid()->at(x);
}

double SumDensity::ratio_minus_one(double x) const {
  if (const auto* d = deviation()) return d->eval(x);
  return grid()->at(x) / phi(x) - 1.0;
}

std::string sum_density_csv(const SumDensity& s, const OutputGrid& grid) {
  std::ostringstream os;
  os << "x,p,phi,ratio_minus_1\n";
  for (long j = -grid.half_count; j <= grid.half_count; ++j) {
    const double x = grid.x(j);
    os << fmt(x) << ',' << fmt(s.density(x)) << ',' << fmt(phi(x)) << ',' << fmt(s.ratio_minus_one(x)) << '\n';
  }
  return os.str();
}

std::string spectral_coefficients_csv(const dist::SpectralForm& f) {
  std::ostringstream os;
  os << "k,freq,re,im\n";
  const int K = f.max_harmonic();
  for (int k = -K; k <= K; ++k) {
    const cplx c = f.coef(k);
    os << k << ',' << fmt(k * f.base_freq) << ',' << fmt(c.real()) << ',' << fmt(c.imag()) << '\n';
  }
  return os.str();
}

}  // namespace subgauss::conv
