#include "subgauss/conv.hpp"

namespace subgauss::conv {

namespace {

constexpr int kContourMinPower = 8;  // sinc-type decay t^{-N} needs N this large for the contour route

int summands(const dist::DistributionSpec& spec) {
  if (const auto* w = spec.as<dist::WeightedUniformSum>()) {
    int k = 0;
    for (double v : w->weights) k += v != 0.0;
    return k;
  }
  return 1;
}

}  // namespace

SumDensity density_zn(const dist::DistributionSpec& spec, int n, const OutputGrid& grid) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  if (spec.as<dist::TrigGaussian>()) return density_zn_spectral(spec, n);
  if (spec.as<dist::GridLaw>()) {
    const auto& g = spec.as<dist::GridLaw>()->density;
    if (n == 1 || (n <= 64 && (n & (n - 1)) == 0)) return density_zn_gridconv(g, n);
    return density_zn_cf(spec, n, grid);
  }
  if (n == 1) {
    SumDensity s;
    s.n = 1;
    s.method = Method::GridConv;
    s.payload = dist::density_grid(spec);
    return s;
  }
  if (n * summands(spec) >= kContourMinPower) return deviation_zn_tilted(spec, n, grid);
  return density_zn_cf(spec, n, grid);
}

}  // namespace subgauss::conv
