#pragma once

#include <string>
#include <variant>

#include "subgauss/dist.hpp"

namespace subgauss::conv {

enum class Method { Spectral, CfInversion, GridConv, Tilted };
std::string to_string(Method m);

// Density of Z_n = (X_1 + ... + X_n) / sqrt(n).
struct SumDensity {
  int n = 1;
  Method method = Method::GridConv;
  std::variant<dist::GaussDeviation, dist::GridDensity> payload;
  // Absolute error estimate of the stored values (density for grids, r for deviations).
  double accuracy = 0.0;

  bool has_deviation() const noexcept { return std::holds_alternative<dist::GaussDeviation>(payload); }
  const dist::GaussDeviation* deviation() const noexcept { return std::get_if<dist::GaussDeviation>(&payload); }
  const dist::GridDensity* grid() const noexcept { return std::get_if<dist::GridDensity>(&payload); }
  double density(double x) const;
  double ratio_minus_one(double x) const;
};

// Output nodes j*dx for |j| <= half_count.
struct OutputGrid {
  double dx = 0.01;
  long half_count = 600;
  double x(long j) const noexcept { return static_cast<double>(j) * dx; }
  double x_max() const noexcept { return x(half_count); }
};

cplx cf(const dist::DistributionSpec& spec, double t);

SumDensity density_zn_cf(const dist::DistributionSpec& spec, int n, const OutputGrid& grid);
SumDensity density_zn_spectral(const dist::DistributionSpec& spec, int n);
SumDensity density_zn_gridconv(const dist::GridDensity& p, int n);

// Deviation r_n on the output grid from the Gaussian-contour representation
//   r_n(x) = int phi(u) expm1(-n A((x + iu)/sqrt(n))) du,
// where A is the analytic continuation of t^2/2 - K(t). Trig, uniform and
// weighted-uniform laws only.
SumDensity deviation_zn_tilted(const dist::DistributionSpec& spec, int n, const OutputGrid& grid);

struct PointDeviation {
  double r = 0.0;
  double max_term = 0.0;  // largest quadrature term magnitude (cancellation scale)
  std::size_t nodes = 0;
};
PointDeviation deviation_at(const dist::DistributionSpec& spec, int n, double x);
// r_n at arbitrary points, sharing the quadrature setup.
std::vector<double> deviation_at_points(const dist::DistributionSpec& spec, int n, std::span<const double> xs);

// Preferred route per spec: spectral for trig laws (grid ignored); for uniform
// and weighted-uniform laws the tabulated density at n = 1, the contour route
// once n * (number of summands) >= 8 and CF inversion below that; for grid laws
// grid convolution when n is a power of two <= 64, CF inversion otherwise.
SumDensity density_zn(const dist::DistributionSpec& spec, int n, const OutputGrid& grid);

// CSV: x,p,phi,ratio_minus_1 over the given nodes.
std::string sum_density_csv(const SumDensity& s, const OutputGrid& grid);
// CSV: k,freq,re,im for spectral payloads.
std::string spectral_coefficients_csv(const dist::SpectralForm& f);

}  // namespace subgauss::conv
