#pragma once

#include <vector>

#include "subgauss/conv.hpp"

namespace subgauss::conv::detail {

// Trapezoid evaluation of r_n(x) = int phi(u) expm1(-n A((x+iu)/sqrt n)) du.
//
// Trig laws: the integrand is a finite sum of Gaussians in u centred at the
// lattice frequencies, so a fixed step of 1/2 gives relative error e^{-2pi^2/dt^2}.
// Uniform-type laws: the integrand is a Fourier transform of a function with
// support width |x| + W sqrt(n), so a step below 2pi over that width is exact
// apart from the subtracted Gaussian, whose alias is kept below e^{-40}.
class Contour {
 public:
  Contour(const dist::DistributionSpec& spec, int n);
  PointDeviation eval(double x) const;

 private:
  PointDeviation eval_trig(double x) const;
  PointDeviation eval_sinc(double x) const;

  int n_;
  double sqrt_n_;
  bool trig_ = false;
  // Trig data: fixed nodes u_l = l*dt with per-term cosh/sinh tables.
  dist::TrigGaussian law_;
  double dt_ = 0.5;
  std::vector<double> u_, phi_u_;
  std::vector<std::vector<double>> ch_, sh_;  // [term][node], cos terms then sin terms
  // Sinc data.
  std::vector<double> halfwidths_;
  double var_rest_ = 0.0;
  double support_ = 0.0;
};

}  // namespace subgauss::conv::detail
