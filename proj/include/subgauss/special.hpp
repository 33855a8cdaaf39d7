#pragma once

#include "subgauss/common.hpp"

namespace subgauss::special {

// Slack of the uniform log-Laplace transform in the scaled variable z = a*t:
//   gap(z) = z^2/6 - log(sinh z / z),
// so that a variance-1 uniform on (-sqrt3, sqrt3) has A(t) = gap(sqrt3 * t).
// Small |z| uses the Bernoulli series, avoiding cancellation.
double gap(double z) noexcept;
double gap_d1(double z) noexcept;
double gap_d2(double z) noexcept;
cplx gap(cplx z) noexcept;

// log(sinh z / z) for real z (used for K itself).
double log_sinhc(double z) noexcept;
double log_sinhc_d1(double z) noexcept;  // coth z - 1/z
double log_sinhc_d2(double z) noexcept;  // 1/z^2 - 1/sinh^2 z

// Generalized exponential integral E_N(z) = int_1^inf e^{-zu} u^{-N} du,
// N >= 1 and Re z >= 0 (z != 0 when N == 1).
cplx expint_en(int N, cplx z);

}  // namespace subgauss::special
