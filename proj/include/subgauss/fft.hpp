#pragma once

#include <span>
#include <vector>

#include "subgauss/common.hpp"

namespace subgauss::fft {

// Unnormalized DFT: out[k] = sum_j in[j] * exp(sign * 2*pi*i*j*k/N), sign = -1 forward.
std::vector<cplx> forward(std::span<const cplx> in);
std::vector<cplx> backward(std::span<const cplx> in);

// Linear convolution of two real sequences (length a+b-1).
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

std::size_t next_pow2(std::size_t n) noexcept;

// Version string of the FFT backend.
const char* backend_version() noexcept;

}  // namespace subgauss::fft
