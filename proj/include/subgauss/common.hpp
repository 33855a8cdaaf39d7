#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace subgauss {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kSqrt3 = std::numbers::sqrt3;
inline constexpr double kSqrt2Pi = 2.5066282746310002;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274;

enum class ErrorKind {
  InvalidArgument,
  RejectsNonStandardized,
  RejectsInadmissibleC,
  QuadratureOverflow,
  SeriesDivergence,
  NonfiniteLaplace,
  OverflowAtTilt,
  OutOfRange,
  ZoneViolation,
  PhaseUnwrapFailure,
  LiftOverflow,
  GridTooCoarse,
  DivergentIntegral,
  UncertifiedTail,
  RangeTooSmall,
  AllZeroUpToJ,
  IllConditionedFit,
  MethodUnavailable,
  SeparationNotEstablished,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Standard normal density and its logarithm.
inline double phi(double x) noexcept { return std::exp(-0.5 * x * x) / kSqrt2Pi; }
inline double log_phi(double x) noexcept { return -0.5 * x * x - kLogSqrt2Pi; }

// log(1+z) and exp(z)-1 for complex z, accurate when the result is small.
cplx log1p(cplx z) noexcept;
cplx expm1(cplx z) noexcept;

// Fixed-order pairwise summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> v) noexcept;
cplx pairwise_sum(std::span<const cplx> v) noexcept;

std::vector<double> linspace(double lo, double hi, std::size_t count);

// Least squares by column-pivoted QR. Returns coefficients; throws
// IllConditionedFit when the design has rank below its column count.
std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  std::span<const double> y);

// Version string of the linear-algebra backend used by least_squares.
std::string linalg_version();

// 64-bit FNV-1a digest as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

// Round-trip (%.17g) decimal representation used in every CSV number.
std::string fmt(double v);

}  // namespace subgauss
