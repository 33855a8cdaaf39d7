#include "subgauss/common.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <cstdio>

namespace subgauss {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::RejectsNonStandardized: return "RejectsNonStandardized";
    case ErrorKind::RejectsInadmissibleC: return "RejectsInadmissibleC";
    case ErrorKind::QuadratureOverflow: return "QuadratureOverflow";
    case ErrorKind::SeriesDivergence: return "SeriesDivergence";
    case ErrorKind::NonfiniteLaplace: return "NonfiniteLaplace";
    case ErrorKind::OverflowAtTilt: return "OverflowAtTilt";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::ZoneViolation: return "ZoneViolation";
    case ErrorKind::PhaseUnwrapFailure: return "PhaseUnwrapFailure";
    case ErrorKind::LiftOverflow: return "LiftOverflow";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::DivergentIntegral: return "DivergentIntegral";
    case ErrorKind::UncertifiedTail: return "UncertifiedTail";
    case ErrorKind::RangeTooSmall: return "RangeTooSmall";
    case ErrorKind::AllZeroUpToJ: return "AllZeroUpToJ";
    case ErrorKind::IllConditionedFit: return "IllConditionedFit";
    case ErrorKind::MethodUnavailable: return "MethodUnavailable";
    case ErrorKind::SeparationNotEstablished: return "SeparationNotEstablished";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

cplx log1p(cplx z) noexcept {
  const double x = z.real();
  const double y = z.imag();
  // |1+z|^2 = 1 + (2x + x^2 + y^2)
  const double re = 0.5 * std::log1p(x * (2.0 + x) + y * y);
  return {re, std::atan2(y, 1.0 + x)};
}

cplx expm1(cplx z) noexcept {
  const double a = z.real();
  const double b = z.imag();
  if (a == -INFINITY) return {-1.0, 0.0};
  const double s = std::sin(0.5 * b);
  const double re = std::expm1(a) * std::cos(b) - 2.0 * s * s;
  return {re, std::exp(a) * std::sin(b)};
}

namespace {

template <class T>
T pairwise(const T* p, std::size_t n) noexcept {
  if (n <= 8) {
    T s{};
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise(p, h) + pairwise(p + h, n - h);
}

}  // namespace

double pairwise_sum(std::span<const double> v) noexcept { return pairwise(v.data(), v.size()); }
cplx pairwise_sum(std::span<const cplx> v) noexcept { return pairwise(v.data(), v.size()); }

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  std::span<const double> y) {
  const auto rows = static_cast<Eigen::Index>(y.size());
  const auto cols = static_cast<Eigen::Index>(columns.size());
  if (cols == 0 || rows < cols)
    throw Error(ErrorKind::IllConditionedFit, "fewer observations than regressors");
  Eigen::MatrixXd X(rows, cols);
  Eigen::VectorXd Y(rows);
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (columns[static_cast<std::size_t>(j)].size() != y.size())
      throw Error(ErrorKind::InvalidArgument, "regressor length mismatch");
    // Column scaling keeps the rank test meaningful for mixed magnitudes.
    double norm = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) norm += std::pow(columns[j][i], 2);
    norm = std::sqrt(norm);
    if (norm == 0.0) throw Error(ErrorKind::IllConditionedFit, "zero regressor column");
    for (Eigen::Index i = 0; i < rows; ++i) X(i, j) = columns[j][i] / norm;
  }
  for (Eigen::Index i = 0; i < rows; ++i) Y(i) = y[static_cast<std::size_t>(i)];
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < cols) throw Error(ErrorKind::IllConditionedFit, "regressors are collinear");
  const Eigen::VectorXd beta = qr.solve(Y);
  std::vector<double> out(static_cast<std::size_t>(cols));
  for (Eigen::Index j = 0; j < cols; ++j) {
    double norm = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) norm += std::pow(columns[j][i], 2);
    out[static_cast<std::size_t>(j)] = beta(j) / std::sqrt(norm);
  }
  return out;
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string linalg_version() {
  return "Eigen " + std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION);
}

}  // namespace subgauss
