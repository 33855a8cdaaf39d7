#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "subgauss/common.hpp"

namespace subgauss::dist {

struct TrigTerm {
  int k = 0;
  double coef = 0.0;
  bool operator==(const TrigTerm&) const = default;
};

// P(t) = a0 + sum a_k cos(kt) + sum b_k sin(kt), integer frequencies.
class TrigPoly {
 public:
  TrigPoly() = default;
  TrigPoly(double a0, std::vector<TrigTerm> cos_terms, std::vector<TrigTerm> sin_terms);

  static TrigPoly sin4();          // (3 - 4cos2t + cos4t)/8
  static TrigPoly notched_sin4();  // (1 - 4 sin^2 t)^2 sin^4 t
  // Cosine/sine expansion of a 2pi-periodic function by DFT; coefficients
  // below drop_tol * max|coef| are discarded.
  static TrigPoly from_function(const std::function<double(double)>& f, int max_freq,
                                double drop_tol = 1e-13);

  double a0() const noexcept { return a0_; }
  const std::vector<TrigTerm>& cos_terms() const noexcept { return cos_; }
  const std::vector<TrigTerm>& sin_terms() const noexcept { return sin_; }

  int frequency_gcd() const noexcept { return gcd_; }
  int max_frequency() const noexcept;
  double period() const noexcept { return 2.0 * kPi / gcd_; }
  bool is_even() const noexcept { return sin_.empty(); }

  // Derivative of the given order (0..4 and beyond) at real or complex t.
  double eval(double t, int order = 0) const noexcept;
  cplx eval(cplx t) const noexcept;
  // Gaussian lift: a0 + sum e^{k^2/2}(a_k cos kx + b_k sin kx) and derivatives.
  double lifted(double x, int order = 0) const noexcept;
  // Bound on |P(u + iv)|: |a0| + sum (|a_k| + |b_k|) cosh(kv).
  double abs_bound(double v) const noexcept;
  // Taylor coefficients of P at 0 up to t^order.
  std::vector<double> taylor(int order) const;

  bool operator==(const TrigPoly&) const = default;

 private:
  double a0_ = 0.0;
  std::vector<TrigTerm> cos_;
  std::vector<TrigTerm> sin_;
  int gcd_ = 1;
};

// Uniform grid density with nodes x0 + i*dx.
struct GridDensity {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<double> values;

  std::size_t n_points() const noexcept { return values.size(); }
  double x(std::size_t i) const noexcept { return x0 + static_cast<double>(i) * dx; }
  double x_max() const noexcept { return x(values.size() - 1); }
  double integral() const;  // trapezoid
  double moment(int k) const;
  double max_value() const noexcept;
  // Linear interpolation; zero outside the grid.
  double at(double x) const noexcept;
  bool operator==(const GridDensity&) const = default;
};

// Throws RejectsNonStandardized / InvalidArgument when invariants fail.
void validate(const GridDensity& g, bool standardized);

struct TrigGaussian {
  TrigPoly poly;
  double c = 0.0;
  bool operator==(const TrigGaussian&) const = default;
};
struct Uniform {
  double halfwidth = kSqrt3;
  bool operator==(const Uniform&) const = default;
};
struct WeightedUniformSum {
  std::vector<double> weights;
  bool operator==(const WeightedUniformSum&) const = default;
};
struct GridLaw {
  GridDensity density;
  bool operator==(const GridLaw&) const = default;
};

class DistributionSpec {
 public:
  using Law = std::variant<TrigGaussian, Uniform, WeightedUniformSum, GridLaw>;

  DistributionSpec() : law_(Uniform{}) {}
  explicit DistributionSpec(Law law) : law_(std::move(law)) {}

  const Law& law() const noexcept { return law_; }
  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&law_);
  }
  std::string kind() const;
  std::string id() const;
  bool is_normal() const noexcept;
  bool is_symmetric() const noexcept;
  // Half-width of the support; infinity for trig laws.
  double support_halfwidth() const noexcept;

  nlohmann::json to_json() const;
  static DistributionSpec from_json(const nlohmann::json& j);
  bool operator==(const DistributionSpec&) const = default;

 private:
  Law law_;
};

// Deviation r(x) = q(x) - 1 of a density p = (1 + r) phi.
struct SpectralForm {
  double base_freq = 1.0;           // omega; harmonic j has frequency j*omega
  std::vector<cplx> coeffs;         // index j + K for j in [-K, K]
  int max_harmonic() const noexcept { return static_cast<int>(coeffs.size() / 2); }
  cplx coef(int j) const noexcept { return coeffs[static_cast<std::size_t>(j + max_harmonic())]; }
  double period() const noexcept { return 2.0 * kPi / base_freq; }
  double eval(double x, int order = 0) const noexcept;
};

struct GridForm {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<double> values;
  double x(std::size_t i) const noexcept { return x0 + static_cast<double>(i) * dx; }
  double x_max() const noexcept { return x(values.size() - 1); }
  // Linear interpolation; throws OutOfRange outside the grid.
  double eval(double x) const;
};

class GaussDeviation {
 public:
  using Form = std::variant<SpectralForm, GridForm>;
  GaussDeviation() : form_(SpectralForm{1.0, {cplx{0.0}}}) {}
  explicit GaussDeviation(Form f) : form_(std::move(f)) {}
  const Form& form() const noexcept { return form_; }
  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&form_);
  }
  double eval(double x) const;
  double density(double x) const { return (1.0 + eval(x)) * phi(x); }

 private:
  Form form_;
};

struct TrigGaussianBuild {
  DistributionSpec spec;
  GaussDeviation deviation;
  double c_max = 0.0;  // largest admissible c (infinity if the lift never goes positive)
  double c_min = 0.0;  // smallest admissible c (-infinity if the lift never goes negative)
};

// Admissible interval [c_min, c_max] making 1 + r >= 0.
std::pair<double, double> admissible_c_range(const TrigPoly& P);
TrigGaussianBuild build_trig_gaussian(const TrigPoly& P, double c);
GaussDeviation trig_deviation(const TrigGaussian& law);

// max over t of |int e^{tx}(1+r)phi dx - (1 - cP(t)) e^{t^2/2}| / e^{t^2/2}.
double verify_laplace_identity(const TrigGaussian& law, std::span<const double> t_samples);

inline constexpr double kDefaultHalfRange = 12.0;
inline constexpr std::size_t kDefaultPoints = std::size_t{1} << 14;
inline constexpr double kDefaultDx = 2.0 * kDefaultHalfRange / static_cast<double>(kDefaultPoints);

// Cell-averaged uniform density on a grid with nodes at +-a.
GridDensity uniform_density(double a, double dx = kDefaultDx, double half_range = kDefaultHalfRange);
// Density of sum w_i U_i (U_i standardized uniform) by iterated grid convolution.
GridDensity weighted_uniform_sum(std::vector<double> weights, double dx = kDefaultDx,
                                 double half_range = kDefaultHalfRange);
// Tabulated density of any spec (trig laws sampled from (1+r)phi).
GridDensity density_grid(const DistributionSpec& spec, double dx = kDefaultDx,
                         double half_range = kDefaultHalfRange);

// Linear convolution of two grid densities sharing dx.
GridDensity convolve(const GridDensity& a, const GridDensity& b);

// log(1 + u) for a power series u with u(0) = 0, truncated at the given order.
std::vector<double> series_log1p(const std::vector<double>& u, int order);

struct CumulantReport {
  std::vector<double> gamma;  // gamma[j] for j = 0..J (gamma[1] mean, gamma[2] variance)
  double beta3 = 0.0;
  double max_density = 0.0;
  std::vector<double> zero_tol;  // |gamma[j]| <= zero_tol[j] counts as zero
  std::optional<std::pair<int, double>> first_nonzero;
  int J() const noexcept { return static_cast<int>(gamma.size()) - 1; }
};

inline constexpr double kCumulantZeroTol = 1e-12;

CumulantReport moments_and_cumulants(const DistributionSpec& spec, int J = 8);
// Cumulants from raw moments mu[0..J] (mu[0] = 1).
std::vector<double> cumulants_from_moments(const std::vector<double>& mu);

}  // namespace subgauss::dist
