#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "subgauss/div.hpp"

using namespace subgauss;
using Catch::Approx;

namespace {

const dist::DistributionSpec kUniform{dist::Uniform{}};
const conv::OutputGrid kGrid{0.005, 2400};

dist::DistributionSpec sin4(double c = 2e-3) { return dist::build_trig_gaussian(dist::TrigPoly::sin4(), c).spec; }

}  // namespace

TEST_CASE("uniform T_inf is attained at the support edge") {
  const auto p = conv::density_zn(kUniform, 1, kGrid);
  const auto tb = div::make_tail_bound(kUniform, 1);
  const auto s = div::t_inf(p, &tb);
  const double exact = std::sqrt(2 * oracle::kPi) * std::exp(1.5) / (2 * std::sqrt(3.0)) - 1.0;
  CHECK(s.T_inf == Approx(exact).epsilon(1e-6));
  CHECK(std::abs(std::abs(s.argmax_x) - std::sqrt(3.0)) < 0.01);
  CHECK(div::d_inf(p, &tb) == Approx(std::log1p(exact)).epsilon(1e-6));
}

TEST_CASE("uniform KL and chi-square against closed forms") {
  const auto p = conv::density_zn(kUniform, 1, kGrid);
  const double s3 = std::sqrt(3.0);
  const double kl = -std::log(2 * s3) + 0.5 * std::log(2 * oracle::kPi) + 0.5;
  const double chi2 =
      oracle::simpson([](double x) { return std::exp(0.5 * x * x); }, -s3, s3, 4000) * std::sqrt(2 * oracle::kPi) / 12.0 - 1.0;
  // Jumps at the support edge cost O(dx) on a grid.
  CHECK(div::kl(p) == Approx(kl).margin(1e-3));
  CHECK(div::chi_square(p) == Approx(chi2).margin(1e-3));
  CHECK(div::tsallis(p, 2.0) == Approx(div::chi_square(p)).margin(1e-8));
}

TEST_CASE("sin4 chi-square by direct quadrature") {
  const auto spec = sin4();
  const auto b = dist::build_trig_gaussian(dist::TrigPoly::sin4(), 2e-3);
  const auto p = conv::density_zn(spec, 1, kGrid);
  const double ref = oracle::simpson(
      [&](double x) {
        const double r = b.deviation.eval(x);
        return r * r * oracle::phi(x);
      },
      -14, 14, 28000);
  CHECK(div::chi_square(p) == Approx(ref).epsilon(1e-8));
  CHECK(div::tsallis(p, 2.0) == Approx(ref).epsilon(1e-8));
}

TEST_CASE("divergence identities on built-in specs") {
  const std::vector<dist::DistributionSpec> specs{kUniform, dist::DistributionSpec(dist::WeightedUniformSum{{0.8, 0.6}}),
                                                  sin4(),
                                                  dist::build_trig_gaussian(dist::TrigPoly::notched_sin4(), 1e-14).spec};
  for (const auto& s : specs) {
    for (int n : {1, 2, 4}) {
      INFO(s.kind() << " n = " << n);
      const auto tb = div::make_tail_bound(s, n);
      const auto p = conv::density_zn(s, n, conv::OutputGrid{0.005, static_cast<long>(div::certified_half_width(tb) / 0.005)});
      const auto rep = div::divergence_report(p, div::kDefaultAlphas, &tb);
      for (std::size_t i = 1; i < rep.D_alpha.size(); ++i) CHECK(rep.D_alpha[i] >= rep.D_alpha[i - 1] - 1e-9);
      CHECK(rep.D_alpha.back() <= rep.D_inf + 1e-9);
      CHECK(rep.T_inf == Approx(std::expm1(rep.D_inf)).epsilon(1e-10));
      CHECK(div::tsallis(p, 2.0) == Approx(div::chi_square(p)).margin(1e-8));
    }
  }
}

TEST_CASE("Renyi divergence near alpha = 1 approaches KL") {
  const auto p = conv::density_zn(sin4(), 2, kGrid);
  const double kl = div::kl(p);
  CHECK(div::renyi(p, 1.0 + 1e-7) == Approx(kl).margin(1e-6));
  // dD/dalpha at 1 is half the variance of log(p/phi) under p.
  const auto P = oracle::sin4();
  double m1 = 0, m2 = 0;
  for (int pass = 0; pass < 2; ++pass) {
    const double v = oracle::simpson(
        [&](double x) {
          const double r = oracle::trig_sum_deviation(P, 2e-3, 2, x);
          return (1 + r) * oracle::phi(x) * std::pow(std::log1p(r), pass + 1);
        },
        -14, 14, 14000);
    (pass ? m2 : m1) = v;
  }
  CHECK(kl == Approx(m1).epsilon(1e-8));
  const double eps = 1e-3;
  const double slope = (div::renyi(p, 1 + eps) - div::renyi(p, 1 - eps)) / (2 * eps);
  CHECK(slope == Approx(0.5 * (m2 - m1 * m1)).epsilon(1e-4));
}

TEST_CASE("Tsallis and Renyi are linked by log1p") {
  const auto p = conv::density_zn(sin4(), 4, kGrid);
  for (double a : {0.5, 2.0, 8.0}) CHECK(div::renyi(p, a) == Approx(std::log1p((a - 1) * div::tsallis(p, a)) / (a - 1)).epsilon(1e-10));
}

TEST_CASE("a grid that stops short of the certified tail is rejected") {
  const auto p = conv::density_zn(kUniform, 4, conv::OutputGrid{0.01, 200});
  const auto tb = div::make_tail_bound(kUniform, 4);
  // The grid stops at |x| = 2; beyond it the bound alone cannot rule out a larger ratio.
  try {
    div::t_inf(p, &tb);
    FAIL("short grid accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UncertifiedTail);
  }
}

TEST_CASE("tail bound widths and cutoff") {
  const auto tb = div::make_tail_bound(kUniform, 16);
  CHECK(tb.c1 == Approx(std::sqrt(2 * oracle::kPi) * std::exp(1.5) / (2 * std::sqrt(3.0))).epsilon(1e-6));
  CHECK(tb.sup_beyond(4.0 * std::sqrt(3.0) + 0.1, 1) == -1.0);
  const double w = div::certified_half_width(tb);
  CHECK(w == Approx(4.0 * std::sqrt(3.0) + 1.0));  // capped one unit past the support
  CHECK(tb.sup_beyond(w, 1) <= 0.0);
  CHECK(tb.sup_beyond(w, -1) <= 0.0);
}

TEST_CASE("divergence CSV layout") {
  const auto p = conv::density_zn(sin4(), 2, kGrid);
  const auto csv = div::to_csv(div::divergence_report(p, {0.5, 2.0}));
  CHECK(csv.substr(0, csv.find('\n')) == "alpha,D,T");
  CHECK(csv.find("\ninf,") != std::string::npos);
}

TEST_CASE("random admissible c: T_inf and chi-square scale with c") {
  const auto [cmin, cmax] = dist::admissible_c_range(dist::TrigPoly::sin4());
  const double u = GENERATE(take(6, random(0.05, 1.0)));
  const double c = u * cmax;
  const auto p = conv::density_zn(sin4(c), 1, kGrid);
  const auto b = dist::build_trig_gaussian(dist::TrigPoly::sin4(), c);
  double sup = -1.0;
  for (double x = -6; x <= 6; x += 1e-3) sup = std::max(sup, b.deviation.eval(x));
  const auto s = div::t_inf(p);
  CHECK(s.T_inf >= sup - 1e-12);
  CHECK(s.T_inf == Approx(sup).epsilon(1e-5));
  CHECK(div::tsallis(p, 2.0) >= 0.0);
}
