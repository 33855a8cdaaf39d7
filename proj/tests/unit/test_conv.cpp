#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "subgauss/conv.hpp"

using namespace subgauss;
using Catch::Approx;

namespace {

const dist::DistributionSpec kUniform{dist::Uniform{}};
const conv::OutputGrid kGrid{0.01, 600};

}  // namespace

TEST_CASE("CF inversion reproduces the triangle law at n = 2") {
  const auto p = conv::density_zn_cf(kUniform, 2, kGrid);
  for (long j = -kGrid.half_count; j <= kGrid.half_count; ++j) {
    const double x = kGrid.x(j);
    CHECK(p.density(x) == Approx(std::max(0.0, (std::sqrt(6.0) - std::abs(x)) / 6.0)).margin(1e-10));
  }
}

TEST_CASE("uniform sums match the Irwin-Hall density") {
  const int n = GENERATE(3, 4, 8, 16);
  const auto p = conv::density_zn(kUniform, n, kGrid);
  double worst = 0.0;
  for (long j = -kGrid.half_count; j <= kGrid.half_count; j += 7) {
    const double x = kGrid.x(j);
    worst = std::max(worst, std::abs(p.density(x) - oracle::irwin_hall_zn(n, x)));
  }
  INFO("n = " << n << " method " << conv::to_string(p.method));
  CHECK(worst < 1e-10);
}

TEST_CASE("contour deviation matches Irwin-Hall in the far tail") {
  // Relative accuracy of r where p itself is tiny.
  for (double x : {3.0, 5.0, 6.5}) {
    const double exact = oracle::irwin_hall_zn(16, x) / oracle::phi(x) - 1.0;
    CHECK(conv::deviation_at(kUniform, 16, x).r == Approx(exact).margin(1e-10));
  }
}

TEST_CASE("spectral route matches the expanded power of 1 - cP") {
  const double c = 2e-3;
  const auto spec = dist::build_trig_gaussian(dist::TrigPoly::sin4(), c).spec;
  const auto P = oracle::sin4();
  for (int n : {2, 4, 7}) {
    const auto s = conv::density_zn_spectral(spec, n);
    for (double x : {0.0, 0.5, 1.3, 2.9, 4.0}) CHECK(s.ratio_minus_one(x) == Approx(oracle::trig_sum_deviation(P, c, n, x)).margin(1e-14));
  }
}

TEST_CASE("spectral route at tiny c keeps relative accuracy") {
  const double c = 1e-14;
  const auto spec = dist::build_trig_gaussian(dist::TrigPoly::notched_sin4(), c).spec;
  const auto P = oracle::notched_sin4();
  const auto s = conv::density_zn_spectral(spec, 4);
  for (double x : {0.0, 0.7, 1.9}) {
    const double ref = oracle::trig_sum_deviation(P, c, 4, x);
    CHECK(s.ratio_minus_one(x) == Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("routes agree pairwise on the sin4 law") {
  const auto spec = dist::build_trig_gaussian(dist::TrigPoly::sin4(), 2e-3).spec;
  for (int n : {2, 4, 8}) {
    const auto a = conv::density_zn_cf(spec, n, kGrid);
    const auto b = conv::density_zn_spectral(spec, n);
    const auto t = conv::deviation_zn_tilted(spec, n, kGrid);
    double d1 = 0, d2 = 0;
    for (long j = -kGrid.half_count; j <= kGrid.half_count; ++j) {
      const double x = kGrid.x(j);
      d1 = std::max(d1, std::abs(a.density(x) - b.density(x)));
      d2 = std::max(d2, std::abs(t.density(x) - b.density(x)));
    }
    CHECK(d1 < 1e-12);
    CHECK(d2 < 1e-12);
  }
}

TEST_CASE("grid convolution agrees with CF inversion on grid nodes") {
  const auto g = dist::density_grid(kUniform);
  const auto gc = conv::density_zn_gridconv(g, 4);
  const auto cf = conv::density_zn_cf(kUniform, 4, kGrid);
  const auto* grid = gc.grid();
  REQUIRE(grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid->n_points(); ++i) {
    const double x = grid->x(i);
    if (std::abs(x) <= 5.0) worst = std::max(worst, std::abs(grid->values[i] - oracle::irwin_hall_zn(4, x)));
  }
  CHECK(worst < 1e-6);
  CHECK(cf.density(0.5) == Approx(oracle::irwin_hall_zn(4, 0.5)).margin(1e-10));
}

TEST_CASE("summed densities integrate to one") {
  const std::vector<dist::DistributionSpec> specs{kUniform, dist::DistributionSpec(dist::WeightedUniformSum{{0.8, 0.6}}),
                                                  dist::build_trig_gaussian(dist::TrigPoly::sin4(), 2e-3).spec};
  const conv::OutputGrid wide{0.01, 1200};
  for (const auto& s : specs) {
    for (int n : {1, 2, 4, 16}) {
      const auto p = conv::density_zn(s, n, wide);
      // Tabulated laws carry jumps, so they use their own trapezoid rule.
      const double I = p.grid() ? p.grid()->integral()
                                : oracle::simpson([&](double x) { return p.density(x); }, -12.0, 12.0, 2400);
      INFO(s.kind() << " n = " << n);
      CHECK(I == Approx(1.0).margin(1e-8));
    }
  }
}

TEST_CASE("route errors") {
  try {
    conv::density_zn_spectral(kUniform, 2);
    FAIL("spectral route accepted a uniform law");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MethodUnavailable);
  }
  CHECK_THROWS_AS(conv::density_zn(kUniform, 0, kGrid), Error);
}

TEST_CASE("density CSV header") {
  const auto p = conv::density_zn(kUniform, 2, conv::OutputGrid{0.5, 2});
  const auto csv = conv::sum_density_csv(p, conv::OutputGrid{0.5, 2});
  CHECK(csv.substr(0, csv.find('\n')) == "x,p,phi,ratio_minus_1");
  const auto s = conv::density_zn_spectral(dist::build_trig_gaussian(dist::TrigPoly::sin4(), 2e-3).spec, 2);
  const auto coef = conv::spectral_coefficients_csv(*s.deviation()->as<dist::SpectralForm>());
  CHECK(coef.substr(0, coef.find('\n')) == "k,freq,re,im");
}
