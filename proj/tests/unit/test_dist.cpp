#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "subgauss/dist.hpp"

using namespace subgauss;
using namespace subgauss::dist;
using Catch::Approx;

TEST_CASE("sin4 admissible range matches the lift minimum") {
  // The lift of sin^4 is most negative at x = pi/2: 3/8 + e^2/2 + e^8/8.
  const auto [cmin, cmax] = admissible_c_range(TrigPoly::sin4());
  CHECK(cmax == Approx(8.0 / (3 + 4 * std::exp(2.0) + std::exp(8.0))).epsilon(1e-12));
  CHECK(cmin < 0.0);
}

TEST_CASE("trig construction rejects inadmissible and non-standardized input") {
  const auto [cmin, cmax] = admissible_c_range(TrigPoly::sin4());
  CHECK_THROWS_AS(build_trig_gaussian(TrigPoly::sin4(), 1.01 * cmax), Error);
  try {
    build_trig_gaussian(TrigPoly::sin4(), 1.01 * cmax);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RejectsInadmissibleC);
  }
  // cos t alone has P''(0) = -1.
  const TrigPoly bad(0.0, {{1, 1.0}}, {});
  try {
    build_trig_gaussian(bad, 1e-3);
    FAIL("accepted a non-standardized polynomial");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RejectsNonStandardized);
  }
}

TEST_CASE("trig deviation agrees with the hand-expanded lift") {
  const double c = 2e-3;
  const auto b = build_trig_gaussian(TrigPoly::sin4(), c);
  const auto P = oracle::sin4();
  for (double x : {-3.0, -1.1, 0.0, 0.4, 0.784, 2.5}) {
    double r = -c * P.a[0];
    for (std::size_t k = 1; k < P.a.size(); ++k) r -= c * std::exp(0.5 * k * k) * P.a[k] * std::cos(k * x);
    CHECK(b.deviation.eval(x) == Approx(r).margin(1e-14));
  }
}

TEST_CASE("Laplace identity of the trig construction") {
  const auto b = build_trig_gaussian(TrigPoly::sin4(), 2e-3);
  const std::vector<double> ts{-2.0, -0.5, 0.0, 0.3, 1.0, 2.5};
  CHECK(verify_laplace_identity(*b.spec.as<TrigGaussian>(), ts) < 1e-10);
}

TEST_CASE("trig density integrates to one and is nonnegative at the admissible edge") {
  const auto [cmin, cmax] = admissible_c_range(TrigPoly::sin4());
  const auto b = build_trig_gaussian(TrigPoly::sin4(), cmax);
  const double I = oracle::simpson([&](double x) { return b.deviation.density(x); }, -12, 12, 24000);
  CHECK(I == Approx(1.0).margin(1e-10));
  for (double x = -6; x <= 6; x += 0.01) CHECK(b.deviation.density(x) >= -1e-15);
}

TEST_CASE("uniform cumulants follow the Bernoulli formula") {
  // kappa_{2k} = B_{2k} (2a)^{2k} / (2k) with a = sqrt 3.
  const auto rep = moments_and_cumulants(DistributionSpec(Uniform{}), 8);
  CHECK(rep.gamma[2] == Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(rep.gamma[3]) < 1e-12);
  CHECK(rep.gamma[4] == Approx(-1.0 / 30 * 144 / 4).epsilon(1e-10));
  CHECK(rep.gamma[6] == Approx(1.0 / 42 * 1728 / 6).epsilon(1e-9));
  CHECK(rep.gamma[8] == Approx(-1.0 / 30 * 20736 / 8).epsilon(1e-8));
  REQUIRE(rep.first_nonzero);
  CHECK(rep.first_nonzero->first == 4);
  CHECK(rep.first_nonzero->second == Approx(-1.2).epsilon(1e-10));
}

TEST_CASE("weighted uniform sums scale the fourth cumulant by sum w^4") {
  const std::vector<double> w{0.8, 0.6};
  const auto rep = moments_and_cumulants(DistributionSpec(WeightedUniformSum{w}), 6);
  CHECK(rep.gamma[4] == Approx(-1.2 * (std::pow(0.8, 4) + std::pow(0.6, 4))).epsilon(1e-9));
}

TEST_CASE("trig fourth cumulant is -24c for sin4") {
  const double c = 2e-3;
  const auto rep = moments_and_cumulants(build_trig_gaussian(TrigPoly::sin4(), c).spec, 6);
  CHECK(rep.gamma[4] == Approx(-24 * c).epsilon(1e-9));
}

TEST_CASE("cumulants of the normal moment sequence vanish past order two") {
  const auto k = cumulants_from_moments({1, 0, 1, 0, 3, 0, 15, 0, 105});
  CHECK(k[2] == Approx(1.0));
  for (int j = 3; j <= 8; ++j) CHECK(std::abs(k[j]) < 1e-12);
}

TEST_CASE("log1p series of u = x") {
  const auto s = series_log1p({0.0, 1.0}, 6);
  for (int k = 1; k <= 6; ++k) CHECK(s[k] == Approx((k % 2 ? 1.0 : -1.0) / k));
}

TEST_CASE("spec JSON round trip and strict keys") {
  const std::vector<DistributionSpec> specs{DistributionSpec(Uniform{}), DistributionSpec(WeightedUniformSum{{0.8, 0.6}}),
                                            build_trig_gaussian(TrigPoly::sin4(), 2e-3).spec,
                                            build_trig_gaussian(TrigPoly::notched_sin4(), 1e-14).spec};
  for (const auto& s : specs) {
    const auto back = DistributionSpec::from_json(s.to_json());
    CHECK(back == s);
    CHECK(back.id() == s.id());
  }
  try {
    DistributionSpec::from_json({{"kind", "uniform"}, {"width", 1.0}});
    FAIL("unknown field accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
  }
  try {
    DistributionSpec::from_json({{"kind", "wsum"}, {"weights", {0.5, 0.5}}});
    FAIL("non-unit weights accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RejectsNonStandardized);
  }
}

TEST_CASE("uniform grid density is standardized") {
  const auto g = density_grid(DistributionSpec(Uniform{}));
  CHECK(g.integral() == Approx(1.0).margin(1e-12));
  CHECK(std::abs(g.moment(1)) < 1e-12);
  CHECK(g.moment(2) == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("random admissible c keeps the sin4 density nonnegative") {
  const auto [cmin, cmax] = admissible_c_range(TrigPoly::sin4());
  const double u = GENERATE(take(12, random(0.0, 1.0)));
  const auto b = build_trig_gaussian(TrigPoly::sin4(), u * cmax);
  for (double x = -8; x <= 8; x += 0.05) CHECK(b.deviation.density(x) >= 0.0);
}
