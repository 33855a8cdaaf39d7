#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "subgauss/diag.hpp"

using namespace subgauss;
using Catch::Approx;

namespace {

const dist::DistributionSpec kUniform{dist::Uniform{}};

bool contains_near(const std::vector<double>& v, double t, double tol) {
  return std::any_of(v.begin(), v.end(), [&](double x) { return std::abs(x - t) < tol; });
}

// P(t) = (1 - 4 sin^2 t)^2 sin^4 t in long double.
long double notched(long double t) {
  const long double s = std::sin(t);
  return (1 - 4 * s * s) * (1 - 4 * s * s) * s * s * s * s;
}

}  // namespace

TEST_CASE("sin4 law: zeros at 0 and pi, CLT predicted") {
  const auto spec = dist::build_trig_gaussian(dist::TrigPoly::sin4(), 2e-3).spec;
  const auto r = diag::diagnose(spec);
  CHECK(r.strict.strictly_subgaussian);
  CHECK(contains_near(r.strict.zero_set, 0.0, 1e-6));
  CHECK(contains_near(r.strict.zero_set, oracle::kPi, 1e-6));
  REQUIRE(r.period);
  CHECK(*r.period == Approx(oracle::kPi));
  for (const auto& root : r.periodic_criterion) {
    CHECK(std::abs(root.P2) < 1e-10);  // sin^4 is flat to fourth order at its zeros
    CHECK(root.pass);
  }
  CHECK(r.cond_a_ok);
  CHECK(r.predicted_clt);
  REQUIRE(r.first_nonzero_cumulant);
  CHECK(r.first_nonzero_cumulant->first == 4);
  CHECK(r.first_nonzero_cumulant->second == Approx(-24 * 2e-3).epsilon(1e-8));
}

TEST_CASE("notched law: interior root with P'' != 0, no CLT") {
  const double c = 1e-14;
  const auto spec = dist::build_trig_gaussian(dist::TrigPoly::notched_sin4(), c).spec;
  const auto r = diag::diagnose(spec);
  CHECK(r.strict.strictly_subgaussian);
  CHECK_FALSE(r.predicted_clt);
  const double t0 = oracle::kPi / 6;
  const long double h = 1e-3L;
  const double P2 = static_cast<double>((-notched(t0 + 2 * h) + 16 * notched(t0 + h) - 30 * notched(t0) + 16 * notched(t0 - h) -
                                         notched(t0 - 2 * h)) /
                                        (12 * h * h));
  bool seen = false;
  for (const auto& root : r.periodic_criterion) {
    if (std::abs(root.t - t0) < 1e-8) {
      seen = true;
      CHECK(root.P2 == Approx(P2).epsilon(1e-8));
      // 2 Q'(t0)^2 sin^4 t0 with Q = 1 - 4 sin^2 t, Q'(t0) = -2 sqrt 3.
      CHECK(root.P2 == Approx(1.5).epsilon(1e-10));
      CHECK_FALSE(root.pass);
    }
  }
  CHECK(seen);
  const auto roots = diag::periodic_roots(dist::TrigPoly::notched_sin4());
  std::vector<double> ts;
  for (const auto& x : roots) ts.push_back(x.t);
  for (double t : {0.0, oracle::kPi / 6, 5 * oracle::kPi / 6}) CHECK(contains_near(ts, t, 1e-8));
}

TEST_CASE("uniform law: cumulant (4, -1.2) and CLT") {
  const auto r = diag::diagnose(kUniform);
  CHECK(r.strict.strictly_subgaussian);
  CHECK(r.strict.min_A >= 0.0);
  REQUIRE(r.first_nonzero_cumulant);
  CHECK(r.first_nonzero_cumulant->first == 4);
  CHECK(r.first_nonzero_cumulant->second == Approx(-1.2).epsilon(1e-9));
  CHECK(r.cumulant_sign_ok);
  CHECK(r.cond_b == diag::CondB::Vacuous);
  CHECK(r.predicted_clt);
  for (const auto& m : r.separation) CHECK(m.margin > 0.0);
}

TEST_CASE("weighted uniform sum keeps the uniform verdict") {
  const auto r = diag::diagnose(dist::DistributionSpec(dist::WeightedUniformSum{{0.8, 0.6}}));
  CHECK(r.strict.strictly_subgaussian);
  CHECK(r.predicted_clt);
  REQUIRE(r.first_nonzero_cumulant);
  CHECK(r.first_nonzero_cumulant->second == Approx(-1.2 * (std::pow(0.8, 4) + std::pow(0.6, 4))).epsilon(1e-8));
}

TEST_CASE("normal law: every cumulant past order two vanishes") {
  const auto spec = dist::build_trig_gaussian(dist::TrigPoly::sin4(), 0.0).spec;
  const auto r = diag::diagnose(spec);
  CHECK(r.normal);
  CHECK(r.strict.identically_zero);
  CHECK(r.predicted_clt);
  try {
    diag::first_nonzero_cumulant(dist::moments_and_cumulants(spec, 8));
    FAIL("normal cumulants reported a nonzero term");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AllZeroUpToJ);
  }
}

TEST_CASE("critical zone of the sin4 law against the arcsin formula") {
  // A(t) = -log(1 - c sin^4 t) <= L  iff  sin^4 t <= (1 - e^{-L}) / c.
  const double c = 2e-3, a = 1.0;
  const int n = 10001;
  const auto spec = dist::build_trig_gaussian(dist::TrigPoly::sin4(), c).spec;
  const auto A = [&](double t) {
    const double s = std::sin(t);
    return -std::log1p(-c * s * s * s * s);
  };
  const auto z = diag::critical_zone(diag::diagnostic_profile(spec), a, n, A);
  const double L = a / (n - 1);
  const double edge = std::asin(std::pow(-std::expm1(-L) / c, 0.25));
  CHECK(z.level == Approx(L));
  bool left = false, right = false;
  for (const auto& [lo, hi] : z.intervals) {
    if (lo <= 1e-12) {
      left = true;
      CHECK(hi == Approx(edge).epsilon(1e-9));
    }
    if (hi >= oracle::kPi - 1e-12) {
      right = true;
      CHECK(lo == Approx(oracle::kPi - edge).epsilon(1e-9));
    }
  }
  CHECK(left);
  CHECK(right);
}

TEST_CASE("verdict does not depend on the admissible scale c") {
  const auto [cmin, cmax] = dist::admissible_c_range(dist::TrigPoly::sin4());
  const double u = GENERATE(take(5, random(0.01, 1.0)));
  CHECK(diag::diagnose(dist::build_trig_gaussian(dist::TrigPoly::sin4(), u * cmax).spec).predicted_clt);
  const auto [nmin, nmax] = dist::admissible_c_range(dist::TrigPoly::notched_sin4());
  CHECK_FALSE(diag::diagnose(dist::build_trig_gaussian(dist::TrigPoly::notched_sin4(), u * nmax).spec).predicted_clt);
}

TEST_CASE("negative c is not strictly subgaussian") {
  const auto [cmin, cmax] = dist::admissible_c_range(dist::TrigPoly::sin4());
  const auto r = diag::diagnose(dist::build_trig_gaussian(dist::TrigPoly::sin4(), 0.5 * cmin).spec);
  CHECK_FALSE(r.strict.strictly_subgaussian);
  CHECK(r.strict.min_A < 0.0);
  CHECK_FALSE(r.predicted_clt);
}

TEST_CASE("diagnostics JSON keys and verdict table") {
  const auto r = diag::diagnose(kUniform);
  const auto j = diag::to_json(r);
  for (const char* k : {"strictly_subgaussian", "min_A", "A_zero_set", "cond_a", "cond_b", "separation_margins",
                        "periodic_criterion", "first_nonzero_cumulant", "predicted_clt"})
    CHECK(j.contains(k));
  CHECK(diag::verdict_table(r).find("predicted CLT in D_inf  yes") != std::string::npos);
}
