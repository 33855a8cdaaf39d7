#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "subgauss/sweep.hpp"

using namespace subgauss;
using Catch::Approx;

namespace {

const dist::DistributionSpec kUniform{dist::Uniform{}};

// The quad Irwin-Hall sum loses accuracy where phi underflows its precision, so
// the scan stops at |x| = 6; the uniform maximum sits well inside.
double ih_t_inf(int n) {
  double sup = -1.0;
  for (double x = -6.0; x <= 6.0; x += 1e-3) sup = std::max(sup, oracle::irwin_hall_zn(n, x) / oracle::phi(x) - 1.0);
  return sup;
}

}  // namespace

TEST_CASE("classify on synthetic ladders") {
  using sweep::VerdictKind;
  const std::vector<double> falling{1e-2, 5e-3, 2.5e-3, 1.25e-3, 6e-4, 3e-4};
  CHECK(sweep::classify(falling, 1e-12, true).kind == VerdictKind::Converges);
  CHECK(sweep::classify(falling, 1e-12, false).kind == VerdictKind::Inconclusive);

  const std::vector<double> flat{4e-3, 2e-3, 1.1e-3, 1.0e-3, 0.98e-3, 1.01e-3};
  const auto v = sweep::classify(flat, 1e-12, false);
  CHECK(v.kind == VerdictKind::StallsAt);
  CHECK(v.level == Approx(1.0e-3));
  // A plateau at the accuracy floor is not a stall.
  CHECK(sweep::classify(flat, 5e-4, false).kind == VerdictKind::Inconclusive);

  const std::vector<double> bumpy{1e-2, 5e-3, 2e-3, 1e-3, 2e-3, 5e-4};
  CHECK(sweep::classify(bumpy, 1e-12, true).kind == VerdictKind::Inconclusive);
}

TEST_CASE("uniform sweep matches Irwin-Hall and falls like 1/n") {
  const auto s = sweep::run_sweep(kUniform, {16, 32, 64});
  REQUIRE(s.T_inf.size() == 3);
  CHECK(s.T_inf[0] == Approx(ih_t_inf(16)).epsilon(1e-5));
  CHECK(s.T_inf[1] == Approx(ih_t_inf(32)).epsilon(1e-5));
  for (std::size_t i = 0; i < 3; ++i) {
    const double n = s.n_list[i];
    CHECK(s.D_inf[i] == Approx(std::log1p(s.T_inf[i])).epsilon(1e-12));
    CHECK(s.rate_constant[i] == Approx(s.T_inf[i] * n / std::pow(std::log(n), 3)).epsilon(1e-12));
  }
  CHECK(s.loglog_slope < -0.7);
  CHECK(s.loglog_slope > -1.3);
  CHECK(s.predicted_clt);
}

TEST_CASE("normal law sweep is identically zero") {
  const auto s = sweep::run_sweep(dist::build_trig_gaussian(dist::TrigPoly::sin4(), 0.0).spec, {16, 64});
  for (double t : s.T_inf) CHECK(t == 0.0);
  CHECK(s.verdict.kind == sweep::VerdictKind::Converges);
}

TEST_CASE("sweep output does not depend on the thread count") {
  const std::vector<int> ladder{16, 32, 64, 128};
  const auto a = sweep::to_csv(sweep::run_sweep(kUniform, ladder, 1));
  const auto b = sweep::to_csv(sweep::run_sweep(kUniform, ladder, 4));
  CHECK(a == b);
  CHECK(a.rfind("n,T_inf,argmax_x,D_inf,rate_constant,sup_gap\n", 0) == 0);
}

TEST_CASE("ladder validation") {
  CHECK_THROWS_AS(sweep::run_sweep(kUniform, {}), Error);
  CHECK_THROWS_AS(sweep::run_sweep(kUniform, {32, 16}), Error);
  CHECK_THROWS_AS(sweep::run_sweep(kUniform, {sweep::kMaxLadderN * 2}), Error);
}

TEST_CASE("tail decay needs separation") {
  const auto normal = dist::build_trig_gaussian(dist::TrigPoly::sin4(), 0.0).spec;
  const auto trig = dist::build_trig_gaussian(dist::TrigPoly::sin4(), 2e-3).spec;
  for (const auto& s : {normal, trig}) {
    try {
      sweep::tail_decay_check(s, 0.5, {16, 32});
      FAIL("separation assumed");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SeparationNotEstablished);
    }
  }
  const auto d = sweep::tail_decay_check(kUniform, 0.5, {16, 32, 64});
  CHECK(d.geometric);
  CHECK(d.log_slope < 0.0);
}

TEST_CASE("restricted and unrestricted sups") {
  const auto normal = dist::build_trig_gaussian(dist::TrigPoly::sin4(), 0.0).spec;
  CHECK(sweep::restricted_sup_check(normal, 64, 1.0) == 0.0);
  // Beyond the support edge p_n = 0, so |p_n - phi| / phi = 1.
  CHECK(sweep::unrestricted_abs_sup(kUniform, 16) == Approx(1.0));
  double ref = 0.0;
  const double lim = std::sqrt(std::log(16.0));
  for (double x = -lim; x <= lim; x += 1e-3) ref = std::max(ref, std::abs(oracle::irwin_hall_zn(16, x) / oracle::phi(x) - 1.0));
  CHECK(sweep::restricted_sup_check(kUniform, 16, 1.0) == Approx(ref).epsilon(1e-4));
}
