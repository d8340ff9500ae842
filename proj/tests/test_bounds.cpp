#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tdg/bounds.hpp"

#include <cmath>

namespace tdg {
namespace {

GameParams with_period(double t) {
  GameParams p;
  p.period = t;
  return p;
}

} // namespace

TEST_CASE("orbit arcs for the default period") {
  const OrbitArcs oa = orbit_arcs(with_period(2.0));
  REQUIRE(oa.k == 4); // ceil(5 / 1.5)
  REQUIRE(oa.phi.size() == 4);
  CHECK(oa.phi[0] == doctest::Approx(1.0442081245645005).epsilon(1e-9));
  CHECK(oa.phi[1] == doctest::Approx(0.5022735009373241).epsilon(1e-9));
  CHECK(oa.phi[2] == 0.0); // orbit at 6.0 sinks below the surface floor
  CHECK(oa.phi[3] == 0.0);
  CHECK(oa.q[0] == doctest::Approx(oa.phi[0] / (2.0 * kPi)).epsilon(1e-12));
  CHECK(oa.q[1] == doctest::Approx(0.07993931045824687).epsilon(1e-9));
  CHECK(oa.p_omega == doctest::Approx(0.23284501037674454).epsilon(1e-9));
  // p_omega is exactly 1 - prod(1 - q_i)
  double prod = 1.0;
  for (double q : oa.q) prod *= 1.0 - q;
  CHECK(oa.p_omega == doctest::Approx(1.0 - prod).epsilon(1e-12));
}

TEST_CASE("failure sequence for the default period") {
  const FailureSequence fs = failure_sequence(with_period(2.0));
  REQUIRE(fs.ell == 3);
  REQUIRE(fs.p.size() == 3);
  CHECK(fs.p[0] == doctest::Approx(0.24048841302864718).epsilon(1e-9));
  CHECK(fs.p[1] == doctest::Approx(0.35167090526944667).epsilon(1e-9));
  CHECK(fs.p[2] == 1.0); // the third failure lands inside the guarantee radius
  CHECK(fs.t_star == doctest::Approx(5.846476469812298).epsilon(1e-9));
  CHECK(!fs.negative_radius);
}

TEST_CASE("mean cycle time re-derives from the report pieces") {
  const BoundReport r = bound_report(with_period(2.0));
  double tail = 0.0, carry = 1.0;
  for (int j = 1; j <= r.ell; ++j) {
    const double pj = r.p[static_cast<size_t>(j - 1)];
    tail += carry * pj * (r.t_star + j * r.period);
    carry *= 1.0 - pj;
  }
  const double tau = r.p_omega * r.t_star + (1.0 - r.p_omega) * tail;
  CHECK(tau == doctest::Approx(r.tau_avg).epsilon(1e-12));
  CHECK(r.tau_avg == doctest::Approx(9.301627541310278).epsilon(1e-9));
  // and the headline number follows from tau
  const double c =
      r.period * (1.0 - 0.75) / (1.0 + (1.0 - 0.75) * r.tau_avg);
  CHECK(c == doctest::Approx(r.c_infinity).epsilon(1e-12));
}

TEST_CASE("pinned lower bounds across the period sweep") {
  const double expected[12] = {
      0.08412761352518866, 0.15035754036779997, 0.21392269004055772,
      0.26068747331143977, 0.35674732509950413, 0.40405860267755545,
      0.4463391818359937,  0.4843509421627204,  0.5187093115167618,
      0.5499168419672267,  0.5783879534567182,  0.6044674419321215};
  double prev = 0.0;
  for (int t = 1; t <= 12; ++t) {
    const auto [c, rep] = c_infinity(with_period(static_cast<double>(t)));
    CHECK(c == doctest::Approx(expected[t - 1]).epsilon(1e-9));
    CHECK(c == rep.c_infinity);
    CHECK(c > prev); // sparser arrivals only help the defender
    CHECK(!rep.clamped);
    prev = c;
  }
}

TEST_CASE("report carries the cross-module reference time") {
  const BoundReport r = bound_report(with_period(2.0));
  CHECK(r.t_1 == doctest::Approx(5.0 / 0.75 - 1.0 / 1.75).epsilon(1e-12));
  CHECK(r.k == 4);
  CHECK(r.ell == 3);
  CHECK(r.period == 2.0);
}

TEST_CASE("very sparse arrivals clamp the bound at one") {
  const auto [c, rep] = c_infinity(with_period(100.0));
  CHECK(c == 1.0);
  CHECK(rep.clamped);
  // a single failure already parks the defender inside the guarantee radius
  CHECK(rep.negative_radius);
  REQUIRE(!rep.p.empty());
  CHECK(rep.p.back() == 1.0);
}

TEST_CASE("bound survives an extreme speed ratio") {
  GameParams p;
  p.nu = 1e-3;
  p.period = 2.0;
  const auto [c, rep] = c_infinity(p);
  CHECK(std::isfinite(c));
  CHECK(c > 0.0);
  CHECK(c <= 1.0);
  // tiny parameter nudges keep it continuous
  GameParams p2 = p;
  p2.nu = 1.0001e-3;
  const auto [c2, rep2] = c_infinity(p2);
  CHECK(std::abs(c - c2) < 2e-3 * c);
}

TEST_CASE("report serialization exposes every field") {
  const nlohmann::json j = bound_to_json(bound_report(with_period(2.0)));
  CHECK(j["period"] == 2.0);
  CHECK(j["k"] == 4);
  CHECK(j["ell"] == 3);
  CHECK(j["phi"].size() == 4);
  CHECK(j["p"].size() == 3);
  CHECK(j.contains("p_omega"));
  CHECK(j.contains("t_star"));
  CHECK(j.contains("tau_avg"));
  CHECK(j.contains("t_1"));
  CHECK(j.contains("c_infinity"));
  CHECK(j.contains("clamped"));
  CHECK(j.contains("negative_radius"));
  CHECK(j["c_infinity"] ==
        doctest::Approx(0.15035754036779997).epsilon(1e-12));
}

} // namespace tdg
