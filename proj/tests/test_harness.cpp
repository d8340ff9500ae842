#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tdg/harness.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace tdg {
namespace {

const GameParams kP{};

std::string temp_config(const std::string& body) {
  const std::string path = "tdg_test_config.txt";
  std::ofstream out(path);
  out << body;
  return path;
}

} // namespace

TEST_CASE("checkpoints are log-spaced with the horizon appended") {
  const auto ts = checkpoints(1e4);
  REQUIRE(ts.size() > 10);
  CHECK(ts.front() == doctest::Approx(10.0));
  CHECK(ts.back() == 1e4);
  const double ratio = std::pow(10.0, 1.0 / 20.0);
  for (size_t i = 1; i + 1 < ts.size(); ++i) {
    CHECK(ts[i] / ts[i - 1] == doctest::Approx(ratio).epsilon(1e-9));
    CHECK(ts[i] < 1e4);
  }
  CHECK(checkpoints(5.0) == std::vector<double>{5.0});
  CHECK(checkpoints(10.0) == std::vector<double>{10.0});
}

TEST_CASE("worker pool returns trials in order, any thread count") {
  const StrategyConfig cfg;
  const auto serial = run_many(kP, cfg, 300.0, 10, 99, 1);
  REQUIRE(serial.size() == 10);
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].seed == trial_seed(99, i));
  }
  for (int threads : {2, 4, 0}) {
    const auto parallel = run_many(kP, cfg, 300.0, 10, 99, threads);
    REQUIRE(parallel.size() == serial.size());
    for (size_t i = 0; i < serial.size(); ++i) {
      CHECK(trial_to_json(parallel[i]).dump() ==
            trial_to_json(serial[i]).dump());
    }
  }
}

TEST_CASE("aggregation reduces known fractions") {
  // period 1, so the denominator at t=4 is 5 scheduled arrivals
  GameParams p = kP;
  p.period = 1.0;
  TrialRecord a, b;
  a.params = b.params = p;
  for (double t : {0.5, 1.5})
    a.events.push_back({t, EventKind::Capture, 0, Vec2::Zero()});
  for (double t : {0.5, 1.5, 2.5})
    b.events.push_back({t, EventKind::Capture, 0, Vec2::Zero()});
  const auto rows = aggregate({a, b}, {4.0});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].t == 4.0);
  CHECK(rows[0].n == 2);
  CHECK(rows[0].mean == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rows[0].se == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("aggregation refuses mixed runs") {
  TrialRecord a, b;
  a.params = b.params = kP;
  b.params.nu = 0.7;
  CHECK_THROWS_AS(aggregate({a, b}, {10.0}), std::invalid_argument);
  b = a;
  b.strategy.w = 0.5;
  CHECK_THROWS_AS(aggregate({a, b}, {10.0}), std::invalid_argument);
  CHECK_THROWS_AS(aggregate({}, {10.0}), std::invalid_argument);
}

TEST_CASE("csv schema and lossless float formatting") {
  SweepRow row;
  row.period = 2.0;
  row.w = 0.25;
  row.t = 10.0;
  row.mean = 1.0 / 3.0;
  row.se = 0.1;
  row.n = 100;
  row.c_inf = 0.15035754036779997;
  std::ostringstream os;
  write_csv({row}, os);
  std::istringstream is(os.str());
  std::string header, line;
  std::getline(is, header);
  CHECK(header == "T,w,checkpoint_t,mean,stderr,n_trials,c_inf");
  std::getline(is, line);
  // parse the mean column back and demand bit equality
  std::stringstream ss(line);
  std::string cell;
  for (int i = 0; i < 4; ++i) std::getline(ss, cell, ',');
  CHECK(std::stod(cell) == 1.0 / 3.0);
  CHECK(line.find("0.3333333333333333") != std::string::npos);
}

TEST_CASE("sweep produces one row per combination plus the bound") {
  RunConfig rc;
  rc.t_list = {2.0};
  rc.w_list = {0.0, 1.0};
  rc.horizon = 100.0;
  rc.trials = 3;
  rc.master_seed = 11;
  const auto rows = run_sweep(rc, false);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.period == 2.0);
    CHECK(r.t == 100.0);
    CHECK(r.n == 3);
    CHECK(r.mean >= 0.0);
    CHECK(r.mean <= 1.0);
    CHECK(r.c_inf == doctest::Approx(0.15035754036779997).epsilon(1e-9));
  }
  CHECK(rows[0].w == 0.0);
  CHECK(rows[1].w == 1.0);

  // with the series enabled, every checkpoint becomes a row
  const auto series = run_sweep(rc, true);
  CHECK(series.size() == 2 * checkpoints(100.0).size());
}

TEST_CASE("config file drives the run configuration") {
  const std::string path = temp_config(
      "# comment line\n"
      "rt = 4.5\n"
      "rhoa=0.9\n"
      "rhot = 5.5   # trailing comment\n"
      "nu = 0.7\n"
      "period = 1,2,3\n"
      "\n"
      "horizon = 500\n"
      "trials = 7\n"
      "w = 0,0.5\n"
      "seed = 31\n"
      "objective = min_distance\n"
      "emit_trajectories = true\n"
      "threads = 2\n");
  RunConfig rc;
  load_config_file(path, rc);
  std::remove(path.c_str());
  CHECK(rc.params.r_t == 4.5);
  CHECK(rc.params.rho_a == 0.9);
  CHECK(rc.params.rho_t == 5.5);
  CHECK(rc.params.nu == 0.7);
  CHECK(rc.t_list == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(rc.horizon == 500.0);
  CHECK(rc.trials == 7);
  CHECK(rc.w_list == std::vector<double>{0.0, 0.5});
  CHECK(rc.master_seed == 31);
  CHECK(rc.objective == Objective::MinDistance);
  CHECK(rc.emit_trajectories);
  CHECK(rc.threads == 2);
}

TEST_CASE("config file rejects unknown keys and malformed lines") {
  const std::string bad = temp_config("rt = 4\nwarp_speed = 9\n");
  RunConfig rc;
  CHECK_THROWS(load_config_file(bad, rc));
  std::remove(bad.c_str());

  const std::string junk = temp_config("rt 4\n");
  CHECK_THROWS(load_config_file(junk, rc));
  std::remove(junk.c_str());

  CHECK_THROWS(load_config_file("no_such_file_anywhere.cfg", rc));
}

} // namespace tdg
