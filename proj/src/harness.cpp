#include "tdg/harness.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace tdg {

std::vector<double> checkpoints(double horizon) {
  std::vector<double> ts;
  if (horizon > 10.0) {
    for (int k = 0;; ++k) {
      const double t = std::pow(10.0, 1.0 + k / 20.0);
      if (t >= horizon * (1.0 - 1e-12)) break;
      ts.push_back(t);
    }
  }
  ts.push_back(horizon);
  return ts;
}

std::vector<TrialRecord> run_many(const GameParams& p,
                                  const StrategyConfig& cfg, double horizon,
                                  int trials, uint64_t master_seed,
                                  int threads, bool emit_trajectories) {
  std::vector<TrialRecord> out(trials);
  if (trials <= 0) return out;
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, trials));

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex err_mu;

  auto worker = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= trials || failed.load()) return;
      try {
        out[i] = run_trial(p, cfg, horizon, trial_seed(master_seed, i),
                           emit_trajectories);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!failed.exchange(true)) first_error = e.what();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failed.load()) throw std::runtime_error("trial failed: " + first_error);
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records,
                                    const std::vector<double>& ts) {
  if (records.empty()) throw std::invalid_argument("no trials to aggregate");
  const auto& first = records.front();
  for (const auto& r : records) {
    const bool same = r.params.r_t == first.params.r_t &&
                      r.params.rho_a == first.params.rho_a &&
                      r.params.rho_t == first.params.rho_t &&
                      r.params.nu == first.params.nu &&
                      r.params.period == first.params.period &&
                      r.strategy.w == first.strategy.w &&
                      r.strategy.objective == first.strategy.objective &&
                      r.horizon == first.horizon;
    if (!same)
      throw std::invalid_argument("aggregate over mixed trial configurations");
  }
  std::vector<AggregateRow> rows;
  rows.reserve(ts.size());
  const int n = static_cast<int>(records.size());
  for (double t : ts) {
    double mean = 0.0;
    std::vector<double> xs;
    xs.reserve(n);
    for (const auto& r : records) {
      xs.push_back(capture_fraction(r, t));
      mean += xs.back();
    }
    mean /= n;
    double se = 0.0;
    if (n > 1) {
      double ss = 0.0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      se = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
    }
    rows.push_back({t, mean, se, n});
  }
  return rows;
}

std::vector<SweepRow> run_sweep(const RunConfig& rc, bool checkpoint_series) {
  std::vector<SweepRow> rows;
  const std::vector<double> ts =
      checkpoint_series ? checkpoints(rc.horizon)
                        : std::vector<double>{rc.horizon};
  for (double T : rc.t_list) {
    GameParams p = rc.params;
    p.period = T;
    const double ci = c_infinity(p).first;
    for (double w : rc.w_list) {
      StrategyConfig cfg;
      cfg.w = w;
      cfg.objective = rc.objective;
      const auto records = run_many(p, cfg, rc.horizon, rc.trials,
                                    rc.master_seed, rc.threads, false);
      for (const auto& a : aggregate(records, ts))
        rows.push_back({T, w, a.t, a.mean, a.se, a.n, ci});
    }
  }
  return rows;
}

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

void write_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << "T,w,checkpoint_t,mean,stderr,n_trials,c_inf\n";
  for (const auto& r : rows) {
    os << g17(r.period) << ',' << g17(r.w) << ',' << g17(r.t) << ','
       << g17(r.mean) << ',' << g17(r.se) << ',' << r.n << ','
       << g17(r.c_inf) << '\n';
  }
}

void load_config_file(const std::string& path, RunConfig& rc) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  auto parse_list = [](const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key=value");
    const std::string key = strip(line.substr(0, eq));
    const std::string val = strip(line.substr(eq + 1));
    if (key == "rt") rc.params.r_t = std::stod(val);
    else if (key == "rhoa") rc.params.rho_a = std::stod(val);
    else if (key == "rhot") rc.params.rho_t = std::stod(val);
    else if (key == "nu") rc.params.nu = std::stod(val);
    else if (key == "period") rc.t_list = parse_list(val);
    else if (key == "horizon") rc.horizon = std::stod(val);
    else if (key == "trials") rc.trials = std::stoi(val);
    else if (key == "w") rc.w_list = parse_list(val);
    else if (key == "seed") rc.master_seed = std::stoull(val);
    else if (key == "objective") rc.objective = objective_from_string(val);
    else if (key == "out") rc.out = val;
    else if (key == "emit_trajectories")
      rc.emit_trajectories = (val == "1" || val == "true" || val == "yes");
    else if (key == "threads") rc.threads = std::stoi(val);
    else
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
  }
  if (!rc.t_list.empty()) rc.params.period = rc.t_list.front();
}

namespace {

/// Writes `text` to rc.out or stdout.
void emit_text(const RunConfig& rc, const std::string& text) {
  if (rc.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(rc.out);
  if (!f) throw std::runtime_error("cannot open output file: " + rc.out);
  f << text;
}

std::vector<double> default_bound_periods() {
  std::vector<double> ts;
  for (int t = 1; t <= 12; ++t) ts.push_back(t);
  return ts;
}

} // namespace

int cli_main(int argc, char** argv) {
  RunConfig rc;
  // the config file provides the baseline; flags parsed below override it
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      load_config_file(argv[i + 1], rc);
      break;
    }
  }

  CLI::App app{"event-driven simulator for a circular target-defense game "
               "with periodic intruder arrivals"};
  app.require_subcommand(1);

  std::string config_path; // consumed above; declared so the flag parses
  std::string objective_name = to_string(rc.objective);
  bool period_given = false, w_given = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key=value config file");
    sub->add_option("--rt", rc.params.r_t, "target radius");
    sub->add_option("--rhoa", rc.params.rho_a, "intruder sensing radius");
    sub->add_option("--rhot", rc.params.rho_t, "sensing annulus width");
    sub->add_option("--nu", rc.params.nu, "intruder/defender speed ratio");
    sub->add_option("--period", rc.t_list, "arrival period(s)")
        ->delimiter(',')
        ->each([&](const std::string&) { period_given = true; });
    sub->add_option("--horizon", rc.horizon, "simulated time horizon");
    sub->add_option("--trials", rc.trials, "trials per configuration");
    sub->add_option("--w", rc.w_list, "strategy weight(s) in [0,1]")
        ->delimiter(',')
        ->each([&](const std::string&) { w_given = true; });
    sub->add_option("--seed", rc.master_seed, "master seed");
    sub->add_option("--objective", objective_name,
                    "engagement objective: min_time | min_distance");
    sub->add_option("--out", rc.out, "output path (default stdout)");
    sub->add_flag("--emit-trajectories", rc.emit_trajectories,
                  "include motion segments in trial logs");
    sub->add_option("--threads", rc.threads, "worker threads (0 = all cores)");
  };

  auto* simulate =
      app.add_subcommand("simulate", "run one trial and print its JSON log");
  add_common(simulate);
  auto* montecarlo = app.add_subcommand(
      "montecarlo", "capture-fraction curves over checkpoints (CSV)");
  add_common(montecarlo);
  auto* sweep = app.add_subcommand(
      "sweep", "final capture fraction over a period x weight grid (CSV)");
  add_common(sweep);
  auto* bound = app.add_subcommand(
      "bound", "analytic capture-fraction lower bound report (JSON)");
  add_common(bound);
  auto* replay = app.add_subcommand(
      "replay", "audit a recorded trial log without re-running it");
  std::string replay_path;
  replay->add_option("log", replay_path, "trial JSON log")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    rc.objective = objective_from_string(objective_name);
    if (!rc.t_list.empty()) rc.params.period = rc.t_list.front();

    if (simulate->parsed()) {
      StrategyConfig cfg;
      cfg.w = rc.w_list.empty() ? 0.0 : rc.w_list.front();
      cfg.objective = rc.objective;
      const TrialRecord rec =
          run_trial(rc.params, cfg, rc.horizon, trial_seed(rc.master_seed, 0),
                    rc.emit_trajectories);
      emit_text(rc, trial_to_json(rec).dump(2) + "\n");
      return 0;
    }
    if (montecarlo->parsed()) {
      if (!w_given && rc.w_list.size() > 1) {
        // keep the full default weight set
      }
      std::ostringstream os;
      write_csv(run_sweep(rc, /*checkpoint_series=*/true), os);
      emit_text(rc, os.str());
      return 0;
    }
    if (sweep->parsed()) {
      if (!period_given && rc.t_list == std::vector<double>{2.0})
        rc.t_list = default_bound_periods();
      std::ostringstream os;
      write_csv(run_sweep(rc, /*checkpoint_series=*/false), os);
      emit_text(rc, os.str());
      return 0;
    }
    if (bound->parsed()) {
      if (!period_given && rc.t_list == std::vector<double>{2.0})
        rc.t_list = default_bound_periods();
      auto arr = nlohmann::json::array();
      for (double T : rc.t_list) {
        GameParams p = rc.params;
        p.period = T;
        arr.push_back(bound_to_json(bound_report(p)));
      }
      emit_text(rc, arr.dump(2) + "\n");
      return 0;
    }
    if (replay->parsed()) {
      std::ifstream in(replay_path);
      if (!in) throw std::runtime_error("cannot open log: " + replay_path);
      nlohmann::json j;
      in >> j;
      const TrialRecord rec = trial_from_json(j);
      const auto issues = verify_trial(rec);
      for (const auto& msg : issues) std::cerr << "violation: " << msg << "\n";
      const auto& c = rec.counters;
      std::cout << "arrived=" << c.arrived << " captured=" << c.captured
                << " breached=" << c.breached << " escaped=" << c.escaped
                << " final_fraction="
                << g17(capture_fraction(rec, rec.horizon)) << "\n";
      return issues.empty() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

} // namespace tdg
