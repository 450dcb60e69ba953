#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcb/batch.hpp"
#include "mcb/bounds.hpp"
#include "mcb/errors.hpp"
#include "mcb/mc_policy.hpp"
#include "mcb/presets.hpp"
#include "mcb/scenario_io.hpp"
#include "mcb/trace_io.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct RunArgs {
  std::string preset;
  std::string config;
  std::optional<std::uint64_t> seeds;
  std::vector<std::uint64_t> seed_list;
  std::string algo;
  std::vector<std::string> overrides;
  std::string out;
  std::uint64_t decimate = 1;
  std::optional<std::uint64_t> horizon;
  std::optional<double> lambda;
  std::optional<double> f;
  std::size_t threads = 0;
  bool gnuplot = false;
};

nlohmann::json base_document(const RunArgs& a) {
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw mcb::ConfigError("cannot open " + a.config);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw mcb::ConfigError(a.config + ": " + e.what());
    }
    if (a.horizon) doc["horizon"] = *a.horizon;
    return doc;
  }
  return mcb::scenario_to_json(mcb::make_preset(a.preset, {a.horizon, a.lambda, a.f}));
}

mcb::Scenario build_scenario(const RunArgs& a) {
  nlohmann::json doc = base_document(a);
  if (!a.algo.empty()) doc["algorithm"]["name"] = a.algo;
  for (const auto& o : a.overrides) mcb::apply_override(doc, o);
  mcb::Scenario s = mcb::scenario_from_json(doc);
  const auto report = mcb::validate(s);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  if (!report.ok()) {
    std::ostringstream msg;
    msg << "scenario has " << report.errors.size() << " violation(s):";
    for (const auto& e : report.errors) msg << "\n  " << e;
    throw mcb::ConfigError(msg.str());
  }
  return s;
}

std::string gnuplot_script(const std::vector<std::uint64_t>& seeds) {
  std::ostringstream gp;
  gp << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel 'round'\n"
     << "set multiplot layout 2,1\n"
     << "set ylabel 'average regret'\n"
     << "plot 'summary.csv' using 1:2 with lines title 'mean', \\\n"
     << "     '' using 1:($2-$3):($2+$3) with filledcurves fs transparent solid 0.2 notitle\n"
     << "set ylabel 'cumulative regret'\n"
     << "plot";
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    gp << (i ? ", \\\n    " : " ") << "'trace_seed" << seeds[i] << ".csv' using 1:4 with lines notitle";
  }
  gp << "\nunset multiplot\n";
  return gp.str();
}

int cmd_run(const RunArgs& a) {
  if (a.preset.empty() == a.config.empty()) throw mcb::ConfigError("give exactly one of --preset or --config");
  const mcb::Scenario scenario = build_scenario(a);

  std::vector<std::uint64_t> seeds;
  if (a.seeds) {
    if (*a.seeds == 0) throw mcb::ConfigError("--seeds must be at least 1");
    seeds.resize(*a.seeds);
    std::iota(seeds.begin(), seeds.end(), 1);
  } else if (!a.seed_list.empty()) {
    seeds = a.seed_list;
  } else if (!scenario.seeds.empty()) {
    seeds = scenario.seeds;
  } else {
    seeds = {1};
  }

  mcb::BatchOptions options;
  options.run.decimate = a.decimate;
  options.run.record_players = false;
  options.threads = a.threads;
  const std::filesystem::path out(a.out);
  if (!a.out.empty()) {
    std::filesystem::create_directories(out);
    mcb::save_scenario(scenario, out / "scenario.json");
    options.on_trace = [&](std::size_t i, const mcb::Trace& t) {
      std::ostringstream trace_csv;
      std::ostringstream events_csv;
      mcb::write_trace_csv(t, trace_csv);
      mcb::write_events_csv(t, events_csv);
      const std::string tag = std::to_string(seeds[i]);
      mcb::write_file(out / ("trace_seed" + tag + ".csv"), trace_csv.str());
      mcb::write_file(out / ("events_seed" + tag + ".csv"), events_csv.str());
    };
  }

  const mcb::BatchResult result = mcb::run_batch(scenario, seeds, options);

  if (!a.out.empty()) {
    std::ostringstream summary_csv;
    mcb::write_summary_csv(result.summary, summary_csv);
    mcb::write_file(out / "summary.csv", summary_csv.str());
    if (a.gnuplot) mcb::write_file(out / "plot.gp", gnuplot_script(seeds));
  }

  const double n = static_cast<double>(seeds.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    std::cout << "seed " << seeds[i] << ": cumulative regret " << num(result.total_regret[i]) << '\n';
    mean += result.total_regret[i] / n;
  }
  double var = 0.0;
  for (double r : result.total_regret) var += (r - mean) * (r - mean) / n;
  std::cout << "cumulative regret: mean " << num(mean) << " std " << num(std::sqrt(var)) << '\n';
  const auto& last = result.summary.back();
  std::cout << "average regret at round " << last.round << ": mean " << num(last.mean_avg_regret) << " std "
            << num(last.std_avg_regret) << '\n';
  return 0;
}

void print(const std::string& line) { std::cout << line << '\n'; }

void add_bounds(CLI::App& app) {
  auto* bounds = app.add_subcommand("bounds", "Evaluate closed-form parameters and regret bounds");
  bounds->require_subcommand(1);

  struct Inputs {
    std::size_t k = 0;
    double eps = 0, delta = 0, horizon = 0, t0 = 0, t1 = 0, tf = 0, x = 0, n = 0, nm = 0, e = 0, l = 0;
    double lambda = 0, beta = 2.0 / 3.0, p = 0, c = 0, d = 0, f = 0;
    std::uint64_t learn = 0, collisions = 0;
  };
  static Inputs in;

  auto* t0s = bounds->add_subcommand("t0-static", "Learning length for a fixed set of players");
  t0s->add_option("--K", in.k, "arms")->required();
  t0s->add_option("--eps", in.eps, "gap lower bound")->required();
  t0s->add_option("--delta", in.delta, "failure probability")->required();
  t0s->callback([] { print(std::to_string(mcb::bounds::t0_static(in.k, in.eps, in.delta))); });

  auto* t0d = bounds->add_subcommand("t0-dynamic", "Per-epoch learning length over horizon T");
  t0d->add_option("--K", in.k, "arms")->required();
  t0d->add_option("--eps", in.eps, "gap lower bound")->required();
  t0d->add_option("--delta", in.delta, "failure probability")->required();
  t0d->add_option("--T", in.horizon, "horizon")->required();
  t0d->callback([] { print(std::to_string(mcb::bounds::t0_dynamic(in.k, in.eps, in.delta, in.horizon))); });

  auto* t0e = bounds->add_subcommand("t0-estimator", "Learning length for an exact player-count estimate");
  t0e->add_option("--K", in.k, "arms")->required();
  t0e->add_option("--delta", in.delta, "failure probability")->required();
  t0e->callback([] { print(std::to_string(mcb::bounds::t0_estimator(in.k, in.delta))); });

  auto* t1 = bounds->add_subcommand("t1", "Epoch length minimizing the dynamic regret bound");
  t1->add_option("--T", in.horizon, "horizon")->required();
  t1->add_option("--t0", in.t0, "learning length")->required();
  t1->add_option("--tf", in.tf, "fixing time bound")->required();
  t1->add_option("--x", in.x, "bound on enter + leave events")->required();
  t1->callback([] { print(std::to_string(mcb::bounds::t1_optimal(in.horizon, in.t0, in.tf, in.x))); });

  auto* mcr = bounds->add_subcommand("mc-regret", "Regret bound of musical chairs");
  mcr->add_option("--t0", in.t0, "learning length")->required();
  mcr->add_option("--N", in.n, "players")->required();
  mcr->callback([] { print(num(mcb::bounds::mc_regret_bound(in.t0, in.n))); });

  auto* dmcr = bounds->add_subcommand("dmc-regret", "Regret bound of dynamic musical chairs");
  dmcr->add_option("--T", in.horizon, "horizon")->required();
  dmcr->add_option("--t1", in.t1, "epoch length")->required();
  dmcr->add_option("--t0", in.t0, "learning length")->required();
  dmcr->add_option("--tf", in.tf, "fixing time bound")->required();
  dmcr->add_option("--Nm", in.nm, "maximum players")->required();
  dmcr->add_option("--e", in.e, "entering players")->required();
  dmcr->add_option("--l", in.l, "leaving players")->required();
  dmcr->callback([] {
    print(num(mcb::bounds::dmc_regret_bound(in.horizon, in.t1, in.t0, in.tf, in.nm, in.e, in.l)));
  });

  auto* ex = bounds->add_subcommand("exponents", "Regret exponents (MEGA, DMC) for churn every T^lambda rounds");
  ex->add_option("--lambda", in.lambda, "churn exponent")->required();
  ex->add_option("--beta", in.beta, "MEGA unavailability exponent")->capture_default_str();
  ex->callback([] {
    if (!(in.lambda > 0 && in.lambda <= 1 && in.beta > 0 && in.beta < 1)) {
      throw mcb::InvalidInput("need lambda in (0,1] and beta in (0,1)");
    }
    const auto e = mcb::bounds::scenario_exponents(in.lambda, in.beta);
    print("(" + num(e.mega) + ", " + num(e.dmc) + ")");
  });

  auto* cp = bounds->add_subcommand("collision-prob", "Per-round collision probability of uniform players");
  cp->add_option("--K", in.k, "arms")->required();
  cp->add_option("--N", in.n, "players")->required();
  cp->callback([] { print(num(mcb::bounds::collision_probability(in.k, in.n))); });

  auto* inv = bounds->add_subcommand("invert", "Player count from a collision probability");
  inv->add_option("--K", in.k, "arms")->required();
  inv->add_option("--p", in.p, "collision probability")->required();
  inv->callback([] { print(num(mcb::bounds::invert_collision_probability(in.k, in.p))); });

  auto* est = bounds->add_subcommand("estimate", "Player-count estimate from collisions seen while learning");
  est->add_option("--K", in.k, "arms")->required();
  est->add_option("--t0", in.learn, "learning rounds")->required();
  est->add_option("--C", in.collisions, "collisions observed")->required();
  est->callback([] { print(std::to_string(mcb::estimate_players(in.collisions, in.learn, in.k))); });

  auto* fix = bounds->add_subcommand("fixing-time", "Expected rounds until a player fixes");
  fix->add_option("--N", in.n, "players")->required();
  fix->callback([] { print(num(mcb::bounds::fixing_time_bound(in.n))); });

  auto* band = bounds->add_subcommand("f-band", "Admissible overlap fraction f for the late-entry MEGA scenario");
  band->add_option("--K", in.k, "arms")->required();
  band->add_option("--c", in.c, "MEGA c")->required();
  band->add_option("--d", in.d, "MEGA d")->required();
  band->add_option("--T", in.horizon, "horizon")->required();
  band->add_option("--f", in.f, "overlap fraction; also prints the largest admissible alpha");
  band->callback([band] {
    const auto [lo, hi] = mcb::bounds::theorem3_f_band(in.k, in.c, in.d, in.horizon);
    std::string line = "[" + num(lo) + ", " + num(hi) + "]";
    if (band->count("--f") > 0) line += " alpha_max " + num(mcb::bounds::theorem3_alpha_max(in.f, in.horizon));
    print(line);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Communication-free multi-player bandit simulator"};
  app.require_subcommand(1);
  int status = 0;

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario over one or more seeds");
  run_cmd->add_option("--preset", run.preset, "named scenario");
  run_cmd->add_option("--config", run.config, "scenario JSON file");
  auto* seeds_opt = run_cmd->add_option("--seeds", run.seeds, "use seeds 1..N");
  run_cmd->add_option("--seed-list", run.seed_list, "explicit seeds")->delimiter(',')->excludes(seeds_opt);
  run_cmd->add_option("--algo", run.algo, "mc, dmc, mega or random");
  run_cmd->add_option("--set", run.overrides, "override a config value: dotted.path=value");
  run_cmd->add_option("--out", run.out, "directory for CSV output");
  run_cmd->add_option("--decimate", run.decimate, "keep every k-th round in traces")->check(CLI::PositiveNumber);
  run_cmd->add_option("--horizon", run.horizon, "horizon T");
  run_cmd->add_option("--lambda", run.lambda, "churn exponent (theorem4 preset)");
  run_cmd->add_option("--f", run.f, "overlap fraction (theorem3-proof preset)");
  run_cmd->add_option("--threads", run.threads, "worker threads (0 = all cores; MCB_THREADS caps)");
  run_cmd->add_flag("--gnuplot", run.gnuplot, "also write plot.gp next to the CSVs");
  run_cmd->callback([&] { status = cmd_run(run); });

  add_bounds(app);

  std::string emit_name;
  std::string emit_out;
  std::optional<std::uint64_t> emit_horizon;
  std::optional<double> emit_lambda;
  std::optional<double> emit_f;
  auto* emit = app.add_subcommand("emit-preset", "Write a named scenario as JSON");
  emit->add_option("name", emit_name, "preset name")->required();
  emit->add_option("-o,--out", emit_out, "output file (stdout if omitted)");
  emit->add_option("--horizon", emit_horizon, "horizon T");
  emit->add_option("--lambda", emit_lambda, "churn exponent");
  emit->add_option("--f", emit_f, "overlap fraction");
  emit->callback([&] {
    const auto s = mcb::make_preset(emit_name, {emit_horizon, emit_lambda, emit_f});
    if (emit_out.empty()) {
      std::cout << mcb::scenario_to_json(s).dump(2) << '\n';
    } else {
      mcb::save_scenario(s, emit_out);
    }
  });

  auto* list = app.add_subcommand("presets", "List the named scenarios");
  list->callback([] {
    for (const auto& n : mcb::preset_names()) std::cout << n << '\n';
  });

  std::string check_path;
  auto* check = app.add_subcommand("validate", "Check a scenario file");
  check->add_option("config", check_path, "scenario JSON file")->required();
  check->callback([&] {
    const auto report = mcb::validate(mcb::load_scenario(check_path));
    for (const auto& w : report.warnings) std::cout << "warning: " << w << '\n';
    for (const auto& e : report.errors) std::cout << "error: " << e << '\n';
    if (!report.ok()) {
      status = kExitConfig;
      return;
    }
    std::cout << "ok\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  } catch (const mcb::InvariantBreach& e) {
    std::cerr << "invariant breach: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return status;
}
