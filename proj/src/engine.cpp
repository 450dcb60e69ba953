#include "mcb/engine.hpp"

#include <algorithm>
#include <memory>

#include "mcb/errors.hpp"

namespace mcb {

std::string_view to_string(LifecycleKind kind) {
  switch (kind) {
    case LifecycleKind::kEnter: return "enter";
    case LifecycleKind::kLeave: return "leave";
    case LifecycleKind::kFixed: return "fixed";
    case LifecycleKind::kEpochReset: return "epoch_reset";
  }
  return "?";
}

std::span<const PlayerStep> Trace::steps_of(std::size_t record) const {
  if (step_offsets.empty()) return {};
  return std::span<const PlayerStep>(steps).subspan(step_offsets[record],
                                                    step_offsets[record + 1] - step_offsets[record]);
}

namespace {

struct Player {
  std::uint32_t id = 0;
  std::unique_ptr<Policy> policy;
  Rng rng;
  std::uint64_t epoch = 0;
  bool fixed = false;      // fixed in the current epoch
  bool have_nstar = false;  // n_star recorded for the current epoch
  std::optional<std::size_t> arm;
  Phase phase = Phase::kUniform;
};

}  // namespace

Trace run(const Scenario& scenario, std::uint64_t seed, const RunOptions& options) {
  const auto report = validate(scenario);
  if (!report.ok()) throw ConfigError("scenario does not validate: " + report.errors.front());
  return run(scenario, resolve_arms(scenario), seed, options);
}

Trace run(const Scenario& scenario, const ArmSet& arms, std::uint64_t seed, const RunOptions& options) {
  if (arms.size() != arm_count(scenario.arms)) throw ContractViolation("arm set does not match the scenario");
  if (options.decimate == 0) throw ConfigError("decimate must be at least 1");
  if (auto problem = check_algorithm(scenario.algorithm); !problem.empty()) throw ConfigError(problem);

  const std::size_t k = arms.size();
  const std::uint64_t horizon = scenario.horizon;
  const auto& events = scenario.events;

  Trace trace;
  trace.horizon = horizon;
  trace.seed = seed;
  trace.decimate = options.decimate;
  trace.initial_players = scenario.initial_players;
  trace.rounds.reserve(static_cast<std::size_t>(horizon / options.decimate + 1));
  if (options.record_players) trace.step_offsets.push_back(0);

  Rng env_rng = make_stream(seed, StreamKind::kEnvironment, 0);
  Roster roster(scenario.initial_players);
  std::vector<Player> players;  // active, in entry order

  auto admit = [&](std::uint32_t id, std::uint64_t round) {
    Player p;
    p.id = id;
    p.policy = make_policy(scenario.algorithm, k, horizon, round - 1);
    p.rng = make_stream(seed, StreamKind::kPlayer, id);
    p.epoch = p.policy->status().epoch;
    players.push_back(std::move(p));
    if (trace.players.size() <= id) trace.players.resize(id + 1);
    trace.players[id].player = id;
    trace.players[id].enter_round = round;
    trace.events.push_back({id, LifecycleKind::kEnter, round});
  };
  for (std::uint32_t id : roster.active()) admit(id, 1);

  std::vector<double> rewards(k, 0.0);
  std::vector<std::uint32_t> arm_counts(k, 0);
  std::vector<Choice> choices;
  std::vector<std::size_t> choosers;  // index into players for each choice
  RoundOutcome outcome;
  double cum = 0.0;
  double total_reward = 0.0;
  std::size_t next_event = 0;

  for (std::uint64_t round = 1; round <= horizon; ++round) {
    const std::uint64_t global_t = round - 1;

    std::size_t first_event = next_event;
    while (next_event < events.size() && events[next_event].round == round) ++next_event;
    for (std::size_t e = first_event; e < next_event; ++e) {
      if (events[e].kind == EventKind::kEnter) admit(roster.enter(), round);
    }
    if (players.size() > k) throw InvariantBreach("more active players than arms");

    sample_rewards(arms, env_rng, rewards);

    choices.clear();
    choosers.clear();
    for (std::size_t i = 0; i < players.size(); ++i) {
      auto& p = players[i];
      p.arm = p.policy->act(global_t, p.rng).arm;
      const PolicyStatus st = p.policy->status();
      p.phase = st.phase;
      if (st.epoch != p.epoch) {
        p.epoch = st.epoch;
        p.fixed = false;
        p.have_nstar = false;
        trace.events.push_back({p.id, LifecycleKind::kEpochReset, round});
      }
      if (p.arm) {
        choices.push_back({p.id, *p.arm});
        choosers.push_back(i);
      }
    }

    resolve_round_into(arms, choices, rewards, players.size(), arm_counts, outcome);

    double realized = 0.0;
    std::uint32_t collisions = 0;
    for (std::size_t c = 0; c < outcome.players.size(); ++c) {
      const auto& o = outcome.players[c];
      auto& p = players[choosers[c]];
      p.policy->observe({o.collided, o.reward});
      realized += o.reward;
      if (o.collided) ++collisions;
    }
    for (auto& p : players) {
      const PolicyStatus st = p.policy->status();
      if (st.n_star && !p.have_nstar) {
        p.have_nstar = true;
        trace.players[p.id].n_star.push_back({p.epoch, *st.n_star});
      }
      if (st.phase == Phase::kFixed && !p.fixed) {
        p.fixed = true;
        trace.players[p.id].fix_rounds.push_back({p.epoch, round});
        trace.events.push_back({p.id, LifecycleKind::kFixed, round});
      }
    }

    double sampled = 0.0;
    for (double r : rewards) sampled += r;
    if (realized > sampled + 1e-9) throw InvariantBreach("realized rewards exceed sampled rewards");
    if (!(outcome.round_regret >= 0.0)) throw InvariantBreach("negative instantaneous regret");
    cum += outcome.round_regret;
    total_reward += realized;

    if (round % options.decimate == 0 || round == horizon) {
      trace.rounds.push_back({round, static_cast<std::uint32_t>(players.size()), collisions, outcome.round_regret,
                              cum, realized});
      if (options.record_players) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < players.size(); ++i) {
          const auto& p = players[i];
          PlayerStep step{p.id, -1, false, p.phase, 0.0};
          if (c < choosers.size() && choosers[c] == i) {
            step.arm = static_cast<std::int32_t>(outcome.players[c].arm);
            step.collided = outcome.players[c].collided;
            step.reward = outcome.players[c].reward;
            ++c;
          }
          trace.steps.push_back(step);
        }
        trace.step_offsets.push_back(trace.steps.size());
      }
    }

    for (std::size_t e = first_event; e < next_event; ++e) {
      if (events[e].kind != EventKind::kLeave) continue;
      Rng leave_rng = make_stream(seed, StreamKind::kSchedule, round * 64 + (e - first_event));
      const std::uint32_t id = roster.leave(events[e].who, leave_rng);
      players.erase(std::find_if(players.begin(), players.end(), [id](const Player& p) { return p.id == id; }));
      trace.players[id].leave_round = round;
      trace.events.push_back({id, LifecycleKind::kLeave, round});
    }
  }

  if (next_event != events.size()) throw ConfigError("events outside the horizon or out of order");
  trace.total_regret = cum;
  trace.total_reward = total_reward;
  return trace;
}

RegretDecomposition decompose_dmc_regret(const Trace& trace, std::uint64_t t1) {
  if (trace.decimate != 1 || !trace.has_steps() || trace.rounds.size() != trace.horizon) {
    throw ContractViolation("decomposition needs an undecimated trace with player steps");
  }
  if (t1 == 0) throw ContractViolation("epoch length must be positive");
  RegretDecomposition d;
  auto epoch_entry = [&](std::uint64_t epoch) -> EpochRegret& {
    while (d.epochs.size() <= epoch) d.epochs.push_back({d.epochs.size(), 0, 0, 0, 0, 0});
    return d.epochs[epoch];
  };
  for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
    const auto& rec = trace.rounds[i];
    bool learning = false;
    bool entering = false;
    for (const auto& s : trace.steps_of(i)) {
      learning = learning || s.phase == Phase::kLearning || s.phase == Phase::kMusicalChairs;
      entering = entering || s.phase == Phase::kLateEntry;
    }
    auto& ep = epoch_entry((rec.round - 1) / t1);
    if (learning) {
      ep.learning_fixing += rec.regret_inst;
    } else if (entering) {
      ep.entering += rec.regret_inst;
    } else {
      ep.leaving += rec.regret_inst;
    }
  }
  for (const auto& e : trace.events) {
    if (e.kind == LifecycleKind::kEnter && e.player >= trace.initial_players) ++epoch_entry((e.round - 1) / t1).enters;
    if (e.kind == LifecycleKind::kLeave) ++epoch_entry((e.round - 1) / t1).leaves;
  }
  for (const auto& ep : d.epochs) {
    d.learning_fixing += ep.learning_fixing;
    d.entering += ep.entering;
    d.leaving += ep.leaving;
  }
  return d;
}

}  // namespace mcb
