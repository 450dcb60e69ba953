#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mcb/policy.hpp"
#include "mcb/schedule.hpp"

namespace mcb {

struct RunOptions {
  /// Keep every k-th round (and always the last). Totals stay exact regardless.
  std::uint64_t decimate = 1;
  /// Keep per-player steps for recorded rounds.
  bool record_players = true;
};

struct RoundRecord {
  std::uint64_t round = 0;
  std::uint32_t n_active = 0;
  std::uint32_t collisions = 0;  // players that collided this round
  double regret_inst = 0.0;
  double regret_cum = 0.0;
  double reward = 0.0;  // realized reward summed over players

  bool operator==(const RoundRecord&) const = default;
};

struct PlayerStep {
  std::uint32_t player = 0;
  std::int32_t arm = -1;  // -1 when the player sat the round out
  bool collided = false;
  Phase phase = Phase::kUniform;
  double reward = 0.0;

  bool operator==(const PlayerStep&) const = default;
};

enum class LifecycleKind { kEnter, kLeave, kFixed, kEpochReset };

std::string_view to_string(LifecycleKind kind);

struct LifecycleEvent {
  std::uint32_t player = 0;
  LifecycleKind kind = LifecycleKind::kEnter;
  std::uint64_t round = 0;

  bool operator==(const LifecycleEvent&) const = default;
};

struct EpochValue {
  std::uint64_t epoch = 0;
  std::uint64_t value = 0;

  bool operator==(const EpochValue&) const = default;
};

struct PlayerLifecycle {
  std::uint32_t player = 0;
  std::uint64_t enter_round = 0;
  std::optional<std::uint64_t> leave_round;
  std::vector<EpochValue> fix_rounds;  // round of fixing, per epoch
  std::vector<EpochValue> n_star;      // player-count estimate, per epoch

  bool operator==(const PlayerLifecycle&) const = default;
};

struct Trace {
  std::uint64_t horizon = 0;
  std::uint64_t seed = 0;
  std::uint64_t decimate = 1;
  std::size_t initial_players = 0;
  std::vector<RoundRecord> rounds;
  /// steps_of(i) covers rounds[i]; empty unless record_players was set.
  std::vector<PlayerStep> steps;
  std::vector<std::size_t> step_offsets;
  std::vector<LifecycleEvent> events;
  std::vector<PlayerLifecycle> players;  // indexed by player id
  double total_regret = 0.0;
  double total_reward = 0.0;

  std::span<const PlayerStep> steps_of(std::size_t record) const;
  bool has_steps() const { return !step_offsets.empty(); }

  bool operator==(const Trace&) const = default;
};

/// Runs one seed. Throws ConfigError if the scenario does not validate, InvariantBreach if a
/// runtime check fails.
Trace run(const Scenario& scenario, std::uint64_t seed, const RunOptions& options = {});

/// Same, with the arms already materialized (skips validation of the arm source).
Trace run(const Scenario& scenario, const ArmSet& arms, std::uint64_t seed, const RunOptions& options = {});

/// Splits a full DMC trace's regret by what each round was spent on. A round goes to
/// learning_fixing if any active player is learning or playing musical chairs, else to
/// entering if any player runs the late-entry heuristic, else to leaving (all players fixed,
/// so the only possible loss is an arm vacated by a departure).
struct EpochRegret {
  std::uint64_t epoch = 0;
  double learning_fixing = 0.0;
  double entering = 0.0;
  double leaving = 0.0;
  std::size_t enters = 0;
  std::size_t leaves = 0;
};

struct RegretDecomposition {
  double learning_fixing = 0.0;
  double entering = 0.0;
  double leaving = 0.0;
  std::vector<EpochRegret> epochs;
  double total() const { return learning_fixing + entering + leaving; }
};

/// Needs a trace recorded with decimate == 1 and record_players. Throws ContractViolation otherwise.
RegretDecomposition decompose_dmc_regret(const Trace& trace, std::uint64_t t1);

}  // namespace mcb
