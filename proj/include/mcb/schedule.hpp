#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mcb/env.hpp"
#include "mcb/policies.hpp"
#include "mcb/rng.hpp"

namespace mcb {

struct RandomMeans {
  std::size_t k = 0;
  double min_gap = 0.0;
  std::uint64_t seed = 0;
};

struct ArmsSpec {
  std::variant<std::vector<double>, RandomMeans> source;
  RewardModel model = RewardModel::kBernoulli;
};

enum class EventKind { kEnter, kLeave };

enum class LeaveSelector { kOldest, kNewest, kRandom, kId };

struct Selection {
  LeaveSelector how = LeaveSelector::kOldest;
  std::uint32_t id = 0;  // used with kId only
};

/// Enter takes effect at the start of `round`; Leave at its end (the player still plays it).
struct ScheduleEvent {
  std::uint64_t round = 0;  // 1-based, in [1, horizon]
  EventKind kind = EventKind::kEnter;
  Selection who;
};

/// Provenance for named presets; only used for validator warnings.
struct ScenarioMeta {
  std::string preset;
  std::optional<double> f;       // late-entry MEGA scenario: first player's overlap, as a fraction of T
  std::optional<double> lambda;  // churn exponent
};

struct Scenario {
  ArmsSpec arms;
  std::uint64_t horizon = 0;
  AlgorithmConfig algorithm;
  std::size_t initial_players = 0;
  std::vector<ScheduleEvent> events;
  std::vector<std::uint64_t> seeds;
  ScenarioMeta meta;
};

std::size_t arm_count(const ArmsSpec& arms);

/// Largest and smallest number of simultaneously active players over the schedule.
struct ActiveRange {
  std::size_t min = 0;
  std::size_t max = 0;
};
ActiveRange active_range(const Scenario& scenario);

/// Materializes the arm means. Random means use N = max simultaneous players for the gap.
ArmSet resolve_arms(const Scenario& scenario);

/// Smallest N-th/(N+1)-th gap over the active counts the schedule visits (N in [max(1,min), max]).
double min_active_gap(const ArmSet& arms, ActiveRange range);

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

ValidationReport validate(const Scenario& scenario);

/// Active players in order of entry. Ids are handed out sequentially from 0.
class Roster {
 public:
  explicit Roster(std::size_t initial);

  std::uint32_t enter();
  /// Removes and returns the selected player. Throws InvariantBreach if nobody matches.
  std::uint32_t leave(const Selection& who, Rng& rng);

  const std::vector<std::uint32_t>& active() const { return active_; }
  std::uint32_t next_id() const { return next_id_; }

 private:
  std::vector<std::uint32_t> active_;
  std::uint32_t next_id_ = 0;
};

}  // namespace mcb
