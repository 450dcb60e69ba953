#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcb/rng.hpp"

namespace mcb {

enum class RewardModel { kBernoulli, kDeterministic };

/// K arms with fixed means in [0,1]. Immutable once built.
class ArmSet {
 public:
  ArmSet(std::vector<double> means, RewardModel model);

  std::size_t size() const { return means_.size(); }
  double mean(std::size_t arm) const { return means_[arm]; }
  const std::vector<double>& means() const { return means_; }
  RewardModel model() const { return model_; }

  /// Arm indices sorted by mean, descending; ties go to the lower index.
  const std::vector<std::size_t>& ranking() const { return ranking_; }
  /// Position of `arm` in ranking().
  std::size_t rank_of(std::size_t arm) const { return rank_of_[arm]; }
  bool in_top(std::size_t arm, std::size_t n) const { return rank_of_[arm] < n; }
  double top_sum(std::size_t n) const;
  /// mean of the n-th best arm minus mean of the (n+1)-th best arm (1-based n, n < K).
  double gap_after(std::size_t n) const;

 private:
  std::vector<double> means_;
  RewardModel model_;
  std::vector<std::size_t> ranking_;
  std::vector<std::size_t> rank_of_;
};

/// Uniform [0,1] means, resampled until every gap_after(n) for n in [n_lo, n_hi] is >= min_gap.
ArmSet random_arms(std::size_t k, double min_gap, std::size_t n_lo, std::size_t n_hi,
                   std::uint64_t seed, RewardModel model);

/// One reward per arm for the current round.
std::vector<double> sample_rewards(const ArmSet& arms, Rng& rng);
void sample_rewards(const ArmSet& arms, Rng& rng, std::span<double> out);

struct Choice {
  std::uint32_t player = 0;
  std::size_t arm = 0;
};

struct PlayerOutcome {
  std::uint32_t player = 0;
  std::size_t arm = 0;
  bool collided = false;
  double reward = 0.0;
};

struct RoundOutcome {
  std::vector<PlayerOutcome> players;
  double round_regret = 0.0;
};

/// Resolves simultaneous choices. `active_count` is N_t; it may exceed choices.size() when
/// some active players abstain. Throws InvalidInput on a bad arm, duplicate player or N_t > K.
RoundOutcome resolve_round(const ArmSet& arms, std::span<const Choice> choices,
                           std::span<const double> rewards, std::size_t active_count);
RoundOutcome resolve_round(const ArmSet& arms, std::span<const Choice> choices,
                           std::span<const double> rewards);

/// Scratch-buffer variant for hot loops. `arm_counts` must have K entries; it is left zeroed.
void resolve_round_into(const ArmSet& arms, std::span<const Choice> choices,
                        std::span<const double> rewards, std::size_t active_count,
                        std::span<std::uint32_t> arm_counts, RoundOutcome& out);

/// Sum of the top-N_t means minus the means secured by collision-free players.
/// Only exact means enter; realized rewards never do.
double per_round_regret(const ArmSet& arms, std::span<const PlayerOutcome> players,
                        std::size_t active_count);

}  // namespace mcb
