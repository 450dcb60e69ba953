#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mcb/policy.hpp"

namespace mcb {

enum class NoArmBehavior { kAbstain, kRandomArm };

struct MegaParams {
  double c = 0.0;
  double d = 0.0;
  double alpha = 0.0;
  double p0 = 0.0;
  double beta = 2.0 / 3.0;
  NoArmBehavior no_arm = NoArmBehavior::kAbstain;
};

/// Throws ConfigError unless c > 0, d in (0,1), alpha in [0,1), beta in (0,1), p0 in (0,1).
void validate(const MegaParams& params);

struct MegaState {
  std::vector<std::uint64_t> counts;  // collision-free pulls per arm
  std::vector<double> reward_sums;
  /// Arm i is excluded while local_t < unavailable_until[i].
  std::vector<std::uint64_t> unavailable_until;
  std::optional<std::size_t> current_arm;  // arm pulled in the round being played
  std::optional<std::size_t> prev_arm;     // arm pulled in the previous round
  bool prev_collided = false;
  double p = 0.0;
  std::uint64_t local_t = 0;  // rounds played so far, counting the current one

  double empirical_mean(std::size_t arm) const;
};

/// epsilon-greedy with ALOHA-style collision avoidance.
class MegaPolicy final : public Policy {
 public:
  MegaPolicy(std::size_t k, MegaParams params);

  /// min(1, c K^2 / (d^2 (K-1) t)) for player-local round t >= 1.
  double exploration_probability(std::uint64_t t) const;

  PolicyAction act(std::uint64_t global_t, Rng& rng) override;
  void observe(const Feedback& feedback) override;
  PolicyStatus status() const override { return {Phase::kEpsilonGreedy, std::nullopt, std::nullopt, 0}; }
  std::unique_ptr<Policy> clone() const override { return std::make_unique<MegaPolicy>(*this); }

  const MegaState& state() const { return state_; }
  const MegaParams& params() const { return params_; }

 private:
  std::optional<std::size_t> select(Rng& rng);

  std::size_t k_;
  MegaParams params_;
  double explore_coef_;
  MegaState state_;
  bool pending_ = false;
};

}  // namespace mcb
