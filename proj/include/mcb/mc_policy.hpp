#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mcb/policy.hpp"

namespace mcb {

/// Number of players implied by C collisions in T0 rounds of uniform play on K arms:
/// round(ln((T0 - C)/T0) / ln(1 - 1/K) + 1), K when C == T0, clamped to [1, K].
std::size_t estimate_players(std::uint64_t collisions, std::uint64_t t0, std::size_t k);

struct McState {
  Phase phase = Phase::kLearning;
  std::vector<std::uint64_t> observations;  // collision-free pulls per arm
  std::vector<double> reward_sums;
  std::uint64_t collisions = 0;
  std::uint64_t t0 = 0;
  std::uint64_t t1 = 0;
  std::vector<std::size_t> ranking;  // filled when learning ends
  std::size_t n_star = 0;            // 0 until learning ends
  std::optional<std::size_t> fixed_arm;
  std::uint64_t local_t = 0;

  /// s_i / o_i, or 0 for an arm never observed without collision.
  double empirical_mean(std::size_t arm) const;
};

/// Musical Chairs: T0 rounds of uniform exploration, then uniform picks among the estimated
/// top n_star arms until one pull is collision-free, then that arm forever.
class McPolicy final : public Policy {
 public:
  McPolicy(std::size_t k, std::uint64_t t0, std::uint64_t t1);

  /// Starts directly in the musical-chairs phase with a given ranking and player estimate.
  static McPolicy in_musical_chairs(std::size_t k, std::vector<std::size_t> ranking,
                                    std::size_t n_star, std::uint64_t t0, std::uint64_t t1);

  PolicyAction act(std::uint64_t global_t, Rng& rng) override;
  void observe(const Feedback& feedback) override;
  PolicyStatus status() const override;
  std::unique_ptr<Policy> clone() const override;

  const McState& state() const { return state_; }

 private:
  void finish_learning();

  std::size_t k_;
  McState state_;
  std::optional<std::size_t> pending_arm_;
};

/// Empirical ranking used at the end of learning: descending empirical mean, ties by index.
std::vector<std::size_t> rank_by_empirical_mean(const McState& state);

}  // namespace mcb
