#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mcb/policy.hpp"

namespace mcb {

/// Heuristic for a DMC player who arrives mid-epoch: pick arm i with probability
/// proportional to (empirical mean of i) x (empirical collision-free rate of i), both
/// starting at 1 before the arm has been tried.
struct LateEntryState {
  std::vector<std::uint64_t> pulls;
  std::vector<std::uint64_t> clean_pulls;
  std::vector<double> reward_sums;

  explicit LateEntryState(std::size_t k) : pulls(k, 0), clean_pulls(k, 0), reward_sums(k, 0.0) {}

  double empirical_mean(std::size_t arm) const;
  double clean_rate(std::size_t arm) const;
  double weight(std::size_t arm) const { return empirical_mean(arm) * clean_rate(arm); }
};

class LateEntryPolicy final : public Policy {
 public:
  explicit LateEntryPolicy(std::size_t k) : state_(k) {}
  explicit LateEntryPolicy(LateEntryState state) : state_(std::move(state)) {}

  PolicyAction act(std::uint64_t global_t, Rng& rng) override;
  void observe(const Feedback& feedback) override;
  PolicyStatus status() const override { return {Phase::kLateEntry, std::nullopt, std::nullopt, 0}; }
  std::unique_ptr<Policy> clone() const override { return std::make_unique<LateEntryPolicy>(*this); }

  const LateEntryState& state() const { return state_; }

 private:
  LateEntryState state_;
  std::optional<std::size_t> pending_arm_;
};

}  // namespace mcb
