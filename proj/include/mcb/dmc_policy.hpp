#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>

#include "mcb/late_entry.hpp"
#include "mcb/mc_policy.hpp"

namespace mcb {

/// Dynamic Musical Chairs: MC restarted at every multiple of T1 on the shared global clock.
/// A player created away from an epoch boundary runs the late-entry heuristic until the next one.
class DmcPolicy final : public Policy {
 public:
  /// `entry_global_t` is the 0-based global round of the player's first act().
  DmcPolicy(std::size_t k, std::uint64_t t0, std::uint64_t t1, std::uint64_t entry_global_t);

  PolicyAction act(std::uint64_t global_t, Rng& rng) override;
  void observe(const Feedback& feedback) override;
  PolicyStatus status() const override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<DmcPolicy>(*this); }

  std::uint64_t epoch() const { return epoch_; }
  bool in_late_entry() const { return std::holds_alternative<LateEntryPolicy>(inner_); }
  /// Null unless the player is running MC in the current epoch.
  const McPolicy* mc() const { return std::get_if<McPolicy>(&inner_); }

 private:
  std::size_t k_;
  std::uint64_t t0_;
  std::uint64_t t1_;
  std::uint64_t epoch_;
  bool pending_ = false;
  std::variant<LateEntryPolicy, McPolicy> inner_;
};

}  // namespace mcb
