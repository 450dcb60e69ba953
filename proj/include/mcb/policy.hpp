#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "mcb/rng.hpp"

namespace mcb {

/// Arm to pull this round; empty when the player sits the round out.
struct PolicyAction {
  std::optional<std::size_t> arm;
};

/// What a player learns about its own pull at the end of a round.
struct Feedback {
  bool collided = false;
  double reward = 0.0;
};

enum class Phase : std::uint8_t {
  kLearning,
  kMusicalChairs,
  kFixed,
  kLateEntry,
  kEpsilonGreedy,
  kUniform,
};

std::string_view to_string(Phase phase);

struct PolicyStatus {
  Phase phase = Phase::kUniform;
  std::optional<std::size_t> fixed_arm;
  std::optional<std::size_t> n_star;
  /// Epoch counter for epoch-based policies, 0 otherwise.
  std::uint64_t epoch = 0;
};

/// One player's private decision state. A policy sees nothing but its own construction
/// parameters, its own actions and feedback, the global round index and its own rng stream.
///
/// Protocol: act() once per round, then observe() exactly once if act() returned an arm.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual PolicyAction act(std::uint64_t global_t, Rng& rng) = 0;
  virtual void observe(const Feedback& feedback) = 0;
  virtual PolicyStatus status() const = 0;
  virtual std::unique_ptr<Policy> clone() const = 0;
};

}  // namespace mcb
