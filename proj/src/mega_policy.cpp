#include "mcb/mega_policy.hpp"

#include <cmath>

#include "mcb/errors.hpp"

namespace mcb {

void validate(const MegaParams& params) {
  if (!(params.c > 0.0)) throw ConfigError("MEGA: c must be positive");
  if (!(params.d > 0.0 && params.d < 1.0)) throw ConfigError("MEGA: d must lie in (0,1)");
  if (!(params.alpha >= 0.0 && params.alpha < 1.0)) throw ConfigError("MEGA: alpha must lie in [0,1)");
  if (!(params.beta > 0.0 && params.beta < 1.0)) throw ConfigError("MEGA: beta must lie in (0,1)");
  if (!(params.p0 > 0.0 && params.p0 < 1.0)) throw ConfigError("MEGA: p0 must lie in (0,1)");
}

double MegaState::empirical_mean(std::size_t arm) const {
  return counts[arm] == 0 ? 0.0 : reward_sums[arm] / static_cast<double>(counts[arm]);
}

MegaPolicy::MegaPolicy(std::size_t k, MegaParams params) : k_(k), params_(params) {
  if (k < 2) throw InvalidInput("MEGA needs K >= 2");
  validate(params_);
  const double kk = static_cast<double>(k);
  explore_coef_ = params_.c * kk * kk / (params_.d * params_.d * (kk - 1.0));
  state_.counts.assign(k, 0);
  state_.reward_sums.assign(k, 0.0);
  state_.unavailable_until.assign(k, 0);
  state_.p = params_.p0;
}

double MegaPolicy::exploration_probability(std::uint64_t t) const {
  const double eps = explore_coef_ / static_cast<double>(t);
  return eps < 1.0 ? eps : 1.0;
}

std::optional<std::size_t> MegaPolicy::select(Rng& rng) {
  const std::uint64_t t = state_.local_t;
  std::size_t available = 0;
  for (std::size_t i = 0; i < k_; ++i) available += t >= state_.unavailable_until[i];
  if (available == 0) {
    if (params_.no_arm == NoArmBehavior::kRandomArm) return uniform_index(rng, k_);
    return std::nullopt;
  }
  if (bernoulli(rng, exploration_probability(t))) {
    std::size_t pick = uniform_index(rng, available);
    for (std::size_t i = 0; i < k_; ++i) {
      if (t < state_.unavailable_until[i]) continue;
      if (pick-- == 0) return i;
    }
  }
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < k_; ++i) {
    if (t < state_.unavailable_until[i]) continue;
    if (!best || state_.empirical_mean(i) > state_.empirical_mean(*best)) best = i;
  }
  return best;
}

PolicyAction MegaPolicy::act(std::uint64_t /*global_t*/, Rng& rng) {
  if (pending_) throw ContractViolation("MEGA: act() called before feedback for the last pull");
  const std::uint64_t t = ++state_.local_t;

  std::optional<std::size_t> arm;
  bool persisted = false;
  if (state_.prev_collided && state_.prev_arm) {
    if (bernoulli(rng, state_.p)) {
      arm = state_.prev_arm;
      persisted = true;
    } else {
      const auto window = static_cast<std::uint64_t>(std::ceil(std::pow(static_cast<double>(t), params_.beta)));
      state_.unavailable_until[*state_.prev_arm] = t + std::uniform_int_distribution<std::uint64_t>(0, window)(rng);
    }
  }
  if (!persisted) arm = select(rng);

  // Persistence grows on each collision-free repeat of the same arm and restarts on a switch.
  // A persisted collision leaves it unchanged.
  if (!arm || arm != state_.prev_arm) {
    state_.p = params_.p0;
  } else if (!state_.prev_collided) {
    state_.p = state_.p * params_.alpha + (1.0 - params_.alpha);
  }

  state_.current_arm = arm;
  state_.prev_collided = false;
  if (!arm) state_.prev_arm.reset();
  pending_ = arm.has_value();
  return {arm};
}

void MegaPolicy::observe(const Feedback& feedback) {
  if (!pending_) throw ContractViolation("MEGA: feedback without a pull");
  pending_ = false;
  const std::size_t arm = *state_.current_arm;
  if (!feedback.collided) {
    ++state_.counts[arm];
    state_.reward_sums[arm] += feedback.reward;
  }
  state_.prev_collided = feedback.collided;
  state_.prev_arm = arm;
}

}  // namespace mcb
