#include "mcb/mc_policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mcb/bounds.hpp"
#include "mcb/errors.hpp"

namespace mcb {

std::size_t estimate_players(std::uint64_t collisions, std::uint64_t t0, std::size_t k) {
  if (t0 == 0) throw InvalidInput("estimate_players needs T0 >= 1");
  if (k < 2) throw InvalidInput("estimate_players needs K >= 2");
  if (collisions > t0) throw InvalidInput("more collisions than rounds");
  if (collisions == t0) return k;
  const double p_hat = static_cast<double>(collisions) / static_cast<double>(t0);
  const double raw = bounds::invert_collision_probability(k, p_hat);
  const auto n = static_cast<long long>(std::llround(raw));
  return static_cast<std::size_t>(std::clamp<long long>(n, 1, static_cast<long long>(k)));
}

double McState::empirical_mean(std::size_t arm) const {
  return observations[arm] == 0 ? 0.0 : reward_sums[arm] / static_cast<double>(observations[arm]);
}

std::vector<std::size_t> rank_by_empirical_mean(const McState& state) {
  std::vector<std::size_t> order(state.observations.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&state](std::size_t a, std::size_t b) {
    return state.empirical_mean(a) > state.empirical_mean(b);
  });
  return order;
}

McPolicy::McPolicy(std::size_t k, std::uint64_t t0, std::uint64_t t1) : k_(k) {
  if (k < 2) throw InvalidInput("MC needs K >= 2");
  if (t0 == 0) throw InvalidInput("MC needs T0 >= 1");
  state_.observations.assign(k, 0);
  state_.reward_sums.assign(k, 0.0);
  state_.t0 = t0;
  state_.t1 = t1;
}

McPolicy McPolicy::in_musical_chairs(std::size_t k, std::vector<std::size_t> ranking,
                                     std::size_t n_star, std::uint64_t t0, std::uint64_t t1) {
  if (ranking.size() != k) throw InvalidInput("ranking must list every arm");
  if (n_star == 0 || n_star > k) throw InvalidInput("n_star must lie in [1, K]");
  McPolicy p(k, t0, t1);
  p.state_.ranking = std::move(ranking);
  p.state_.n_star = n_star;
  p.state_.phase = Phase::kMusicalChairs;
  p.state_.local_t = t0;
  return p;
}

void McPolicy::finish_learning() {
  state_.ranking = rank_by_empirical_mean(state_);
  state_.n_star = estimate_players(state_.collisions, state_.t0, k_);
  state_.phase = Phase::kMusicalChairs;
}

PolicyAction McPolicy::act(std::uint64_t /*global_t*/, Rng& rng) {
  if (pending_arm_) throw ContractViolation("MC: act() called before feedback for the last pull");
  if (state_.phase == Phase::kLearning && state_.local_t >= state_.t0) finish_learning();

  std::size_t arm = 0;
  switch (state_.phase) {
    case Phase::kLearning:
      arm = uniform_index(rng, k_);
      break;
    case Phase::kMusicalChairs:
      arm = state_.ranking[uniform_index(rng, state_.n_star)];
      break;
    case Phase::kFixed:
      arm = *state_.fixed_arm;
      break;
    default:
      throw ContractViolation("MC: unexpected phase");
  }
  pending_arm_ = arm;
  return {arm};
}

void McPolicy::observe(const Feedback& feedback) {
  if (!pending_arm_) throw ContractViolation("MC: feedback without a pull");
  const std::size_t arm = *pending_arm_;
  pending_arm_.reset();
  switch (state_.phase) {
    case Phase::kLearning:
      if (feedback.collided) {
        ++state_.collisions;
      } else {
        ++state_.observations[arm];
        state_.reward_sums[arm] += feedback.reward;
      }
      break;
    case Phase::kMusicalChairs:
      if (!feedback.collided) {
        state_.phase = Phase::kFixed;
        state_.fixed_arm = arm;
      }
      break;
    default:
      break;
  }
  ++state_.local_t;
}

PolicyStatus McPolicy::status() const {
  PolicyStatus s;
  s.phase = state_.phase;
  s.fixed_arm = state_.fixed_arm;
  if (state_.n_star != 0) s.n_star = state_.n_star;
  return s;
}

std::unique_ptr<Policy> McPolicy::clone() const { return std::make_unique<McPolicy>(*this); }

}  // namespace mcb
