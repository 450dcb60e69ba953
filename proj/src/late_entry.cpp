#include "mcb/late_entry.hpp"

#include "mcb/errors.hpp"

namespace mcb {

double LateEntryState::empirical_mean(std::size_t arm) const {
  return clean_pulls[arm] == 0 ? 1.0 : reward_sums[arm] / static_cast<double>(clean_pulls[arm]);
}

double LateEntryState::clean_rate(std::size_t arm) const {
  return pulls[arm] == 0 ? 1.0
                         : static_cast<double>(clean_pulls[arm]) / static_cast<double>(pulls[arm]);
}

PolicyAction LateEntryPolicy::act(std::uint64_t /*global_t*/, Rng& rng) {
  if (pending_arm_) throw ContractViolation("late entry: act() called before feedback");
  const std::size_t k = state_.pulls.size();
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) total += state_.weight(i);

  std::size_t arm = 0;
  if (total <= 0.0) {
    arm = uniform_index(rng, k);
  } else {
    const double u = uniform01(rng) * total;
    double acc = 0.0;
    arm = k;
    for (std::size_t i = 0; i < k; ++i) {
      const double w = state_.weight(i);
      if (w <= 0.0) continue;
      acc += w;
      arm = i;
      if (u < acc) break;
    }
  }
  pending_arm_ = arm;
  return {arm};
}

void LateEntryPolicy::observe(const Feedback& feedback) {
  if (!pending_arm_) throw ContractViolation("late entry: feedback without a pull");
  const std::size_t arm = *pending_arm_;
  pending_arm_.reset();
  ++state_.pulls[arm];
  if (!feedback.collided) {
    ++state_.clean_pulls[arm];
    state_.reward_sums[arm] += feedback.reward;
  }
}

}  // namespace mcb
