#include "mcb/env.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mcb/errors.hpp"

namespace mcb {

ArmSet::ArmSet(std::vector<double> means, RewardModel model)
    : means_(std::move(means)), model_(model) {
  if (means_.size() < 2) throw InvalidInput("an arm set needs at least 2 arms");
  for (double m : means_) {
    if (!(m >= 0.0 && m <= 1.0)) throw InvalidInput("arm mean outside [0,1]: " + std::to_string(m));
  }
  ranking_.resize(means_.size());
  std::iota(ranking_.begin(), ranking_.end(), std::size_t{0});
  std::stable_sort(ranking_.begin(), ranking_.end(),
                   [this](std::size_t a, std::size_t b) { return means_[a] > means_[b]; });
  rank_of_.resize(means_.size());
  for (std::size_t r = 0; r < ranking_.size(); ++r) rank_of_[ranking_[r]] = r;
}

double ArmSet::top_sum(std::size_t n) const {
  double s = 0.0;
  for (std::size_t r = 0; r < n; ++r) s += means_[ranking_[r]];
  return s;
}

double ArmSet::gap_after(std::size_t n) const {
  if (n == 0 || n >= size()) throw InvalidInput("gap_after needs 1 <= n < K");
  return means_[ranking_[n - 1]] - means_[ranking_[n]];
}

ArmSet random_arms(std::size_t k, double min_gap, std::size_t n_lo, std::size_t n_hi,
                   std::uint64_t seed, RewardModel model) {
  if (k < 2) throw InvalidInput("random_arms needs k >= 2");
  if (n_lo == 0) n_lo = 1;
  if (n_hi >= k) throw InvalidInput("random_arms needs the player count below k");
  if (!(min_gap >= 0.0) || min_gap * static_cast<double>(n_hi - n_lo + 1) >= 1.0) {
    throw InvalidInput("random_arms: min_gap unsatisfiable");
  }
  Rng rng = make_stream(seed, StreamKind::kArms, 0);
  std::vector<double> means(k);
  for (;;) {
    for (auto& m : means) m = uniform01(rng);
    ArmSet arms(means, model);
    bool ok = true;
    for (std::size_t n = n_lo; n <= n_hi && ok; ++n) ok = arms.gap_after(n) >= min_gap;
    if (ok) return arms;
  }
}

void sample_rewards(const ArmSet& arms, Rng& rng, std::span<double> out) {
  if (arms.model() == RewardModel::kDeterministic) {
    std::copy(arms.means().begin(), arms.means().end(), out.begin());
    return;
  }
  for (std::size_t i = 0; i < arms.size(); ++i) out[i] = bernoulli(rng, arms.mean(i)) ? 1.0 : 0.0;
}

std::vector<double> sample_rewards(const ArmSet& arms, Rng& rng) {
  std::vector<double> out(arms.size());
  sample_rewards(arms, rng, out);
  return out;
}

double per_round_regret(const ArmSet& arms, std::span<const PlayerOutcome> players,
                        std::size_t active_count) {
  const std::size_t k = arms.size();
  if (active_count > k) throw InvalidInput("active player count exceeds arm count");
  // Secured arms are exactly the singly-occupied ones. Both sides are summed in rank order so
  // that, arm for arm, the missing top arms dominate the secured non-top arms; floating-point
  // addition is monotone, so the difference can never come out negative.
  std::vector<char> secured(k, 0);
  for (const auto& p : players) {
    if (!p.collided) secured[p.arm] = 1;
  }
  double missing = 0.0;
  double extra = 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    const std::size_t arm = arms.ranking()[r];
    if (r < active_count && !secured[arm]) missing += arms.mean(arm);
    if (r >= active_count && secured[arm]) extra += arms.mean(arm);
  }
  return missing - extra;
}

void resolve_round_into(const ArmSet& arms, std::span<const Choice> choices,
                        std::span<const double> rewards, std::size_t active_count,
                        std::span<std::uint32_t> arm_counts, RoundOutcome& out) {
  const std::size_t k = arms.size();
  if (active_count > k) throw InvalidInput("active player count exceeds arm count");
  if (choices.size() > active_count) throw InvalidInput("more choices than active players");
  for (const auto& c : choices) {
    if (c.arm >= k) throw InvalidInput("arm index out of range: " + std::to_string(c.arm));
    ++arm_counts[c.arm];
  }
  out.players.resize(choices.size());
  for (std::size_t i = 0; i < choices.size(); ++i) {
    const auto& c = choices[i];
    const bool collided = arm_counts[c.arm] >= 2;
    out.players[i] = PlayerOutcome{c.player, c.arm, collided, collided ? 0.0 : rewards[c.arm]};
  }
  for (const auto& c : choices) arm_counts[c.arm] = 0;
  out.round_regret = per_round_regret(arms, out.players, active_count);
}

RoundOutcome resolve_round(const ArmSet& arms, std::span<const Choice> choices,
                           std::span<const double> rewards, std::size_t active_count) {
  std::vector<std::uint32_t> ids;
  ids.reserve(choices.size());
  for (const auto& c : choices) ids.push_back(c.player);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw InvalidInput("duplicate player id in one round");
  }
  if (rewards.size() != arms.size()) throw InvalidInput("one reward per arm expected");
  std::vector<std::uint32_t> counts(arms.size(), 0);
  RoundOutcome out;
  resolve_round_into(arms, choices, rewards, active_count, counts, out);
  return out;
}

RoundOutcome resolve_round(const ArmSet& arms, std::span<const Choice> choices,
                           std::span<const double> rewards) {
  return resolve_round(arms, choices, rewards, choices.size());
}

}  // namespace mcb
