#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "mcb/dmc_policy.hpp"
#include "mcb/late_entry.hpp"
#include "mcb/mc_policy.hpp"
#include "mcb/mega_policy.hpp"
#include "mcb/policy.hpp"

namespace mcb {

/// Uniform over all K arms every round.
class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::size_t k) : k_(k) {}

  PolicyAction act(std::uint64_t /*global_t*/, Rng& rng) override { return {uniform_index(rng, k_)}; }
  void observe(const Feedback&) override {}
  PolicyStatus status() const override { return {}; }
  std::unique_ptr<Policy> clone() const override { return std::make_unique<RandomPolicy>(*this); }

 private:
  std::size_t k_;
};

enum class AlgorithmKind { kMc, kDmc, kMega, kRandom };

std::string_view to_string(AlgorithmKind kind);
/// Accepts "mc", "dmc", "mega", "random" (case-insensitive). Throws ConfigError otherwise.
AlgorithmKind parse_algorithm(std::string_view name);

/// Parameters for every algorithm; each reads only the fields it needs, so one block can
/// drive MC, DMC and MEGA runs of the same scenario.
struct AlgorithmConfig {
  AlgorithmKind kind = AlgorithmKind::kMc;
  std::optional<std::uint64_t> t0;
  std::optional<std::uint64_t> t1;  // DMC epoch length; MC uses the horizon when unset
  std::optional<MegaParams> mega;
};

/// Returns an empty string when `config` can build policies, else a description of the problem.
std::string check_algorithm(const AlgorithmConfig& config);

std::unique_ptr<Policy> make_policy(const AlgorithmConfig& config, std::size_t k,
                                    std::uint64_t horizon, std::uint64_t entry_global_t);

}  // namespace mcb
