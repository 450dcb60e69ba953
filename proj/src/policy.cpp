#include <algorithm>
#include <cctype>
#include <string>

#include "mcb/errors.hpp"
#include "mcb/policies.hpp"

namespace mcb {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::kLearning: return "learning";
    case Phase::kMusicalChairs: return "musical_chairs";
    case Phase::kFixed: return "fixed";
    case Phase::kLateEntry: return "late_entry";
    case Phase::kEpsilonGreedy: return "epsilon_greedy";
    case Phase::kUniform: return "uniform";
  }
  return "unknown";
}

std::string_view to_string(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::kMc: return "mc";
    case AlgorithmKind::kDmc: return "dmc";
    case AlgorithmKind::kMega: return "mega";
    case AlgorithmKind::kRandom: return "random";
  }
  return "unknown";
}

AlgorithmKind parse_algorithm(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "mc") return AlgorithmKind::kMc;
  if (lower == "dmc") return AlgorithmKind::kDmc;
  if (lower == "mega") return AlgorithmKind::kMega;
  if (lower == "random") return AlgorithmKind::kRandom;
  throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected mc, dmc, mega or random)");
}

std::string check_algorithm(const AlgorithmConfig& config) {
  switch (config.kind) {
    case AlgorithmKind::kMc:
      if (!config.t0 || *config.t0 == 0) return "MC needs params.t0 >= 1";
      return {};
    case AlgorithmKind::kDmc:
      if (!config.t0 || *config.t0 == 0) return "DMC needs params.t0 >= 1";
      if (!config.t1) return "DMC needs params.t1";
      if (*config.t1 <= *config.t0) return "DMC needs T1 > T0";
      return {};
    case AlgorithmKind::kMega:
      if (!config.mega) return "MEGA needs params c, d, alpha and p0";
      try {
        validate(*config.mega);
      } catch (const ConfigError& e) {
        return e.what();
      }
      return {};
    case AlgorithmKind::kRandom:
      return {};
  }
  return "unknown algorithm";
}

std::unique_ptr<Policy> make_policy(const AlgorithmConfig& config, std::size_t k,
                                    std::uint64_t horizon, std::uint64_t entry_global_t) {
  if (auto problem = check_algorithm(config); !problem.empty()) throw ConfigError(problem);
  switch (config.kind) {
    case AlgorithmKind::kMc:
      return std::make_unique<McPolicy>(k, *config.t0, config.t1.value_or(horizon));
    case AlgorithmKind::kDmc:
      return std::make_unique<DmcPolicy>(k, *config.t0, *config.t1, entry_global_t);
    case AlgorithmKind::kMega:
      return std::make_unique<MegaPolicy>(k, *config.mega);
    case AlgorithmKind::kRandom:
      return std::make_unique<RandomPolicy>(k);
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace mcb
