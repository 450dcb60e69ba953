#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcb/schedule.hpp"

namespace mcb {

inline constexpr std::uint64_t kPresetT0 = 3000;

/// 6 players on 10 random Bernoulli arms (top-6 gap >= 0.05), T = 50000, MC with T0 = 3000.
Scenario preset_static();

enum class Theorem3Variant {
  kThirds,    // enter at ceil(T/3), first player leaves at ceil(2T/3), 4 arms with a 0.8 gap
  kMidpoint,  // enter at ceil(T/2), first player leaves at ceil(T/2 + fT)
};

Scenario preset_theorem3(std::uint64_t horizon = 500000, double f = 0.1,
                         Theorem3Variant variant = Theorem3Variant::kThirds);

/// 10 arms with a 0.7 gap after the 4th; a player enters every ceil(T^0.84) rounds until
/// there are 4, then the first player leaves.
Scenario preset_theorem3_general(std::uint64_t horizon = 500000);

/// 5 players on 10 random arms; every ceil(T^lambda) rounds a random player leaves, then
/// at the next multiple a new one enters.
Scenario preset_theorem4(std::uint64_t horizon = 500000, double lambda = 0.84);

/// ceil(T^lambda), computed so that exact integer powers are not pushed up by rounding.
std::uint64_t churn_spacing(std::uint64_t horizon, double lambda);

/// Epoch length used by the dynamic presets: t1_optimal with Tf = e^2 K, or T0 + 1 when T < T0.
std::uint64_t preset_epoch_length(std::uint64_t horizon, std::size_t k, double churn);

struct PresetOptions {
  std::optional<std::uint64_t> horizon;
  std::optional<double> lambda;
  std::optional<double> f;
};

std::vector<std::string> preset_names();

/// Throws ConfigError listing the known names when `name` is unknown.
Scenario make_preset(std::string_view name, const PresetOptions& options = {});

}  // namespace mcb
