#include "mcb/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mcb/bounds.hpp"
#include "mcb/errors.hpp"

namespace mcb {

namespace {

constexpr double kMegaC = 0.1;
constexpr double kMegaAlpha = 0.5;
constexpr double kMegaP0 = 0.6;

std::vector<std::uint64_t> seed_range(std::uint64_t n) {
  std::vector<std::uint64_t> seeds(n);
  std::iota(seeds.begin(), seeds.end(), 1);
  return seeds;
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

// d is the smallest gap the players will actually face.
MegaParams mega_for(const Scenario& s) {
  MegaParams p;
  p.c = kMegaC;
  p.d = min_active_gap(resolve_arms(s), active_range(s));
  p.alpha = kMegaAlpha;
  p.p0 = kMegaP0;
  return p;
}

ScheduleEvent enter_at(std::uint64_t round) { return {round, EventKind::kEnter, {}}; }

ScheduleEvent leave_at(std::uint64_t round, Selection who) { return {round, EventKind::kLeave, who}; }

}  // namespace

std::uint64_t churn_spacing(std::uint64_t horizon, double lambda) {
  const double x = std::pow(static_cast<double>(horizon), lambda);
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, r)) return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::ceil(x));
}

std::uint64_t preset_epoch_length(std::uint64_t horizon, std::size_t k, double churn) {
  if (horizon <= kPresetT0) return kPresetT0 + 1;
  return bounds::t1_optimal(static_cast<double>(horizon), static_cast<double>(kPresetT0),
                            bounds::fixing_time_bound(static_cast<double>(k)), churn);
}

Scenario preset_static() {
  Scenario s;
  s.arms.source = RandomMeans{10, 0.05, 1};
  s.arms.model = RewardModel::kBernoulli;
  s.horizon = 50000;
  s.initial_players = 6;
  s.seeds = seed_range(20);
  s.meta.preset = "static";
  s.algorithm.kind = AlgorithmKind::kMc;
  s.algorithm.t0 = kPresetT0;
  s.algorithm.mega = mega_for(s);
  return s;
}

Scenario preset_theorem3(std::uint64_t horizon, double f, Theorem3Variant variant) {
  if (horizon < 3) throw ConfigError("theorem3 preset needs a horizon of at least 3");
  Scenario s;
  s.arms.source = std::vector<double>{0.95, 0.9, 0.1, 0.05};
  s.arms.model = RewardModel::kDeterministic;
  s.horizon = horizon;
  s.initial_players = 1;
  s.seeds = seed_range(20);
  const Selection first{LeaveSelector::kId, 0};
  if (variant == Theorem3Variant::kThirds) {
    s.meta.preset = "theorem3";
    s.meta.f = 1.0 / 3.0;
    s.events = {enter_at(ceil_div(horizon, 3)), leave_at(ceil_div(2 * horizon, 3), first)};
  } else {
    if (!(f > 0.0 && f < 0.5)) throw ConfigError("theorem3-proof preset needs f in (0, 0.5)");
    s.meta.preset = "theorem3-proof";
    s.meta.f = f;
    const double half = static_cast<double>(horizon) / 2.0;
    const auto enter = ceil_div(horizon, 2);
    // Nudge down before ceil so that f*T landing on an integer is not bumped by rounding.
    auto leave = static_cast<std::uint64_t>(std::ceil(half + f * static_cast<double>(horizon) - 1e-9));
    leave = std::clamp<std::uint64_t>(leave, enter, horizon);
    s.events = {enter_at(enter), leave_at(leave, first)};
  }
  s.algorithm.kind = AlgorithmKind::kDmc;
  s.algorithm.t0 = kPresetT0;
  s.algorithm.t1 = (variant == Theorem3Variant::kThirds && horizon == 500000)
                       ? 34757
                       : preset_epoch_length(horizon, 4, 2.0);
  s.algorithm.mega = mega_for(s);
  return s;
}

Scenario preset_theorem3_general(std::uint64_t horizon) {
  Scenario s;
  s.arms.source = std::vector<double>{0.96, 0.94, 0.92, 0.9, 0.2, 0.15, 0.1, 0.08, 0.05, 0.02};
  s.arms.model = RewardModel::kDeterministic;
  s.horizon = horizon;
  s.initial_players = 1;
  s.seeds = seed_range(20);
  s.meta.preset = "theorem3-general";
  const std::uint64_t spacing = churn_spacing(horizon, 0.84);
  for (std::uint64_t i = 1; i <= 3 && i * spacing <= horizon; ++i) s.events.push_back(enter_at(i * spacing));
  if (4 * spacing <= horizon) s.events.push_back(leave_at(4 * spacing, {LeaveSelector::kId, 0}));
  s.algorithm.kind = AlgorithmKind::kDmc;
  s.algorithm.t0 = kPresetT0;
  s.algorithm.t1 = horizon == 500000 ? 167845
                                     : preset_epoch_length(horizon, 10, static_cast<double>(s.events.size()));
  s.algorithm.mega = mega_for(s);
  return s;
}

Scenario preset_theorem4(std::uint64_t horizon, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError("theorem4 preset needs lambda in (0, 1)");
  Scenario s;
  s.arms.source = RandomMeans{10, 0.05, 1};
  s.arms.model = RewardModel::kBernoulli;
  s.horizon = horizon;
  s.initial_players = 5;
  s.seeds = seed_range(20);
  s.meta.preset = "theorem4";
  s.meta.lambda = lambda;
  const std::uint64_t spacing = churn_spacing(horizon, lambda);
  for (std::uint64_t i = 1; i * spacing <= horizon; ++i) {
    if (i % 2 == 1) {
      s.events.push_back(leave_at(i * spacing, {LeaveSelector::kRandom, 0}));
    } else {
      s.events.push_back(enter_at(i * spacing));
    }
  }
  s.algorithm.kind = AlgorithmKind::kDmc;
  s.algorithm.t0 = kPresetT0;
  if (horizon == 500000) {
    s.algorithm.t1 = 32482;
  } else if (horizon == 6000000) {
    s.algorithm.t1 = 119921;
  } else {
    s.algorithm.t1 = preset_epoch_length(horizon, 10, static_cast<double>(std::max<std::size_t>(s.events.size(), 1)));
  }
  s.algorithm.mega = mega_for(s);
  return s;
}

std::vector<std::string> preset_names() {
  return {"static", "theorem3", "theorem3-proof", "theorem3-general", "theorem4"};
}

Scenario make_preset(std::string_view name, const PresetOptions& o) {
  Scenario s;
  if (name == "static") {
    s = preset_static();
    if (o.horizon) s.horizon = *o.horizon;
    return s;
  }
  if (name == "theorem3") return preset_theorem3(o.horizon.value_or(500000), o.f.value_or(0.1));
  if (name == "theorem3-proof") {
    return preset_theorem3(o.horizon.value_or(500000), o.f.value_or(0.1), Theorem3Variant::kMidpoint);
  }
  if (name == "theorem3-general") return preset_theorem3_general(o.horizon.value_or(500000));
  if (name == "theorem4") return preset_theorem4(o.horizon.value_or(500000), o.lambda.value_or(0.84));
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown preset '" + std::string(name) + "'; available presets: " + known);
}

}  // namespace mcb
