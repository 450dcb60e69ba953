#include "mcb/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mcb/bounds.hpp"
#include "mcb/errors.hpp"

namespace mcb {

std::size_t arm_count(const ArmsSpec& arms) {
  if (const auto* means = std::get_if<std::vector<double>>(&arms.source)) return means->size();
  return std::get<RandomMeans>(arms.source).k;
}

ActiveRange active_range(const Scenario& scenario) {
  long long n = static_cast<long long>(scenario.initial_players);
  long long lo = n;
  long long hi = n;
  std::size_t i = 0;
  const auto& ev = scenario.events;
  while (i < ev.size()) {
    const std::uint64_t round = ev[i].round;
    std::size_t j = i;
    for (; j < ev.size() && ev[j].round == round; ++j) {
      if (ev[j].kind == EventKind::kEnter) ++n;
    }
    hi = std::max(hi, n);
    for (std::size_t m = i; m < j; ++m) {
      if (ev[m].kind == EventKind::kLeave) --n;
    }
    lo = std::min(lo, n);
    i = j;
  }
  return {static_cast<std::size_t>(std::max(lo, 0LL)), static_cast<std::size_t>(std::max(hi, 0LL))};
}

ArmSet resolve_arms(const Scenario& scenario) {
  if (const auto* means = std::get_if<std::vector<double>>(&scenario.arms.source)) {
    return ArmSet(*means, scenario.arms.model);
  }
  const auto& spec = std::get<RandomMeans>(scenario.arms.source);
  const std::size_t n = std::clamp<std::size_t>(active_range(scenario).max, 1, spec.k - 1);
  return random_arms(spec.k, spec.min_gap, n, n, spec.seed, scenario.arms.model);
}

double min_active_gap(const ArmSet& arms, ActiveRange range) {
  const std::size_t lo = std::max<std::size_t>(range.min, 1);
  const std::size_t hi = std::min(range.max, arms.size() - 1);
  double gap = 1.0;
  for (std::size_t n = lo; n <= hi; ++n) gap = std::min(gap, arms.gap_after(n));
  return gap;
}

namespace {

template <class... Args>
std::string cat(const Args&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

void check_arms(const ArmsSpec& arms, ValidationReport& report) {
  if (const auto* means = std::get_if<std::vector<double>>(&arms.source)) {
    if (means->size() < 2) report.errors.push_back("arms: need at least 2 arms");
    for (std::size_t i = 0; i < means->size(); ++i) {
      const double m = (*means)[i];
      if (!(m >= 0.0 && m <= 1.0)) report.errors.push_back(cat("arms: mean of arm ", i, " outside [0,1]"));
    }
    return;
  }
  const auto& spec = std::get<RandomMeans>(arms.source);
  if (spec.k < 2) report.errors.push_back("arms.random: k must be at least 2");
  if (!(spec.min_gap >= 0.0 && spec.min_gap < 1.0)) {
    report.errors.push_back("arms.random: min_gap must lie in [0,1)");
  }
}

void check_events(const Scenario& s, std::size_t k, ValidationReport& report) {
  const auto& ev = s.events;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (ev[i].round < 1 || ev[i].round > s.horizon) {
      report.errors.push_back(cat("events[", i, "]: round ", ev[i].round, " outside [1, ", s.horizon, "]"));
    }
    if (i > 0 && ev[i].round < ev[i - 1].round) {
      report.errors.push_back(cat("events[", i, "]: not sorted by round"));
    }
  }

  // Replay the schedule. Exact ids are tracked until the first random leave; after that only
  // the head count is known.
  std::vector<std::uint32_t> active;
  for (std::uint32_t id = 0; id < s.initial_players; ++id) active.push_back(id);
  auto next_id = static_cast<std::uint32_t>(s.initial_players);
  std::size_t count = s.initial_players;
  bool ids_known = true;
  std::size_t i = 0;
  while (i < ev.size()) {
    const std::uint64_t round = ev[i].round;
    std::size_t j = i;
    while (j < ev.size() && ev[j].round == round) ++j;
    for (std::size_t m = i; m < j; ++m) {
      if (ev[m].kind != EventKind::kEnter) continue;
      ++count;
      active.push_back(next_id++);
      if (count > k) report.errors.push_back(cat("events[", m, "]: ", count, " active players exceed K = ", k));
    }
    for (std::size_t m = i; m < j; ++m) {
      const auto& e = ev[m];
      if (e.kind != EventKind::kLeave) continue;
      if (count == 0) {
        report.errors.push_back(cat("events[", m, "]: leave at round ", e.round, " with no active players"));
        continue;
      }
      --count;
      if (!ids_known) continue;
      switch (e.who.how) {
        case LeaveSelector::kOldest: active.erase(active.begin()); break;
        case LeaveSelector::kNewest: active.pop_back(); break;
        case LeaveSelector::kRandom: ids_known = false; break;
        case LeaveSelector::kId: {
          auto it = std::find(active.begin(), active.end(), e.who.id);
          if (it == active.end()) {
            report.errors.push_back(cat("events[", m, "]: player ", e.who.id, " is not active at round ", e.round));
          } else {
            active.erase(it);
          }
          break;
        }
      }
    }
    i = j;
  }
}

void check_algorithm_warnings(const Scenario& s, std::size_t k, ValidationReport& report) {
  const auto& a = s.algorithm;
  if (a.kind == AlgorithmKind::kDmc && a.t0 && a.t1 && *a.t1 > *a.t0) {
    for (std::size_t i = 0; i < s.events.size(); ++i) {
      const auto& e = s.events[i];
      const std::uint64_t offset = (e.round - 1) % *a.t1;
      const bool inside = e.kind == EventKind::kEnter ? (offset > 0 && offset < *a.t0) : offset < *a.t0;
      if (inside) {
        report.warnings.push_back(cat("events[", i, "]: ", e.kind == EventKind::kEnter ? "enter" : "leave",
                                      " at round ", e.round, " falls inside a DMC learning window"));
      }
    }
  }
  if (a.kind == AlgorithmKind::kMega && a.mega && s.meta.f && k >= 2) {
    const double horizon = static_cast<double>(s.horizon);
    const auto [lo, hi] = bounds::theorem3_f_band(k, a.mega->c, a.mega->d, horizon);
    if (*s.meta.f < lo || *s.meta.f > hi) {
      report.warnings.push_back(cat("meta.f = ", *s.meta.f, " outside the late-entry band [", lo, ", ", hi,
                                    "] for these MEGA parameters"));
    }
    const double amax = bounds::theorem3_alpha_max(*s.meta.f, horizon);
    if (a.mega->alpha > amax) {
      report.warnings.push_back(cat("MEGA alpha = ", a.mega->alpha, " above the late-entry limit ", amax));
    }
  }
}

}  // namespace

ValidationReport validate(const Scenario& s) {
  ValidationReport report;
  check_arms(s.arms, report);
  const std::size_t k = arm_count(s.arms);
  if (s.horizon < 1) report.errors.push_back("horizon must be at least 1");
  if (s.initial_players > k) {
    report.errors.push_back(cat("initial_players = ", s.initial_players, " exceeds K = ", k));
  }
  check_events(s, k, report);
  if (auto problem = check_algorithm(s.algorithm); !problem.empty()) {
    report.errors.push_back("algorithm: " + problem);
  }
  if (report.ok()) check_algorithm_warnings(s, k, report);
  return report;
}

Roster::Roster(std::size_t initial) {
  for (std::size_t i = 0; i < initial; ++i) active_.push_back(next_id_++);
}

std::uint32_t Roster::enter() {
  active_.push_back(next_id_);
  return next_id_++;
}

std::uint32_t Roster::leave(const Selection& who, Rng& rng) {
  if (active_.empty()) throw InvariantBreach("leave event with no active players");
  auto it = active_.end();
  switch (who.how) {
    case LeaveSelector::kOldest: it = active_.begin(); break;
    case LeaveSelector::kNewest: it = active_.end() - 1; break;
    case LeaveSelector::kRandom:
      it = active_.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, active_.size()));
      break;
    case LeaveSelector::kId:
      it = std::find(active_.begin(), active_.end(), who.id);
      if (it == active_.end()) {
        throw InvariantBreach("leave event names inactive player " + std::to_string(who.id));
      }
      break;
  }
  const std::uint32_t id = *it;
  active_.erase(it);
  return id;
}

}  // namespace mcb
