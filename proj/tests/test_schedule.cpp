#include <doctest.h>

#include <cmath>
#include <set>

#include "gen.hpp"
#include "mcb/bounds.hpp"
#include "mcb/errors.hpp"
#include "mcb/presets.hpp"
#include "mcb/scenario_io.hpp"

using namespace mcb;

namespace {

Scenario small_static() {
  Scenario s;
  s.arms.source = std::vector<double>{0.9, 0.8, 0.7, 0.2};
  s.arms.model = RewardModel::kDeterministic;
  s.horizon = 100;
  s.initial_players = 2;
  s.algorithm.kind = AlgorithmKind::kMc;
  s.algorithm.t0 = 20;
  return s;
}

bool mentions(const std::vector<std::string>& lines, const std::string& needle) {
  for (const auto& l : lines) {
    if (l.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("schedule") {
  TEST_CASE("static preset") {
    const Scenario s = preset_static();
    CHECK(s.horizon == 50000);
    CHECK(arm_count(s.arms) == 10);
    CHECK(s.initial_players == 6);
    CHECK(*s.algorithm.t0 == 3000);
    CHECK(s.events.empty());
    CHECK(s.seeds.size() == 20);
    CHECK(validate(s).ok());
    CHECK(validate(s).warnings.empty());
    CHECK(resolve_arms(s).gap_after(6) >= 0.05);
  }

  TEST_CASE("late-entry scenario, thirds variant") {
    const Scenario s = preset_theorem3();
    REQUIRE(s.events.size() == 2);
    CHECK(s.events[0].round == 166667);
    CHECK(s.events[0].kind == EventKind::kEnter);
    CHECK(s.events[1].round == 333334);
    CHECK(s.events[1].kind == EventKind::kLeave);
    CHECK(s.events[1].who.how == LeaveSelector::kId);
    CHECK(s.events[1].who.id == 0);
    CHECK(s.initial_players == 1);
    CHECK(arm_count(s.arms) == 4);
    CHECK(s.arms.model == RewardModel::kDeterministic);
    CHECK(resolve_arms(s).gap_after(2) >= 0.8);
    CHECK(*s.algorithm.t1 == 34757);
    const auto report = validate(s);
    CHECK(report.ok());
    CHECK(report.warnings.empty());
  }

  TEST_CASE("late-entry scenario, midpoint variant") {
    const Scenario s = preset_theorem3(100, 0.1, Theorem3Variant::kMidpoint);
    REQUIRE(s.events.size() == 2);
    CHECK(s.events[0].round == 50);
    CHECK(s.events[1].round == 60);
    CHECK(validate(s).ok());
  }

  TEST_CASE("generalized late-entry scenario") {
    const Scenario s = preset_theorem3_general();
    REQUIRE(s.events.size() == 4);
    for (int i = 0; i < 3; ++i) CHECK(s.events[i].round == 61255u * (i + 1));
    CHECK(s.events[3].kind == EventKind::kLeave);
    CHECK(s.events[3].who.id == 0);
    CHECK(active_range(s).max == 4);
    CHECK(resolve_arms(s).gap_after(4) == doctest::Approx(0.7));
    CHECK(validate(s).ok());
  }

  TEST_CASE("churn scenario") {
    // ceil(500000^0.84) = ceil(61254.05) = 61255
    CHECK(churn_spacing(500000, 0.84) == 61255);
    const Scenario s = preset_theorem4();
    CHECK(s.initial_players == 5);
    CHECK(arm_count(s.arms) == 10);
    CHECK(*s.meta.lambda == 0.84);
    REQUIRE(s.events.size() == 8);
    for (std::size_t i = 0; i < s.events.size(); ++i) {
      CHECK(s.events[i].round == 61255u * (i + 1));
      CHECK(s.events[i].kind == (i % 2 == 0 ? EventKind::kLeave : EventKind::kEnter));
    }
    CHECK(*s.algorithm.t1 == 32482);
    CHECK(*preset_theorem4(6000000).algorithm.t1 == 119921);
    CHECK(validate(s).ok());
    CHECK(active_range(s).min == 4);
    CHECK(active_range(s).max == 5);
    const auto arms = resolve_arms(s);
    CHECK(arms.gap_after(5) >= 0.05);
    CHECK(s.algorithm.mega->d == doctest::Approx(std::min(arms.gap_after(4), arms.gap_after(5))));
  }

  TEST_CASE("presets are deterministic and all validate") {
    for (const auto& name : preset_names()) {
      const Scenario a = make_preset(name);
      const Scenario b = make_preset(name);
      CHECK(scenario_to_json(a) == scenario_to_json(b));
      CHECK(validate(a).ok());
      CHECK(check_algorithm(a.algorithm).empty());
    }
    CHECK_THROWS_AS(make_preset("nope"), ConfigError);
    try {
      make_preset("nope");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("theorem4") != std::string::npos);
    }
  }

  TEST_CASE("presets scale with the horizon") {
    for (std::uint64_t T : {1000u, 20000u, 123457u}) {
      CHECK(validate(preset_theorem3(T)).ok());
      CHECK(validate(preset_theorem3_general(T)).ok());
      CHECK(validate(preset_theorem4(T, 0.84)).ok());
    }
    CHECK(*preset_theorem3(1000000).algorithm.t1 ==
          bounds::t1_optimal(1e6, 3000, bounds::fixing_time_bound(4), 2));
  }

  TEST_CASE("validator") {
    Scenario s = small_static();
    CHECK(validate(s).ok());

    s.events = {{101, EventKind::kEnter, {}}};
    CHECK(mentions(validate(s).errors, "outside [1, 100]"));

    s = small_static();
    s.initial_players = 0;
    s.events = {{5, EventKind::kLeave, {}}};
    CHECK(mentions(validate(s).errors, "no active players"));

    s = small_static();
    s.events = {{5, EventKind::kEnter, {}}, {3, EventKind::kEnter, {}}};
    CHECK(mentions(validate(s).errors, "not sorted"));

    s = small_static();
    s.events = {{5, EventKind::kEnter, {}}, {6, EventKind::kEnter, {}}, {7, EventKind::kEnter, {}}};
    CHECK(mentions(validate(s).errors, "exceed K"));

    // Enter and leave in the same round: the leave happens after the enter.
    s = small_static();
    s.initial_players = 4;
    s.events = {{5, EventKind::kLeave, {}}, {5, EventKind::kEnter, {}}};
    CHECK(mentions(validate(s).errors, "exceed K"));

    s = small_static();
    s.events = {{5, EventKind::kLeave, {LeaveSelector::kId, 7}}};
    CHECK(mentions(validate(s).errors, "player 7 is not active"));

    s = small_static();
    s.events = {{5, EventKind::kLeave, {LeaveSelector::kId, 1}}, {6, EventKind::kLeave, {LeaveSelector::kId, 1}}};
    CHECK(mentions(validate(s).errors, "player 1 is not active"));

    s = small_static();
    s.initial_players = 5;
    CHECK(mentions(validate(s).errors, "exceeds K"));

    s = small_static();
    s.arms.source = std::vector<double>{0.5};
    CHECK_FALSE(validate(s).ok());

    s = small_static();
    s.algorithm.kind = AlgorithmKind::kDmc;
    s.algorithm.t1 = 20;
    CHECK(mentions(validate(s).errors, "T1 > T0"));
  }

  TEST_CASE("validator warns about DMC events inside learning windows") {
    Scenario s = small_static();
    s.algorithm.kind = AlgorithmKind::kDmc;
    s.algorithm.t0 = 10;
    s.algorithm.t1 = 40;
    s.events = {{41, EventKind::kEnter, {}}, {45, EventKind::kEnter, {}}, {70, EventKind::kLeave, {}}};
    const auto report = validate(s);
    CHECK(report.ok());
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].find("round 45") != std::string::npos);
  }

  TEST_CASE("validator warns when the MEGA overlap fraction is outside its band") {
    Scenario s = preset_theorem3();
    s.algorithm.kind = AlgorithmKind::kMega;
    CHECK(validate(s).ok());
    CHECK(mentions(validate(s).warnings, "outside the late-entry band"));
  }

  TEST_CASE("roster") {
    Roster r(3);
    Rng rng(1);
    CHECK(r.enter() == 3);
    CHECK(r.leave({LeaveSelector::kOldest, 0}, rng) == 0);
    CHECK(r.leave({LeaveSelector::kNewest, 0}, rng) == 3);
    CHECK(r.leave({LeaveSelector::kId, 2}, rng) == 2);
    CHECK_THROWS_AS(r.leave({LeaveSelector::kId, 2}, rng), InvariantBreach);
    CHECK(r.active() == std::vector<std::uint32_t>{1});
    r.leave({LeaveSelector::kRandom, 0}, rng);
    CHECK_THROWS_AS(r.leave({LeaveSelector::kOldest, 0}, rng), InvariantBreach);
  }

  TEST_CASE("property: replaying an event list gives the same active sets") {
    gen::for_all(200, 707, [](gen::Gen& g) {
      std::vector<ScheduleEvent> events;
      std::size_t n = g.size(0, 5);
      const std::size_t initial = n;
      for (std::uint64_t round = 1; round <= 50; ++round) {
        if (g.coin(0.2) && n < 8) {
          events.push_back({round, EventKind::kEnter, {}});
          ++n;
        } else if (g.coin(0.2) && n > 0) {
          events.push_back({round, EventKind::kLeave, {static_cast<LeaveSelector>(g.size(0, 2)), 0}});
          --n;
        }
      }
      auto replay = [&](std::uint64_t seed) {
        Roster r(initial);
        std::vector<std::vector<std::uint32_t>> sets;
        for (const auto& e : events) {
          Rng rng = make_stream(seed, StreamKind::kSchedule, e.round);
          if (e.kind == EventKind::kEnter) {
            r.enter();
          } else {
            r.leave(e.who, rng);
          }
          sets.push_back(r.active());
        }
        return sets;
      };
      const std::uint64_t seed = g.u64(0, 1000);
      REQUIRE(replay(seed) == replay(seed));
    });
  }

  TEST_CASE("scenario files round-trip") {
    for (const auto& name : preset_names()) {
      const Scenario s = make_preset(name);
      const auto doc = scenario_to_json(s);
      const Scenario back = scenario_from_json(nlohmann::json::parse(doc.dump()));
      CHECK(scenario_to_json(back) == doc);
    }
    const auto doc = scenario_to_json(preset_theorem3());
    CHECK(doc["arms"]["means"].size() == 4);
    CHECK(doc["events"][1]["who"]["id"] == 0);
    CHECK(scenario_to_json(preset_theorem4())["meta"]["lambda"] == 0.84);
  }

  TEST_CASE("scenario file errors") {
    auto doc = scenario_to_json(small_static());
    auto bad = doc;
    bad["horizon"] = -5;
    CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
    bad = doc;
    bad["horizon"] = 1.5;
    CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
    bad = doc;
    bad["extra"] = 1;
    CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
    bad = doc;
    bad.erase("arms");
    CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
    bad = doc;
    bad["algorithm"]["name"] = "ucb";
    CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
    bad = doc;
    bad["algorithm"]["params"]["c"] = 0.1;
    CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);  // c without d, alpha, p0
    bad = doc;
    bad["events"] = nlohmann::json::array({{{"round", 3}, {"kind", "jump"}}});
    CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
    auto fine = doc;
    fine["horizon"] = 5e2;
    CHECK(scenario_from_json(fine).horizon == 500);
  }

  TEST_CASE("overrides") {
    auto doc = scenario_to_json(preset_static());
    apply_override(doc, "horizon=1000");
    apply_override(doc, "algorithm.params.t0=250");
    apply_override(doc, "algorithm.name=dmc");
    apply_override(doc, "algorithm.params.t1=400");
    apply_override(doc, "seeds.0=99");
    const Scenario s = scenario_from_json(doc);
    CHECK(s.horizon == 1000);
    CHECK(*s.algorithm.t0 == 250);
    CHECK(*s.algorithm.t1 == 400);
    CHECK(s.algorithm.kind == AlgorithmKind::kDmc);
    CHECK(s.seeds[0] == 99);
    CHECK_THROWS_AS(apply_override(doc, "horizon"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "seeds.50=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "horizon.x=1"), ConfigError);
  }
}
