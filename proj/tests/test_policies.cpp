#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "gen.hpp"
#include "mcb/errors.hpp"
#include "mcb/policies.hpp"

using namespace mcb;

namespace {

// Plays one policy alone against deterministic means: never a collision.
std::vector<std::size_t> play_alone(Policy& p, const std::vector<double>& means, std::uint64_t rounds,
                                    std::uint64_t first_t, Rng& rng) {
  std::vector<std::size_t> arms;
  for (std::uint64_t t = first_t; t < first_t + rounds; ++t) {
    const auto a = p.act(t, rng);
    REQUIRE(a.arm.has_value());
    arms.push_back(*a.arm);
    p.observe({false, means[*a.arm]});
  }
  return arms;
}

std::uint64_t exact_collisions(std::size_t k, std::size_t n, std::uint64_t t0) {
  const double p = 1.0 - std::pow(1.0 - 1.0 / static_cast<double>(k), static_cast<double>(n) - 1.0);
  return static_cast<std::uint64_t>(std::llround(static_cast<double>(t0) * p));
}

MegaParams mega_params(double c, double alpha, double p0) {
  MegaParams m;
  m.c = c;
  m.d = 0.1;
  m.alpha = alpha;
  m.p0 = p0;
  return m;
}

}  // namespace

TEST_SUITE("policies") {
  TEST_CASE("player-count estimator") {
    CHECK(estimate_players(0, 3000, 10) == 1);
    CHECK(estimate_players(3000, 3000, 10) == 10);
    CHECK(estimate_players(1229, 3000, 10) == 6);
    CHECK(estimate_players(2999, 3000, 10) == 10);  // raw value above K is clamped
  }

  TEST_CASE("property: estimator inverts the exact collision rate") {
    for (std::size_t k = 2; k <= 20; ++k) {
      for (std::size_t n = 1; n <= k; ++n) {
        REQUIRE(estimate_players(exact_collisions(k, n, 3000), 3000, k) == n);
      }
    }
  }

  TEST_CASE("musical chairs alone fixes on the best arm in one round") {
    McPolicy p = McPolicy::in_musical_chairs(5, {3, 1, 0, 4, 2}, 1, 10, 100);
    Rng rng(1);
    const auto a = p.act(10, rng);
    CHECK(*a.arm == 3);
    p.observe({false, 0.5});
    CHECK(p.status().phase == Phase::kFixed);
    CHECK(*p.status().fixed_arm == 3);
    for (int i = 0; i < 50; ++i) {
      CHECK(*p.act(11 + i, rng).arm == 3);
      p.observe({i % 2 == 0, 0.0});  // collisions no longer matter once fixed
    }
    CHECK(p.status().phase == Phase::kFixed);
  }

  TEST_CASE("musical chairs fixes on the first clean pull") {
    McPolicy p = McPolicy::in_musical_chairs(6, {5, 4, 3, 2, 1, 0}, 3, 10, 100);
    Rng rng(4);
    std::size_t arm = 0;
    for (int i = 0; i < 5; ++i) {
      arm = *p.act(10 + i, rng).arm;
      CHECK((arm == 5 || arm == 4 || arm == 3));
      p.observe({true, 0.0});
      CHECK(p.status().phase == Phase::kMusicalChairs);
    }
    arm = *p.act(20, rng).arm;
    p.observe({false, 0.3});
    CHECK(p.status().phase == Phase::kFixed);
    CHECK(*p.status().fixed_arm == arm);
  }

  TEST_CASE("learning then ranking from clean observations") {
    const std::vector<double> means{0.2, 0.9, 0.5, 0.7};
    McPolicy p(4, 400, 10000);
    Rng rng(9);
    const auto arms = play_alone(p, means, 400, 0, rng);
    std::array<int, 4> counts{};
    for (auto a : arms) ++counts[a];
    for (int c : counts) CHECK(c > 50);
    CHECK(p.status().phase == Phase::kLearning);
    CHECK(p.state().collisions == 0);
    const auto next = p.act(400, rng);
    CHECK(p.state().ranking == std::vector<std::size_t>{1, 3, 2, 0});
    CHECK(p.state().n_star == 1);
    CHECK(*next.arm == 1);
  }

  TEST_CASE("collided pulls do not update the empirical means") {
    McPolicy p(3, 100, 1000);
    Rng rng(2);
    for (int t = 0; t < 100; ++t) {
      const auto a = p.act(t, rng);
      p.observe({true, 0.0});
      (void)a;
    }
    const auto& s = p.state();
    CHECK(s.collisions == 100);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(s.observations[i] == 0);
      CHECK(s.empirical_mean(i) == 0.0);
    }
    p.act(100, rng);
    CHECK(p.state().n_star == 3);
  }

  TEST_CASE("protocol violations") {
    McPolicy p(3, 10, 100);
    Rng rng(1);
    p.act(0, rng);
    CHECK_THROWS_AS(p.act(1, rng), ContractViolation);
    McPolicy q(3, 10, 100);
    CHECK_THROWS_AS(q.observe({false, 1.0}), ContractViolation);
    CHECK_THROWS_AS(DmcPolicy(3, 100, 100, 0), ConfigError);
  }

  TEST_CASE("late entry weights") {
    LateEntryState fresh(4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(fresh.weight(i) == 1.0);

    LateEntryPolicy uniform(4);
    Rng rng(5);
    std::array<int, 4> counts{};
    for (int i = 0; i < 40000; ++i) {
      LateEntryPolicy p = uniform;
      ++counts[*p.act(0, rng).arm];
    }
    for (int c : counts) CHECK(std::abs(c / 40000.0 - 0.25) < 0.01);

    LateEntryState blocked(3);
    blocked.pulls = {10, 4, 4};
    blocked.clean_pulls = {0, 4, 4};
    blocked.reward_sums = {0.0, 2.0, 3.0};
    CHECK(blocked.weight(0) == 0.0);
    LateEntryPolicy b(blocked);
    for (int i = 0; i < 2000; ++i) {
      LateEntryPolicy copy = b;
      CHECK(*copy.act(0, rng).arm != 0);
    }

    LateEntryState half(3);
    half.pulls = {2, 2, 2};
    half.clean_pulls = {2, 2, 2};
    half.reward_sums = {1.0, 1.0, 0.0};
    LateEntryPolicy h(half);
    std::array<int, 3> hc{};
    for (int i = 0; i < 20000; ++i) {
      LateEntryPolicy copy = h;
      ++hc[*copy.act(0, rng).arm];
    }
    CHECK(hc[2] == 0);
    CHECK(std::abs(hc[0] / 20000.0 - 0.5) < 0.015);

    LateEntryState zero(2);
    zero.pulls = {3, 3};
    zero.clean_pulls = {0, 3};
    zero.reward_sums = {0.0, 0.0};
    LateEntryPolicy z(zero);
    std::array<int, 2> zc{};
    for (int i = 0; i < 2000; ++i) {
      LateEntryPolicy copy = z;
      ++zc[*copy.act(0, rng).arm];
    }
    CHECK(zc[0] > 0);
    CHECK(zc[1] > 0);
  }

  TEST_CASE("DMC starts MC on an epoch boundary") {
    DmcPolicy p(4, 50, 200, 400);
    CHECK_FALSE(p.in_late_entry());
    CHECK(p.status().phase == Phase::kLearning);
    CHECK(p.status().epoch == 2);
  }

  TEST_CASE("DMC late entrant switches to MC at the next boundary") {
    const std::vector<double> means{0.1, 0.8, 0.3};
    const std::uint64_t t1 = 200;
    DmcPolicy p(3, 50, t1, t1 + 5);
    CHECK(p.in_late_entry());
    Rng rng(3);
    play_alone(p, means, t1 - 5, t1 + 5, rng);
    CHECK(p.in_late_entry());
    CHECK(p.epoch() == 1);
    p.act(2 * t1, rng);
    CHECK_FALSE(p.in_late_entry());
    CHECK(p.epoch() == 2);
    CHECK(p.status().phase == Phase::kLearning);
    p.observe({false, 0.0});
  }

  TEST_CASE("DMC single player re-fixes on the best arm every epoch") {
    const std::vector<double> means{0.1, 0.8, 0.3, 0.6};
    const std::uint64_t t0 = 60;
    const std::uint64_t t1 = 150;
    DmcPolicy p(4, t0, t1, 0);
    Rng rng(8);
    for (std::uint64_t epoch = 0; epoch < 3; ++epoch) {
      play_alone(p, means, t0 + 1, epoch * t1, rng);
      REQUIRE(p.status().phase == Phase::kFixed);
      CHECK(*p.status().fixed_arm == 1);
      CHECK(p.status().epoch == epoch);
      play_alone(p, means, t1 - t0 - 1, epoch * t1 + t0 + 1, rng);
    }
  }

  TEST_CASE("MEGA exploration probability") {
    MegaPolicy p(4, mega_params(0.1, 0.5, 0.6));
    const double coef = 0.1 * 16 / (0.01 * 3);
    CHECK(p.exploration_probability(1) == 1.0);
    CHECK(p.exploration_probability(53) == 1.0);
    CHECK(p.exploration_probability(1000) == doctest::Approx(coef / 1000));
    CHECK_THROWS_AS(MegaPolicy(4, mega_params(0.0, 0.5, 0.6)), ConfigError);
    CHECK_THROWS_AS(MegaPolicy(4, mega_params(0.1, 1.0, 0.6)), ConfigError);
  }

  TEST_CASE("MEGA persistence follows the closed form") {
    for (double alpha : {0.0, 0.3, 0.5, 0.9}) {
      const double p0 = 0.6;
      MegaPolicy p(3, mega_params(1e-12, alpha, p0));
      Rng rng(6);
      for (int m = 0; m < 30; ++m) {
        const auto a = p.act(0, rng);
        REQUIRE(*a.arm == 0);
        REQUIRE(p.state().p == doctest::Approx(1.0 - std::pow(alpha, m) * (1.0 - p0)).epsilon(1e-14));
        p.observe({false, 0.5});
      }
    }
  }

  TEST_CASE("MEGA alpha zero jumps straight to certainty") {
    MegaPolicy p(3, mega_params(1e-12, 0.0, 0.6));
    Rng rng(1);
    p.act(0, rng);
    p.observe({false, 0.5});
    p.act(1, rng);
    CHECK(p.state().p == 1.0);
  }

  TEST_CASE("MEGA persistence does not grow while persisting through a collision") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const double p0 = 1.0 - 1e-12;
      MegaPolicy p(3, mega_params(1e-12, 0.0, p0));
      Rng rng(seed);
      const auto first = p.act(0, rng);
      p.observe({true, 0.0});
      const auto second = p.act(1, rng);
      REQUIRE(second.arm == first.arm);
      CHECK(p.state().p == p0);
      p.observe({false, 0.5});
      p.act(2, rng);
      CHECK(p.state().p == 1.0);
    }
  }

  TEST_CASE("property: MEGA never pulls an arm it marked unavailable") {
    gen::for_all(40, 505, [](gen::Gen& g) {
      MegaParams m = mega_params(g.real(0.01, 1.0), g.real(0.0, 0.9), g.real(0.01, 0.5));
      m.beta = g.real(0.3, 0.9);
      const std::size_t k = g.size(2, 5);
      MegaPolicy p(k, m);
      Rng rng(g.u64(0, 1u << 20));
      std::size_t abstained = 0;
      for (int t = 0; t < 400; ++t) {
        const auto before = p.state();
        const auto a = p.act(0, rng);
        if (!a.arm) {
          ++abstained;
          for (std::size_t i = 0; i < k; ++i) REQUIRE(p.state().local_t < p.state().unavailable_until[i]);
          continue;
        }
        const bool persisted = before.prev_collided && before.prev_arm == a.arm &&
                               p.state().unavailable_until[*a.arm] == before.unavailable_until[*a.arm];
        if (!persisted) REQUIRE(p.state().local_t >= p.state().unavailable_until[*a.arm]);
        REQUIRE(p.state().p >= m.p0);
        REQUIRE(p.state().p <= 1.0);
        p.observe({g.coin(0.7), 0.0});
      }
      (void)abstained;
    });
  }

  TEST_CASE("MEGA abstains when every arm is unavailable, or pulls at random if configured") {
    for (auto behavior : {NoArmBehavior::kAbstain, NoArmBehavior::kRandomArm}) {
      MegaParams m = mega_params(0.1, 0.5, 0.01);
      m.no_arm = behavior;
      MegaPolicy p(2, m);
      Rng rng(12);
      std::size_t abstained = 0;
      for (int t = 0; t < 2000; ++t) {
        const auto a = p.act(0, rng);
        if (!a.arm) {
          ++abstained;
          continue;
        }
        p.observe({true, 0.0});
      }
      if (behavior == NoArmBehavior::kAbstain) {
        CHECK(abstained > 0);
      } else {
        CHECK(abstained == 0);
      }
    }
  }

  TEST_CASE("uniform baseline") {
    RandomPolicy one(1);
    Rng rng(1);
    CHECK(*one.act(0, rng).arm == 0);
    RandomPolicy four(4);
    std::array<int, 4> counts{};
    for (int i = 0; i < 100000; ++i) ++counts[*four.act(0, rng).arm];
    for (int c : counts) CHECK(std::abs(c / 100000.0 - 0.25) < 0.01);
    Rng a(77);
    Rng b(77);
    for (int i = 0; i < 100; ++i) CHECK(*four.act(0, a).arm == *four.act(0, b).arm);
  }

  TEST_CASE("property: a policy replayed on its own inputs repeats its actions") {
    gen::for_all(30, 606, [](gen::Gen& g) {
      AlgorithmConfig cfg;
      const auto kind = g.size(0, 3);
      cfg.kind = static_cast<AlgorithmKind>(kind);
      cfg.t0 = g.u64(5, 40);
      cfg.t1 = *cfg.t0 + g.u64(1, 60);
      cfg.mega = mega_params(0.1, 0.5, 0.6);
      const std::size_t k = g.size(2, 6);
      const std::uint64_t entry = g.u64(0, 100);
      const std::uint64_t seed = g.u64(0, 1u << 20);
      std::vector<Feedback> feedback;
      for (int i = 0; i < 300; ++i) feedback.push_back({g.coin(0.3), g.coin() ? 1.0 : 0.0});

      auto record = [&] {
        auto p = make_policy(cfg, k, 1000, entry);
        Rng rng = make_stream(seed, StreamKind::kPlayer, 0);
        std::vector<int> actions;
        for (std::size_t i = 0; i < feedback.size(); ++i) {
          const auto a = p->act(entry + i, rng);
          actions.push_back(a.arm ? static_cast<int>(*a.arm) : -1);
          if (a.arm) p->observe(feedback[i]);
        }
        return actions;
      };
      REQUIRE(record() == record());
    });
  }

  TEST_CASE("algorithm configuration") {
    CHECK(parse_algorithm("DMC") == AlgorithmKind::kDmc);
    CHECK(parse_algorithm("mega") == AlgorithmKind::kMega);
    CHECK_THROWS_AS(parse_algorithm("ucb"), ConfigError);
    AlgorithmConfig cfg;
    cfg.kind = AlgorithmKind::kMc;
    CHECK_FALSE(check_algorithm(cfg).empty());
    cfg.t0 = 10;
    CHECK(check_algorithm(cfg).empty());
    cfg.kind = AlgorithmKind::kDmc;
    cfg.t1 = 10;
    CHECK_FALSE(check_algorithm(cfg).empty());
    cfg.t1 = 11;
    CHECK(check_algorithm(cfg).empty());
    cfg.kind = AlgorithmKind::kMega;
    CHECK_FALSE(check_algorithm(cfg).empty());
    CHECK_THROWS_AS(make_policy(cfg, 4, 100, 0), ConfigError);
  }
}
