#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <utility>

namespace mcb::bounds {

// All logarithms are natural. Inputs outside the documented ranges throw InvalidInput.

/// Learning length for the static game: ceil(max(K/2 ln(2K^2/delta),
/// 16K/eps^2 ln(4K^2/delta), K^2 ln(2/delta2)/0.02)) with delta2 = delta/2.
std::uint64_t t0_static(std::size_t k, double epsilon, double delta);

/// Same three-way max evaluated at confidence delta/(2T); the third term is K^2 ln(4T/delta)/0.02.
std::uint64_t t0_dynamic(std::size_t k, double epsilon, double delta, double horizon);

/// Rounds of uniform exploration after which the collision-count estimator is exact
/// with probability >= 1 - delta: ceil(ln(2/delta) / (2 (0.1/K)^2)).
std::uint64_t t0_estimator(std::size_t k, double delta);

/// Expected rounds for a musical-chairs player to fix: e^2 * n.
double fixing_time_bound(double n);

/// Epoch length ceil(sqrt(T (T0 + 2 Tf) / x)), never below T0 + 1. x == 0 means a static game
/// and returns T (a single epoch).
std::uint64_t t1_optimal(double horizon, double t0, double tf_bound, double churn);

/// T0 * N + 2 e^2 N^2.
double mc_regret_bound(double t0, double n);

/// (T/T1) Nm (T0 + 2 Tf) + e * 2 (T1 - T0) + l (T1 - T0).
double dmc_regret_bound(double horizon, double t1, double t0, double tf, double n_max,
                        double entering, double leaving);

template <class Real>
struct ExponentPair {
  Real mega;
  Real dmc;
};

/// Regret exponents of the alternating enter/leave scenario: (min(1, 1 - (lambda - beta)),
/// 1 - lambda/2). Generic so it can run on exact rationals.
template <class Real>
ExponentPair<Real> scenario_exponents(const Real& lambda, const Real& beta) {
  const Real one(1);
  const Real two(2);
  Real mega = one - (lambda - beta);
  if (one < mega) mega = one;
  return {mega, one - lambda / two};
}

/// Per-round collision probability of one of n uniform players on k arms: 1 - (1 - 1/k)^(n-1).
double collision_probability(std::size_t k, double n);

/// Inverse of collision_probability: ln(1 - p) / ln(1 - 1/k) + 1.
double invert_collision_probability(std::size_t k, double p);

/// Admissible f band for the late-entry MEGA scenario: [cK^2/(d^2(K-1))/T, d^2(K-1)/(8cK^2)].
std::pair<double, double> theorem3_f_band(std::size_t k, double c, double d, double horizon);

/// Largest alpha for which the late-entry MEGA scenario is guaranteed to hurt: 1 - 4 ln(4 f T)/T.
double theorem3_alpha_max(double f, double horizon);

}  // namespace mcb::bounds
