#include "mcb/bounds.hpp"

#include <cmath>

#include "mcb/errors.hpp"

namespace mcb::bounds {
namespace {

void check_common(std::size_t k, double epsilon, double delta) {
  if (k < 2) throw InvalidInput("K must be at least 2");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("epsilon must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0,1)");
}

// Ranking term: enough samples per arm for a pairwise-correct order.
double exploration_term(double k, double confidence) {
  return k / 2.0 * std::log(2.0 * k * k / confidence);
}

double ranking_term(double k, double epsilon, double confidence) {
  return 16.0 * k / (epsilon * epsilon) * std::log(4.0 * k * k / confidence);
}

double ceil_to_rounds(double x) { return std::ceil(x); }

}  // namespace

std::uint64_t t0_static(std::size_t k, double epsilon, double delta) {
  check_common(k, epsilon, delta);
  const double kk = static_cast<double>(k);
  const double delta2 = delta / 2.0;
  const double estimator = kk * kk * std::log(2.0 / delta2) / 0.02;
  const double m = std::max({exploration_term(kk, delta), ranking_term(kk, epsilon, delta), estimator});
  return static_cast<std::uint64_t>(ceil_to_rounds(m));
}

std::uint64_t t0_dynamic(std::size_t k, double epsilon, double delta, double horizon) {
  check_common(k, epsilon, delta);
  if (!(horizon >= 1.0)) throw InvalidInput("horizon must be at least 1");
  const double kk = static_cast<double>(k);
  const double confidence = delta / (2.0 * horizon);
  const double estimator = kk * kk * std::log(4.0 * horizon / delta) / 0.02;
  const double m =
      std::max({exploration_term(kk, confidence), ranking_term(kk, epsilon, confidence), estimator});
  return static_cast<std::uint64_t>(ceil_to_rounds(m));
}

std::uint64_t t0_estimator(std::size_t k, double delta) {
  if (k < 2) throw InvalidInput("K must be at least 2");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0,1)");
  const double eps1 = 0.1 / static_cast<double>(k);
  return static_cast<std::uint64_t>(std::ceil(std::log(2.0 / delta) / (2.0 * eps1 * eps1)));
}

double fixing_time_bound(double n) { return std::exp(2.0) * n; }

std::uint64_t t1_optimal(double horizon, double t0, double tf_bound, double churn) {
  if (!(churn >= 0.0)) throw InvalidInput("churn bound x must be non-negative");
  if (!(t0 >= 0.0 && tf_bound >= 0.0)) throw InvalidInput("T0 and Tf must be non-negative");
  if (churn == 0.0) return static_cast<std::uint64_t>(std::ceil(horizon));
  if (!(horizon >= t0)) throw InvalidInput("horizon must be at least T0");
  const double per_epoch = t0 + 2.0 * tf_bound;
  const double t1 = std::ceil(std::sqrt(horizon * per_epoch / churn));
  return static_cast<std::uint64_t>(std::max(t1, t0 + 1.0));
}

double mc_regret_bound(double t0, double n) {
  const double learning = t0 * n;
  const double fixing = 2.0 * fixing_time_bound(n) * n;
  return learning + fixing;
}

double dmc_regret_bound(double horizon, double t1, double t0, double tf, double n_max,
                        double entering, double leaving) {
  if (!(t1 > t0)) throw InvalidInput("epoch length T1 must exceed T0");
  const double epochs = horizon / t1;
  const double per_epoch = n_max * (t0 + 2.0 * tf);
  const double tail = t1 - t0;
  return epochs * per_epoch + entering * 2.0 * tail + leaving * tail;
}

double collision_probability(std::size_t k, double n) {
  if (k < 2) throw InvalidInput("K must be at least 2");
  if (!(n >= 1.0)) throw InvalidInput("player count must be at least 1");
  const double miss = 1.0 - 1.0 / static_cast<double>(k);
  return 1.0 - std::pow(miss, n - 1.0);
}

double invert_collision_probability(std::size_t k, double p) {
  if (k < 2) throw InvalidInput("K must be at least 2");
  if (!(p >= 0.0 && p < 1.0)) throw InvalidInput("collision probability must lie in [0,1)");
  return std::log1p(-p) / std::log1p(-1.0 / static_cast<double>(k)) + 1.0;
}

std::pair<double, double> theorem3_f_band(std::size_t k, double c, double d, double horizon) {
  const double kk = static_cast<double>(k);
  const double coef = c * kk * kk / (d * d * (kk - 1.0));
  return {coef / horizon, 1.0 / (8.0 * coef)};
}

double theorem3_alpha_max(double f, double horizon) {
  return 1.0 - 4.0 * std::log(4.0 * f * horizon) / horizon;
}

}  // namespace mcb::bounds
