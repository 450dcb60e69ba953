#include "mcb/batch.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include "mcb/errors.hpp"

namespace mcb {

std::size_t effective_threads(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("MCB_THREADS"); cap != nullptr && *cap != '\0') {
    try {
      const auto v = std::stoul(cap);
      if (v > 0) n = std::min<std::size_t>(n, v);
    } catch (const std::exception&) {
      throw ConfigError(std::string("MCB_THREADS must be a positive integer, got '") + cap + "'");
    }
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

std::vector<SummaryRow> summarize(std::span<const std::uint64_t> rounds,
                                  const std::vector<std::vector<double>>& cumulative) {
  std::vector<SummaryRow> out(rounds.size());
  const auto n = static_cast<double>(cumulative.size());
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    const double t = static_cast<double>(rounds[r]);
    double sum = 0.0;
    for (const auto& series : cumulative) sum += series[r] / t;
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& series : cumulative) {
      const double dev = series[r] / t - mean;
      sq += dev * dev;
    }
    out[r] = {rounds[r], mean, cumulative.size() > 1 ? std::sqrt(sq / n) : 0.0};
  }
  return out;
}

BatchResult run_batch(const Scenario& scenario, std::span<const std::uint64_t> seeds, const BatchOptions& options) {
  if (seeds.empty()) throw ConfigError("batch needs at least one seed");
  const auto report = validate(scenario);
  if (!report.ok()) throw ConfigError("scenario does not validate: " + report.errors.front());
  const ArmSet arms = resolve_arms(scenario);

  const std::size_t n = seeds.size();
  BatchResult result;
  result.seeds.assign(seeds.begin(), seeds.end());
  result.cumulative.resize(n);
  result.total_regret.resize(n);
  if (options.keep_traces) result.traces.resize(n);
  std::vector<std::exception_ptr> errors(n);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        Trace t = run(scenario, arms, seeds[i], options.run);
        auto& series = result.cumulative[i];
        series.reserve(t.rounds.size());
        for (const auto& rec : t.rounds) series.push_back(rec.regret_cum);
        result.total_regret[i] = t.total_regret;
        if (i == 0) {
          for (const auto& rec : t.rounds) result.rounds.push_back(rec.round);
        }
        if (options.on_trace) options.on_trace(i, t);
        if (options.keep_traces) result.traces[i] = std::move(t);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = effective_threads(options.threads, n);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  result.summary = summarize(result.rounds, result.cumulative);
  return result;
}

}  // namespace mcb
