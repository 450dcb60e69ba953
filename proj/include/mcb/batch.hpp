#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mcb/engine.hpp"

namespace mcb {

struct SummaryRow {
  std::uint64_t round = 0;
  double mean_avg_regret = 0.0;
  double std_avg_regret = 0.0;  // population std across seeds

  bool operator==(const SummaryRow&) const = default;
};

struct BatchOptions {
  RunOptions run;
  /// 0 uses the hardware concurrency. Capped by MCB_THREADS when set.
  std::size_t threads = 0;
  bool keep_traces = false;
  /// Called from the worker thread once per finished seed (index into the seed list).
  std::function<void(std::size_t, const Trace&)> on_trace;
};

struct BatchResult {
  std::vector<std::uint64_t> seeds;
  std::vector<std::uint64_t> rounds;            // recorded round indices, shared by all seeds
  std::vector<std::vector<double>> cumulative;  // [seed][record] cumulative regret
  std::vector<double> total_regret;             // exact, per seed
  std::vector<Trace> traces;                    // only with keep_traces
  std::vector<SummaryRow> summary;
};

/// Runs every seed independently (in parallel) and merges in seed order, so the result does
/// not depend on the thread count. Throws ConfigError on an empty seed list.
BatchResult run_batch(const Scenario& scenario, std::span<const std::uint64_t> seeds,
                      const BatchOptions& options = {});

/// Per-round mean and population std of cumulative regret / round across seeds.
std::vector<SummaryRow> summarize(std::span<const std::uint64_t> rounds,
                                  const std::vector<std::vector<double>>& cumulative);

/// Worker count after applying MCB_THREADS to `requested` (0 = hardware concurrency).
std::size_t effective_threads(std::size_t requested, std::size_t jobs);

}  // namespace mcb
