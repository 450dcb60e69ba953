#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include "mcb/batch.hpp"
#include "mcb/engine.hpp"

namespace mcb {

/// Shortest round-trip decimal form, independent of the locale.
std::string format_number(double value);

/// round,n_active,regret_inst,regret_cum,collisions
void write_trace_csv(const Trace& trace, std::ostream& out);
/// player,event,round
void write_events_csv(const Trace& trace, std::ostream& out);
/// round,mean_avg_regret,std_avg_regret
void write_summary_csv(std::span<const SummaryRow> summary, std::ostream& out);

void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace mcb
