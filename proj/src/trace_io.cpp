#include "mcb/trace_io.hpp"

#include <charconv>
#include <fstream>

#include "mcb/errors.hpp"

namespace mcb {

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

template <class Int>
void put_int(std::string& line, Int v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  line.append(buf, res.ptr);
}

void put_real(std::string& line, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  line.append(buf, res.ptr);
}

}  // namespace

void write_trace_csv(const Trace& trace, std::ostream& out) {
  std::string line;
  out << "round,n_active,regret_inst,regret_cum,collisions\n";
  for (const auto& r : trace.rounds) {
    line.clear();
    put_int(line, r.round);
    line += ',';
    put_int(line, r.n_active);
    line += ',';
    put_real(line, r.regret_inst);
    line += ',';
    put_real(line, r.regret_cum);
    line += ',';
    put_int(line, r.collisions);
    line += '\n';
    out << line;
  }
}

void write_events_csv(const Trace& trace, std::ostream& out) {
  out << "player,event,round\n";
  for (const auto& e : trace.events) out << e.player << ',' << to_string(e.kind) << ',' << e.round << '\n';
}

void write_summary_csv(std::span<const SummaryRow> summary, std::ostream& out) {
  std::string line;
  out << "round,mean_avg_regret,std_avg_regret\n";
  for (const auto& r : summary) {
    line.clear();
    put_int(line, r.round);
    line += ',';
    put_real(line, r.mean_avg_regret);
    line += ',';
    put_real(line, r.std_avg_regret);
    line += '\n';
    out << line;
  }
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << contents;
  if (!out) throw ConfigError("write failed for " + path.string());
}

}  // namespace mcb
