#pragma once

#include <string>

#include "adyn/analysis.hpp"
#include "adyn/dynamics.hpp"
#include "adyn/system.hpp"

namespace adyn {

/// System file format (see FORMATS.md): a header (n, recall, alphabets,
/// flags) followed by either explicit reaction tables or a named-generator
/// stanza. parse_system(format_system(spec)) == spec, bit-exact.
std::string format_system(const SystemSpec& spec);
SystemSpec parse_system(const std::string& text);

SystemSpec load_system_file(const std::string& path);  // path "-" reads stdin
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Witness file: initial window (one profile line per recall step, oldest
/// first) plus a schedule witness in the schedules text format.
struct WitnessFile {
  Configuration initial;
  ScheduleWitness witness;
};

std::string format_witness_file(const SystemSpec& spec, const Configuration& initial,
                                const ScheduleWitness& witness);
WitnessFile parse_witness_file(const SystemSpec& spec, const std::string& text);

/// Structured text report of a Verdict: result, witness (schedules format)
/// and search statistics.
std::string format_verdict_report(const SystemSpec& spec, const Verdict& verdict);
std::string format_verdict_json(const SystemSpec& spec, const Verdict& verdict);

std::string format_trace(const SystemSpec& spec, const Trace& trace);

Profile parse_profile(const SystemSpec& spec, const std::string& line);

}  // namespace adyn
