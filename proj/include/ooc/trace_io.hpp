#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ooc/sim.hpp"

namespace ooc {

inline constexpr const char* kTraceHeader = "t,agent,y,z,lambda,u,e,est_err,xi,V";

void write_trace_csv(std::ostream& out, const Trace& trace);
void write_trace_csv(const std::filesystem::path& path, const Trace& trace);

/// Reads a file written by write_trace_csv. Throws Parse on a bad header,
/// wrong column count or a non-numeric cell.
std::vector<TraceRow> read_trace_csv(std::istream& in);
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

enum class Series { GeneratorZ, GeneratorLambda, OutputY };

/// Wide plot-data file: one row per step, columns t,<name>_1..<name>_N.
void write_series_csv(const std::filesystem::path& path, const Trace& trace, Series series);

}  // namespace ooc
