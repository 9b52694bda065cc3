#include "ooc/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "ooc/error.hpp"

namespace ooc {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Parse, "cannot write '" + path.string() + "'");
  return out;
}

double cell_number(const std::string& cell, std::size_t line) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw Error(ErrorKind::Parse, "trace line " + std::to_string(line) + ": bad cell '" + cell + "'");
  return v;
}

std::size_t cell_index(const std::string& cell, std::size_t line) {
  std::size_t v = 0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw Error(ErrorKind::Parse, "trace line " + std::to_string(line) + ": bad index '" + cell + "'");
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << kTraceHeader << '\n';
  for (const TraceRow& r : trace.rows) {
    out << r.t << ',' << r.agent << ',' << fmt(r.y) << ',' << fmt(r.z) << ',' << fmt(r.lambda) << ',' << fmt(r.u)
        << ',' << fmt(r.e) << ',' << fmt(r.est_err) << ',' << fmt(r.xi) << ',' << fmt(r.V) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const Trace& trace) {
  auto out = open_out(path);
  write_trace_csv(out, trace);
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) throw Error(ErrorKind::Parse, "trace header mismatch");
  std::vector<TraceRow> rows;
  std::size_t lineno = 1;
  std::vector<std::string> cells;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    cells.clear();
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 10)
      throw Error(ErrorKind::Parse, "trace line " + std::to_string(lineno) + ": expected 10 columns");
    TraceRow r;
    r.t = cell_index(cells[0], lineno);
    r.agent = cell_index(cells[1], lineno);
    r.y = cell_number(cells[2], lineno);
    r.z = cell_number(cells[3], lineno);
    r.lambda = cell_number(cells[4], lineno);
    r.u = cell_number(cells[5], lineno);
    r.e = cell_number(cells[6], lineno);
    r.est_err = cell_number(cells[7], lineno);
    r.xi = cell_number(cells[8], lineno);
    r.V = cell_number(cells[9], lineno);
    rows.push_back(r);
  }
  return rows;
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path.string() + "'");
  return read_trace_csv(in);
}

void write_series_csv(const std::filesystem::path& path, const Trace& trace, Series series) {
  const char* name = series == Series::GeneratorZ ? "z" : series == Series::GeneratorLambda ? "lambda" : "y";
  auto out = open_out(path);
  out << 't';
  for (std::size_t i = 0; i < trace.agents; ++i) out << ',' << name << '_' << i + 1;
  out << '\n';
  for (std::size_t t = 0; t <= trace.horizon; ++t) {
    out << t;
    for (std::size_t i = 0; i < trace.agents; ++i) {
      const TraceRow& r = trace.at(t, i);
      const double v = series == Series::GeneratorZ ? r.z : series == Series::GeneratorLambda ? r.lambda : r.y;
      out << ',' << fmt(v);
    }
    out << '\n';
  }
}

}  // namespace ooc
