#include "papal/trace_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace papal {

namespace {

void put(std::ostream& out, double v) {
  if (std::isnan(v)) {
    out << "nan";
  } else {
    out << v;
  }
}

double parse(const std::string& cell) {
  if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
  return std::stod(cell);
}

}  // namespace

void write_trace_csv(const std::vector<IterationRecord>& trace, std::ostream& out) {
  out << kTraceHeader << '\n' << std::setprecision(17);
  for (const auto& r : trace) {
    out << r.t << ',';
    put(out, r.gap_estimate);
    out << ',';
    put(out, r.sup_norm_h);
    out << ',';
    put(out, r.sup_norm_g);
    out << ',';
    put(out, r.inner_accept_rate);
    out << ',';
    put(out, r.wall_ms);
    out << '\n';
  }
}

void save_trace_csv(const std::vector<IterationRecord>& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_trace_csv(trace, out);
}

std::vector<IterationRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) throw InvalidArgument("trace csv: bad header");
  std::vector<IterationRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string c[6];
    for (auto& cell : c) {
      if (!std::getline(ss, cell, ',')) throw InvalidArgument("trace csv: short row");
    }
    out.push_back({std::stoi(c[0]), parse(c[1]), parse(c[2]), parse(c[3]), parse(c[4]), parse(c[5])});
  }
  return out;
}

}  // namespace papal
