#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "papal/solver.hpp"

namespace papal {

inline constexpr const char* kTraceHeader =
    "t,gap_estimate,sup_norm_h,sup_norm_g,inner_accept_rate,wall_ms";

// Values are printed with 17 significant digits; NaN as "nan".
void write_trace_csv(const std::vector<IterationRecord>& trace, std::ostream& out);
void save_trace_csv(const std::vector<IterationRecord>& trace, const std::string& path);
std::vector<IterationRecord> read_trace_csv(std::istream& in);

}  // namespace papal
