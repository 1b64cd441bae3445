#pragma once

#include <string>

#include "cerg/sim.hpp"

namespace cerg::cli {

/// Column schema of a trace CSV; fixed so downstream tooling can rely on it.
extern const char* const kTraceHeader;

/// Write one trace as CSV with 9 significant digits. Only 2-dof traces have a
/// defined schema; anything else throws std::invalid_argument. Throws
/// std::runtime_error when the file cannot be written.
void write_trace_csv(const std::string& path, const TraceLog& trace);

}  // namespace cerg::cli
