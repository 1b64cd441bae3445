#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cerg/sim.hpp"

namespace cerg::cli {

/// Residual above which a record counts as violating the compliant
/// constraint min(s, V - E_max) <= 0.
inline constexpr double kOrTolerance = 1e-6;

/// Derived statistics of one run, shared by summaries and comparison tables.
struct RunStats {
    std::string label;
    bool governed = true;
    std::vector<PhaseEvent> phases;
    std::optional<double> contact_time;
    double peak_force = 0.0;
    double peak_force_time = 0.0;
    double worst_or = 0.0;  ///< max over records of min(s, V - e_max)
    long or_violations = 0;
    std::optional<SteadyStateMetrics> steady;  ///< absent for very short traces
    bool aborted = false;
    std::string error;
};

RunStats compute_stats(const TraceLog& trace, const ConstraintSet& set, std::string label,
                       bool governed);

/// Human-readable single-run summary.
std::string format_summary(const std::string& scenario_path, const RunStats& stats,
                           const Scenario& scenario,
                           const std::vector<std::string>& artifacts);

/// Side-by-side table over several runs.
std::string format_comparison(const std::string& scenario_path,
                              const std::vector<RunStats>& rows);

}  // namespace cerg::cli
