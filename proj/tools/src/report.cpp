#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace cerg::cli {

namespace {

std::string fmt_vec(const Eigen::VectorXd& v) {
    std::ostringstream out;
    out << "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out << ", ";
        out << v(i);
    }
    out << "]";
    return out.str();
}

}  // namespace

RunStats compute_stats(const TraceLog& trace, const ConstraintSet& set, std::string label,
                       bool governed) {
    RunStats stats;
    stats.label = std::move(label);
    stats.governed = governed;
    stats.aborted = trace.aborted;
    stats.error = trace.error;
    if (trace.samples() == 0) return stats;

    stats.phases = detect_phases(trace, set);
    stats.worst_or = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < trace.samples(); ++k) {
        const double residual = std::min(trace.s(k), trace.energy(k) - set.e_max);
        stats.worst_or = std::max(stats.worst_or, residual);
        if (residual > kOrTolerance) ++stats.or_violations;
        const double f = trace.force.col(k).norm();
        if (f > stats.peak_force) {
            stats.peak_force = f;
            stats.peak_force_time = trace.t(k);
        }
        if (!stats.contact_time && trace.s(k) >= 0.0) stats.contact_time = trace.t(k);
    }

    const double span = trace.t(trace.samples() - 1) - trace.t(0);
    const double window = std::min(5.0, 0.25 * span);
    if (window > 0.0) stats.steady = steady_state_metrics(trace, window);
    return stats;
}

std::string format_summary(const std::string& scenario_path, const RunStats& stats,
                           const Scenario& scenario,
                           const std::vector<std::string>& artifacts) {
    std::ostringstream out;
    out << "scenario: " << scenario_path << "\n"
        << "mode: " << (stats.governed ? "governed" : "baseline") << "  controller: "
        << (scenario.gains.mode == ControlMode::Joint ? "joint" : "task") << "\n"
        << "duration: " << scenario.duration << " s  dt_sim: " << scenario.dt_sim
        << " s  dt_gov: " << scenario.governor.dt_gov << " s  E_max: "
        << scenario.constraints.e_max << " J\n";
    if (stats.aborted) {
        out << "ABORTED: " << stats.error << " (partial trace written)\n";
    }
    out << "phases:\n";
    for (const PhaseEvent& e : stats.phases) {
        out << "  " << phase_name(e.phase) << " from t = " << e.t << " s\n";
    }
    if (stats.contact_time) {
        out << "contact onset: " << *stats.contact_time << " s\n";
    } else {
        out << "contact onset: none\n";
    }
    out << "peak |F|: " << stats.peak_force << " N at t = " << stats.peak_force_time << " s\n"
        << "compliant residual max(min(s, V - E_max)): " << stats.worst_or << "  violations (> "
        << kOrTolerance << "): " << stats.or_violations << "\n";
    if (stats.steady) {
        out << "steady state: v = " << fmt_vec(stats.steady->v_final)
            << "  q = " << fmt_vec(stats.steady->q_final) << "\n"
            << "  mean |F| = " << stats.steady->force_mean
            << " N  mean V = " << stats.steady->energy_mean << " J\n";
    }
    if (!artifacts.empty()) {
        out << "artifacts:\n";
        for (const std::string& a : artifacts) out << "  " << a << "\n";
    }
    return out.str();
}

std::string format_comparison(const std::string& scenario_path,
                              const std::vector<RunStats>& rows) {
    std::ostringstream out;
    out << "scenario: " << scenario_path << "\n\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-16s %10s %10s %10s %10s %10s\n", "run", "contact_t",
                  "peak|F|", "mean|F|", "mean V", "OR viol");
    out << line;
    for (const RunStats& r : rows) {
        char contact[32] = "none";
        if (r.contact_time) std::snprintf(contact, sizeof contact, "%.3f", *r.contact_time);
        std::snprintf(line, sizeof line, "%-16s %10s %10.4f %10.4f %10.5f %10ld\n",
                      r.label.c_str(), contact, r.peak_force,
                      r.steady ? r.steady->force_mean : 0.0,
                      r.steady ? r.steady->energy_mean : 0.0, r.or_violations);
        out << line;
        if (r.aborted) out << "  (aborted: " << r.error << ")\n";
    }
    return out.str();
}

}  // namespace cerg::cli
