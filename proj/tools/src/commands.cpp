#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <vector>

#include "csv.hpp"
#include "report.hpp"
#include "scenario_file.hpp"
#include "svg_plot.hpp"

namespace cerg::cli {

namespace {

namespace fs = std::filesystem;

fs::path resolve_out_dir(const std::string& flag, const ScenarioDoc& doc) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("CERG_OUT_DIR"); env != nullptr && *env != '\0') return env;
    if (!doc.out_dir.empty()) return doc.out_dir;
    return ".";
}

std::string mode_name(ControlMode m) { return m == ControlMode::Joint ? "joint" : "task"; }

// Planar trajectory chart: end-effector plane for task-space surfaces, the
// configuration plane for joint-space ones, so the wall is drawable in both.
ChartSpec plane_chart(const Scenario& sc, const TraceLog& trace) {
    ChartSpec spec;
    const bool task = sc.constraints.soft.space == SoftSpace::Task;
    spec.title = task ? "End-effector trajectory" : "Configuration trajectory";
    spec.x_label = task ? "x" : "q1";
    spec.y_label = task ? "y" : "q2";

    const Eigen::Index N = trace.samples();
    Series sq{Eigen::VectorXd(N), Eigen::VectorXd(N), task ? "f(q)" : "q", "#1f77b4", false};
    Series sv{Eigen::VectorXd(N), Eigen::VectorXd(N), task ? "f(v)" : "v", "#2ca02c", true};
    for (Eigen::Index k = 0; k < N; ++k) {
        if (task) {
            const Eigen::Vector2d pq = sc.plant->forward_kinematics(trace.q.col(k));
            const Eigen::Vector2d pv = sc.plant->forward_kinematics(trace.v.col(k));
            sq.x(k) = pq.x();
            sq.y(k) = pq.y();
            sv.x(k) = pv.x();
            sv.y(k) = pv.y();
        } else {
            sq.x(k) = trace.q(0, k);
            sq.y(k) = trace.q(1, k);
            sv.x(k) = trace.v(0, k);
            sv.y(k) = trace.v(1, k);
        }
    }

    // wall segment: boundary of normal . p <= offset, spanning the data extent
    const Eigen::Vector2d n(sc.constraints.soft.normal(0), sc.constraints.soft.normal(1));
    const Eigen::Vector2d tangent(-n.y(), n.x());
    const Eigen::Vector2d anchor = sc.constraints.soft.offset * n;
    const double lo_x = std::min(sq.x.minCoeff(), sv.x.minCoeff());
    const double hi_x = std::max(sq.x.maxCoeff(), sv.x.maxCoeff());
    const double lo_y = std::min(sq.y.minCoeff(), sv.y.minCoeff());
    const double hi_y = std::max(sq.y.maxCoeff(), sv.y.maxCoeff());
    const double extent =
        std::max({hi_x - lo_x, hi_y - lo_y, 1e-3}) * 1.2;
    Series wall{Eigen::VectorXd(2), Eigen::VectorXd(2), "wall", "#d62728", true};
    wall.x << anchor.x() - extent * tangent.x(), anchor.x() + extent * tangent.x();
    wall.y << anchor.y() - extent * tangent.y(), anchor.y() + extent * tangent.y();

    spec.series = {sq, sv, wall};
    spec.equal_axes = true;
    return spec;
}

Eigen::VectorXd force_magnitude(const TraceLog& trace) {
    return trace.force.colwise().norm().transpose();
}

std::vector<std::string> write_plots(const fs::path& dir, const std::string& stem,
                                     const Scenario& sc, const TraceLog& trace) {
    std::vector<std::string> written;

    ChartSpec energy;
    energy.title = "Lyapunov energy";
    energy.x_label = "t [s]";
    energy.y_label = "V [J]";
    energy.series = {{trace.t, trace.energy, "V", "#1f77b4", false}};
    energy.hlines = {{sc.constraints.e_max, "E_max", "#d62728"}};
    const fs::path energy_path = dir / (stem + "_energy.svg");
    write_chart_svg(energy_path.string(), energy);
    written.push_back(energy_path.string());

    ChartSpec force;
    force.title = "Contact force";
    force.x_label = "t [s]";
    force.y_label = "|F| [N]";
    force.series = {{trace.t, force_magnitude(trace), "|F|", "#9467bd", false}};
    const fs::path force_path = dir / (stem + "_force.svg");
    write_chart_svg(force_path.string(), force);
    written.push_back(force_path.string());

    const fs::path plane_path = dir / (stem + "_plane.svg");
    write_chart_svg(plane_path.string(), plane_chart(sc, trace));
    written.push_back(plane_path.string());

    return written;
}

int run_failure_exit(const std::exception& e, const char* what) {
    std::cerr << what << ": " << e.what() << "\n";
    return 2;
}

}  // namespace

int cmd_run(const std::string& path, const RunOptions& options) {
    ScenarioDoc doc;
    try {
        doc = load_scenario_file(path);
    } catch (const ScenarioParseError& e) {
        return run_failure_exit(e, "parse error");
    } catch (const std::invalid_argument& e) {
        return run_failure_exit(e, "invalid scenario");
    }

    Scenario sc = doc.scenario;
    std::string stem = doc.stem;
    if (options.no_governor) {
        sc.governor_enabled = false;
        stem += "_baseline";
    }

    try {
        const fs::path dir = resolve_out_dir(options.out_dir, doc);
        fs::create_directories(dir);

        const TraceLog trace = run_closed_loop(sc);
        std::vector<std::string> artifacts;

        const fs::path csv_path = dir / (stem + ".csv");
        write_trace_csv(csv_path.string(), trace);
        artifacts.push_back(csv_path.string());

        if (options.plots || doc.plots) {
            const auto plots = write_plots(dir, stem, sc, trace);
            artifacts.insert(artifacts.end(), plots.begin(), plots.end());
        }

        const RunStats stats =
            compute_stats(trace, sc.constraints, stem, sc.governor_enabled);
        const std::string summary = format_summary(path, stats, sc, artifacts);
        const fs::path summary_path = dir / (stem + "_summary.txt");
        std::ofstream(summary_path) << summary;
        std::cout << summary;

        if (trace.aborted) {
            std::cerr << "numerical failure: " << trace.error << "\n";
            return 3;
        }
        return 0;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        return run_failure_exit(e, "invalid scenario");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

int cmd_compare(const std::string& path, const std::string& out_dir) {
    ScenarioDoc doc;
    try {
        doc = load_scenario_file(path);
    } catch (const ScenarioParseError& e) {
        return run_failure_exit(e, "parse error");
    } catch (const std::invalid_argument& e) {
        return run_failure_exit(e, "invalid scenario");
    }

    struct Job {
        std::string label;
        Scenario scenario;
        std::future<TraceLog> result;
        TraceLog trace;
    };

    try {
        const fs::path dir = resolve_out_dir(out_dir, doc);
        fs::create_directories(dir);

        std::vector<Job> jobs;
        for (ControlMode mode : {ControlMode::Joint, ControlMode::Task}) {
            const auto& gains =
                mode == ControlMode::Joint ? doc.joint_gains : doc.task_gains;
            if (!gains.has_value()) continue;
            for (bool governed : {true, false}) {
                Job job;
                job.label = mode_name(mode) + (governed ? "/governed" : "/baseline");
                job.scenario = doc.with_mode(mode);
                job.scenario.governor_enabled = governed;
                jobs.push_back(std::move(job));
            }
        }

        for (Job& job : jobs) {
            job.result = std::async(std::launch::async,
                                    [&job] { return run_closed_loop(job.scenario); });
        }
        for (Job& job : jobs) job.trace = job.result.get();

        // artifacts only after every run finished
        bool any_aborted = false;
        std::vector<RunStats> rows;
        for (Job& job : jobs) {
            std::string file_stem = doc.stem + "_" + job.label;
            for (char& c : file_stem) {
                if (c == '/') c = '_';
            }
            write_trace_csv((dir / (file_stem + ".csv")).string(), job.trace);
            rows.push_back(compute_stats(job.trace, job.scenario.constraints, job.label,
                                         job.scenario.governor_enabled));
            any_aborted = any_aborted || job.trace.aborted;
        }

        for (ControlMode mode : {ControlMode::Joint, ControlMode::Task}) {
            const std::string prefix = mode_name(mode) + "/";
            ChartSpec energy, force;
            energy.title = "Lyapunov energy, " + mode_name(mode) + " controller";
            energy.x_label = force.x_label = "t [s]";
            energy.y_label = "V [J]";
            energy.hlines = {{doc.scenario.constraints.e_max, "E_max", "#d62728"}};
            force.title = "Contact force, " + mode_name(mode) + " controller";
            force.y_label = "|F| [N]";
            for (const Job& job : jobs) {
                if (job.label.rfind(prefix, 0) != 0) continue;
                const bool governed = job.scenario.governor_enabled;
                const std::string who = governed ? "governed" : "baseline";
                const std::string color = governed ? "#1f77b4" : "#ff7f0e";
                energy.series.push_back({job.trace.t, job.trace.energy, who, color, !governed});
                force.series.push_back(
                    {job.trace.t, force_magnitude(job.trace), who, color, !governed});
            }
            if (energy.series.empty()) continue;
            write_chart_svg((dir / (doc.stem + "_compare_energy_" + mode_name(mode) + ".svg")).string(),
                            energy);
            write_chart_svg((dir / (doc.stem + "_compare_force_" + mode_name(mode) + ".svg")).string(),
                            force);
        }

        const std::string table = format_comparison(path, rows);
        std::ofstream(dir / (doc.stem + "_compare.txt")) << table;
        std::cout << table;

        if (any_aborted) {
            std::cerr << "numerical failure in at least one run\n";
            return 3;
        }
        return 0;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        return run_failure_exit(e, "invalid scenario");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

int cmd_validate(const std::string& path) {
    ScenarioDoc doc;
    try {
        doc = load_scenario_file(path);
    } catch (const ScenarioParseError& e) {
        return run_failure_exit(e, "parse error");
    } catch (const std::invalid_argument& e) {
        return run_failure_exit(e, "invalid scenario");
    }

    const Scenario& sc = doc.scenario;
    std::ostringstream out;
    out << "scenario file " << path << " is valid\n"
        << "plant: " << sc.plant->dof() << " dof\n"
        << "controller: " << mode_name(doc.mode)
        << (doc.joint_gains && doc.task_gains ? " (both gain sets present)" : "") << "\n"
        << "governor: " << (sc.governor_enabled ? "enabled" : "disabled")
        << "  delta_s = " << sc.governor.delta_s << "  eta = " << sc.governor.eta
        << "  zeta = " << sc.governor.zeta << "  delta_h = " << sc.governor.delta_h << "\n"
        << "  kappa = [" << sc.governor.kappa_h << ", " << sc.governor.kappa_s << ", "
        << sc.governor.kappa_e << "]  t_pred = " << sc.governor.t_pred
        << "  dt_pred = " << sc.governor.dt_pred << "  dt_gov = " << sc.governor.dt_gov << "\n"
        << "constraints: " << sc.constraints.hard.size() << " hard, soft "
        << (sc.constraints.soft.space == SoftSpace::Joint ? "joint" : "task")
        << "-space, E_max = " << sc.constraints.e_max << " J\n"
        << "contact: k = " << sc.contact.stiffness << "  b = " << sc.contact.damping << "\n"
        << "sim: duration = " << sc.duration << " s  dt = " << sc.dt_sim << " s\n";

    // Steady-state contact energy check: defined when the controller
    // stiffness along the surface normal is a single scalar.
    std::optional<double> kp_eff;
    if (sc.constraints.soft.space == SoftSpace::Joint && sc.gains.mode == ControlMode::Joint) {
        kp_eff = sc.constraints.soft.normal.dot(sc.gains.kp * sc.constraints.soft.normal);
    } else if (sc.constraints.soft.space == SoftSpace::Task &&
               sc.gains.mode == ControlMode::Task) {
        kp_eff = sc.gains.task_kp;
    }
    if (kp_eff) {
        const double e_ss = 0.5 * *kp_eff * sc.governor.delta_s * sc.governor.delta_s;
        out << "steady-state contact: F_ss = " << *kp_eff * sc.governor.delta_s
            << " N  E_ss = " << e_ss << " J\n";
        if (e_ss >= sc.constraints.e_max) {
            out << "WARNING: E_ss = " << e_ss << " J is not below E_max = "
                << sc.constraints.e_max << " J; lower delta_s or raise E_max\n";
        }
    } else {
        out << "steady-state contact: no scalar stiffness along the normal for this "
               "controller/surface pairing; E_ss check skipped\n";
    }

    std::cout << out.str();
    return 0;
}

}  // namespace cerg::cli
