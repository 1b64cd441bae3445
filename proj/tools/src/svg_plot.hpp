#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cerg::cli {

/// One polyline of a chart. `x` and `y` must have equal length.
struct Series {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    std::string label;
    std::string color = "#1f77b4";
    bool dashed = false;
};

struct HLine {
    double y = 0.0;
    std::string label;
    std::string color = "#d62728";
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::vector<HLine> hlines;
    bool equal_axes = false;  ///< same scale on both axes (planar trajectories)
};

/// Render a line chart as a standalone SVG file. Throws std::runtime_error on
/// I/O failure, std::invalid_argument when there is nothing to draw.
void write_chart_svg(const std::string& path, const ChartSpec& spec);

}  // namespace cerg::cli
