#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace cerg::cli {

namespace {

constexpr double kWidth = 760, kHeight = 440;
constexpr double kLeft = 70, kRight = 24, kTop = 42, kBottom = 56;

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void absorb(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void pad() {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo < 1e-12) {
            lo -= 1.0;
            hi += 1.0;
        } else {
            const double m = 0.05 * (hi - lo);
            lo -= m;
            hi += m;
        }
    }
    double span() const { return hi - lo; }
};

double nice_step(double span) {
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    if (frac < 1.5) return mag;
    if (frac < 3.5) return 2.0 * mag;
    if (frac < 7.5) return 5.0 * mag;
    return 10.0 * mag;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_chart_svg(const std::string& path, const ChartSpec& spec) {
    if (spec.series.empty()) throw std::invalid_argument("chart without series");

    Range rx, ry;
    for (const Series& s : spec.series) {
        if (s.x.size() != s.y.size()) {
            throw std::invalid_argument("series '" + s.label + "' has mismatched lengths");
        }
        for (Eigen::Index i = 0; i < s.x.size(); ++i) {
            rx.absorb(s.x(i));
            ry.absorb(s.y(i));
        }
    }
    for (const HLine& h : spec.hlines) ry.absorb(h.y);
    rx.pad();
    ry.pad();
    if (spec.equal_axes) {
        const double span = std::max(rx.span(), ry.span());
        const double cx = 0.5 * (rx.lo + rx.hi), cy = 0.5 * (ry.lo + ry.hi);
        rx = {cx - span / 2, cx + span / 2};
        ry = {cy - span / 2, cy + span / 2};
    }

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - rx.lo) / rx.span() * pw; };
    auto sy = [&](double y) { return kTop + ph - (y - ry.lo) / ry.span() * ph; };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\" font-weight=\"bold\">"
        << escape(spec.title) << "</text>\n";

    // grid and ticks
    const double xstep = nice_step(rx.span()), ystep = nice_step(ry.span());
    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (double x = std::ceil(rx.lo / xstep) * xstep; x <= rx.hi + 1e-12 * rx.span(); x += xstep) {
        const double px = sx(x);
        out << "<line x1=\"" << fmt(px) << "\" y1=\"" << kTop << "\" x2=\"" << fmt(px)
            << "\" y2=\"" << kTop + ph << "\" stroke=\"#e0e0e0\"/>\n"
            << "<text x=\"" << fmt(px) << "\" y=\"" << kTop + ph + 16
            << "\" text-anchor=\"middle\">" << fmt(std::abs(x) < 1e-12 * xstep ? 0.0 : x)
            << "</text>\n";
    }
    for (double y = std::ceil(ry.lo / ystep) * ystep; y <= ry.hi + 1e-12 * ry.span(); y += ystep) {
        const double py = sy(y);
        out << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(py) << "\" x2=\"" << kLeft + pw
            << "\" y2=\"" << fmt(py) << "\" stroke=\"#e0e0e0\"/>\n"
            << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(py + 4)
            << "\" text-anchor=\"end\">" << fmt(std::abs(y) < 1e-12 * ystep ? 0.0 : y)
            << "</text>\n";
    }
    out << "</g>\n";

    // frame and axis labels
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\""
        << ph << "\" fill=\"none\" stroke=\"#333\"/>\n"
        << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << escape(spec.x_label) << "</text>\n"
        << "<text x=\"18\" y=\"" << kTop + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 "
        << kTop + ph / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

    for (const HLine& h : spec.hlines) {
        const double py = sy(h.y);
        out << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(py) << "\" x2=\"" << kLeft + pw
            << "\" y2=\"" << fmt(py) << "\" stroke=\"" << h.color
            << "\" stroke-dasharray=\"6 4\" stroke-width=\"1.5\"/>\n";
        if (!h.label.empty()) {
            out << "<text x=\"" << kLeft + pw - 6 << "\" y=\"" << fmt(py - 5)
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
                << h.color << "\">" << escape(h.label) << "</text>\n";
        }
    }

    for (const Series& s : spec.series) {
        if (s.x.size() == 0) continue;
        // cap emitted points; figures stay faithful at this density
        const Eigen::Index stride = std::max<Eigen::Index>(1, s.x.size() / 2000);
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
        if (s.dashed) out << " stroke-dasharray=\"5 3\"";
        out << " points=\"";
        for (Eigen::Index i = 0; i < s.x.size(); i += stride) {
            out << fmt(sx(s.x(i))) << ',' << fmt(sy(s.y(i))) << ' ';
        }
        const Eigen::Index last = s.x.size() - 1;
        out << fmt(sx(s.x(last))) << ',' << fmt(sy(s.y(last))) << "\"/>\n";
    }

    // legend
    double ly = kTop + 10;
    for (const Series& s : spec.series) {
        if (s.label.empty()) continue;
        out << "<line x1=\"" << kLeft + 12 << "\" y1=\"" << fmt(ly) << "\" x2=\"" << kLeft + 36
            << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
        if (s.dashed) out << " stroke-dasharray=\"5 3\"";
        out << "/>\n<text x=\"" << kLeft + 42 << "\" y=\"" << fmt(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label)
            << "</text>\n";
        ly += 18;
    }

    out << "</svg>\n";
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace cerg::cli
