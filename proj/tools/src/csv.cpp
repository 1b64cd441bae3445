#include "csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cerg::cli {

const char* const kTraceHeader = "t,q1,q2,qd1,qd2,v1,v2,u1,u2,V,s,dsm_h,dsm_s,dsm_e,dsm,fx,fy,phase";

void write_trace_csv(const std::string& path, const TraceLog& trace) {
    if (trace.q.rows() != 2) {
        throw std::invalid_argument("trace CSV schema is defined for 2-dof plants only");
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);

    out << kTraceHeader << '\n';
    char buf[512];
    for (Eigen::Index k = 0; k < trace.samples(); ++k) {
        const int len = std::snprintf(
            buf, sizeof buf,
            "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%s\n",
            trace.t(k), trace.q(0, k), trace.q(1, k), trace.qd(0, k), trace.qd(1, k),
            trace.v(0, k), trace.v(1, k), trace.u(0, k), trace.u(1, k), trace.energy(k),
            trace.s(k), trace.dsm_h(k), trace.dsm_s(k), trace.dsm_e(k), trace.dsm(k),
            trace.force(0, k), trace.force(1, k), phase_name(trace.phase[static_cast<std::size_t>(k)]));
        out.write(buf, len);
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace cerg::cli
