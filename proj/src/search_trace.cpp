#include <iomanip>
#include <ostream>

#include "firebreak/optimizers.hpp"

namespace firebreak {

void SearchTrace::record(double elapsed_s, double estimate_mean,
                         std::optional<double> estimate_stderr, std::string solution_id) {
    // Keep a gap that survives the microsecond resolution of write_csv.
    constexpr double kMinGap = 1e-6;
    if (!points_.empty() && elapsed_s < points_.back().elapsed_s + kMinGap) {
        elapsed_s = points_.back().elapsed_s + kMinGap;
    }
    points_.push_back({elapsed_s, estimate_mean, estimate_stderr, std::move(solution_id)});
}

void SearchTrace::record(double elapsed_s, const Estimate& estimate, std::size_t flammable_cells,
                         std::string solution_id) {
    record(elapsed_s, estimate.percent_burned, estimate.std_err_percent(flammable_cells),
           std::move(solution_id));
}

void SearchTrace::write_csv(std::ostream& out) const {
    out << "elapsed_s,estimate_mean,estimate_stderr,solution_id\n";
    for (const TracePoint& p : points_) {
        out << std::fixed << std::setprecision(6) << p.elapsed_s << ',' << p.estimate_mean << ',';
        if (p.estimate_stderr) {
            out << *p.estimate_stderr;
        }
        out << ',' << p.solution_id << '\n';
    }
    out << std::defaultfloat;
}

} // namespace firebreak
