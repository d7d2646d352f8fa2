#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "firebreak/errors.hpp"
#include "firebreak/harness.hpp"

namespace firebreak {
namespace {

std::string fixed(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string cell(const std::optional<double>& v) { return v ? fixed(*v) : "NA"; }

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

std::string run_tag(const RunRecord& run) {
    std::string alpha = alpha_label(run.alpha);
    alpha.pop_back();  // drop '%'
    return std::string(to_string(run.algorithm)) + "_a" + alpha + "_s" + std::to_string(run.seed);
}

template <class Value>
PercentTable table_for(const RunReport& report, Algorithm algorithm, Value value) {
    PercentTable table;
    table.alphas = report.alphas;
    for (std::uint64_t seed : report.seeds) {
        table.row_labels.push_back(std::to_string(seed));
        auto& row = table.values.emplace_back();
        for (double alpha : report.alphas) {
            const RunRecord& run = report.at(algorithm, alpha, seed);
            row.push_back(run.ok() ? std::optional<double>(value(run)) : std::nullopt);
        }
    }
    return table;
}

} // namespace

std::string alpha_label(double alpha) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g%%", alpha * 100.0);
    return buf;
}

std::optional<double> mean_of(const std::vector<std::optional<double>>& values) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& v : values) {
        if (v) {
            sum += *v;
            ++n;
        }
    }
    if (n == 0) {
        return std::nullopt;
    }
    return sum / static_cast<double>(n);
}

std::vector<std::optional<double>> PercentTable::mean_row() const {
    std::vector<std::optional<double>> means;
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        std::vector<std::optional<double>> column;
        for (const auto& row : values) {
            column.push_back(row[a]);
        }
        means.push_back(mean_of(column));
    }
    return means;
}

void PercentTable::write_csv(std::ostream& out) const {
    out << "test";
    for (double a : alphas) {
        out << ',' << alpha_label(a);
    }
    out << '\n';
    auto write_row = [&](const std::string& label, const std::vector<std::optional<double>>& row) {
        out << label;
        for (const auto& v : row) {
            out << ',' << cell(v);
        }
        out << '\n';
    };
    for (std::size_t r = 0; r < values.size(); ++r) {
        write_row(row_labels[r], values[r]);
    }
    write_row("Mean", mean_row());
}

PercentTable burned_table(const RunReport& report, Algorithm algorithm) {
    return table_for(report, algorithm, [](const RunRecord& run) { return run.estimate.percent_burned; });
}

PercentTable lost_cells_table(const RunReport& report, Algorithm algorithm) {
    return table_for(report, algorithm,
                     [](const RunRecord& run) { return run.lost_cells.total_percent; });
}

void write_report(const RunReport& report, const Landscape& landscape,
                  const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "solutions");
    fs::create_directories(dir / "traces");

    {
        auto out = open_out(dir / "runs.csv");
        out << "algorithm,alpha,seed,status,percent_burned,std_err_percent,mean_loss,"
               "treated_cells,lost_cells,lost_cells_percent,final_seed,iterations,solution_id\n";
        for (const auto& run : report.runs) {
            out << to_string(run.algorithm) << ',' << alpha_label(run.alpha) << ',' << run.seed
                << ',';
            if (!run.ok()) {
                out << "failed,NA,NA,NA,NA,NA,NA," << run.final_seed << ",NA,NA\n";
                continue;
            }
            out << "ok," << fixed(run.estimate.percent_burned) << ','
                << cell(run.estimate.std_err_percent(report.flammable_cells)) << ','
                << fixed(run.estimate.mean_loss) << ',' << run.solution->treated_count() << ','
                << fixed(run.lost_cells.total) << ',' << fixed(run.lost_cells.total_percent)
                << ',' << run.final_seed << ',' << run.iterations << ','
                << run.solution->id() << '\n';
        }
    }

    for (Algorithm algorithm : report.algorithms) {
        const std::string name(to_string(algorithm));
        auto burned = open_out(dir / ("burned_" + name + ".csv"));
        burned_table(report, algorithm).write_csv(burned);
        auto lost = open_out(dir / ("lost_cells_" + name + ".csv"));
        lost_cells_table(report, algorithm).write_csv(lost);
    }

    nlohmann::ordered_json summary;
    summary["flammable_cells"] = report.flammable_cells;
    summary["final_replications"] = report.final_replications;
    summary["alphas"] = report.alphas;
    summary["seeds"] = report.seeds;
    auto& algos = summary["algorithms"] = nlohmann::ordered_json::object();
    for (Algorithm algorithm : report.algorithms) {
        const auto burned = burned_table(report, algorithm).mean_row();
        const auto lost = lost_cells_table(report, algorithm).mean_row();
        auto& entry = algos[std::string(to_string(algorithm))] = nlohmann::ordered_json::object();
        for (std::size_t a = 0; a < report.alphas.size(); ++a) {
            auto& col = entry[alpha_label(report.alphas[a])];
            col["mean_percent_burned"] = burned[a] ? nlohmann::ordered_json(*burned[a]) : nullptr;
            col["mean_lost_cells_percent"] = lost[a] ? nlohmann::ordered_json(*lost[a]) : nullptr;
        }
    }
    auto& runs = summary["runs"] = nlohmann::ordered_json::array();
    for (const auto& run : report.runs) {
        nlohmann::ordered_json r;
        r["algorithm"] = to_string(run.algorithm);
        r["alpha"] = run.alpha;
        r["seed"] = run.seed;
        r["final_seed"] = run.final_seed;
        if (!run.ok()) {
            r["status"] = "failed";
            r["error"] = *run.error;
        } else {
            r["status"] = "ok";
            r["percent_burned"] = run.estimate.percent_burned;
            const auto se = run.estimate.std_err_percent(report.flammable_cells);
            r["std_err_percent"] = se ? nlohmann::ordered_json(*se) : nullptr;
            r["mean_loss"] = run.estimate.mean_loss;
            r["treated_cells"] = run.solution->treated_count();
            r["lost_cells"] = run.lost_cells.total;
            r["lost_cells_percent"] = run.lost_cells.total_percent;
            r["iterations"] = run.iterations;
            r["solution_id"] = run.solution->id();
            r["solution_file"] = "solutions/" + run_tag(run) + ".csv";
        }
        runs.push_back(std::move(r));
    }
    {
        auto out = open_out(dir / "summary.json");
        out << summary.dump(2) << '\n';
    }

    auto timing = open_out(dir / "timing.csv");
    timing << "algorithm,alpha,seed,wall_s\n";
    for (const auto& run : report.runs) {
        timing << to_string(run.algorithm) << ',' << alpha_label(run.alpha) << ',' << run.seed
               << ',' << fixed(run.wall_seconds, 3) << '\n';
        if (!run.ok()) {
            continue;
        }
        const std::string tag = run_tag(run);
        write_solution(dir / "solutions" / (tag + ".csv"), landscape, *run.solution);
        write_ascii_grid(dir / "solutions" / (tag + ".asc"), treated_raster(landscape, *run.solution));
        auto trace = open_out(dir / "traces" / (tag + ".csv"));
        run.trace.write_csv(trace);
    }
}

} // namespace firebreak
