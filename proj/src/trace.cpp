#include "qpalm/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qpalm {

namespace {

// Shortest exact decimal for a double; fixed format keeps traces byte-stable.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
    if (!trace.config_echo.is_null())
        out << "# " << trace.config_echo.dump() << "\n";
    out << "t,f";
    for (int i = 1; i <= trace.p; ++i) out << ",g_" << i;
    out << ",g_max,comp,lam_norm,step_norm,inner_iters,cpu_s,moreau_sq,r_alpha\n";
    for (const TraceRow& row : trace.rows) {
        out << row.t << ',' << fmt(row.f);
        for (int i = 0; i < trace.p; ++i) out << ',' << fmt(row.g[i]);
        out << ',' << fmt(row.max_violation()) << ',' << fmt(row.comp) << ','
            << fmt(row.lam_norm) << ',' << fmt(row.step_norm) << ',' << row.inner_iters << ','
            << fmt(row.cpu_s) << ',' << fmt(row.moreau_sq) << ',' << fmt(row.r_alpha) << "\n";
    }
}

void write_trace_csv(const RunTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open trace file for writing: " + path);
    write_trace_csv(trace, out);
}

RunTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open trace file: " + path);

    RunTrace trace;
    std::string line;
    bool have_header = false;
    int p = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto body = line.substr(1);
            try {
                trace.config_echo = nlohmann::json::parse(body);
            } catch (const nlohmann::json::exception&) {
                // tolerated: comment line without an echo
            }
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            // count g_i columns between f and g_max
            for (const auto& name : cells)
                if (name.size() > 2 && name.rfind("g_", 0) == 0 && name != "g_max") ++p;
            trace.p = p;
            have_header = true;
            continue;
        }
        if (static_cast<int>(cells.size()) != p + 10)
            throw InputError("trace CSV: wrong column count in " + path);
        TraceRow row;
        std::size_t k = 0;
        row.t = std::stoi(cells[k++]);
        row.f = std::stod(cells[k++]);
        row.g = Vec(p);
        for (int i = 0; i < p; ++i) row.g[i] = std::stod(cells[k++]);
        ++k; // g_max is derived
        row.comp = std::stod(cells[k++]);
        row.lam_norm = std::stod(cells[k++]);
        row.step_norm = std::stod(cells[k++]);
        row.inner_iters = std::stoi(cells[k++]);
        row.cpu_s = std::stod(cells[k++]);
        row.moreau_sq = std::stod(cells[k++]);
        row.r_alpha = std::stod(cells[k++]);
        trace.rows.push_back(std::move(row));
    }
    if (!have_header) throw InputError("trace CSV: missing header in " + path);
    return trace;
}

nlohmann::json trace_summary_json(const RunTrace& trace) {
    nlohmann::json summary;
    summary["config"] = trace.config_echo;
    summary["rows"] = trace.size();
    summary["truncated_by_budget"] = trace.truncated_by_budget;
    summary["wall_time_s"] = trace.wall_time_s;
    if (!trace.rows.empty()) {
        const TraceRow& last = trace.rows.back();
        summary["final_metrics"] = {{"t", last.t},
                                    {"f", last.f},
                                    {"max_violation", last.max_violation()},
                                    {"comp", last.comp},
                                    {"lam_norm", last.lam_norm},
                                    {"step_norm", last.step_norm},
                                    {"r_alpha", last.r_alpha}};
    }
    if (trace.final_x.size())
        summary["final_x"] = std::vector<double>(trace.final_x.begin(), trace.final_x.end());
    if (trace.final_lambda.size())
        summary["final_lambda"] =
            std::vector<double>(trace.final_lambda.begin(), trace.final_lambda.end());
    summary["run_audit"] = {{"min_multiplier", trace.min_multiplier},
                            {"max_component_drift", trace.max_component_drift},
                            {"max_norm_drift", trace.max_norm_drift},
                            {"max_step_norm", trace.max_step_norm}};
    return summary;
}

std::string content_digest(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace qpalm
