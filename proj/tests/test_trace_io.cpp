#include <doctest.h>

#include <cstdio>
#include <sstream>

#include "qpalm/trace.hpp"

using namespace qpalm;

namespace {

RunTrace sample_trace() {
    RunTrace trace;
    trace.p = 2;
    trace.config_echo = {{"solver", "qpalm"}, {"T", 3}};
    for (int t = 1; t <= 3; ++t) {
        TraceRow row;
        row.t = t;
        row.f = -1.5 * t + 0.123456789012345;
        row.g = Vec(2);
        row.g << -0.25 * t, 1e-17 * t;
        row.comp = 0.5 / t;
        row.lam_norm = 0.1 * t;
        row.step_norm = 1.0 / (t * t);
        row.inner_iters = 4 + t;
        row.cpu_s = 0.01 * t;
        if (t == 2) row.moreau_sq = 0.75;
        trace.rows.push_back(row);
    }
    trace.final_x = Vec::Zero(2);
    trace.final_lambda = Vec::Zero(2);
    return trace;
}

} // namespace

TEST_CASE("trace CSV round-trip preserves every recorded value") {
    const RunTrace trace = sample_trace();
    const std::string path = "trace_io_tmp.csv";
    write_trace_csv(trace, path);
    const RunTrace loaded = read_trace_csv(path);
    std::remove(path.c_str());

    REQUIRE(loaded.size() == trace.size());
    CHECK(loaded.p == trace.p);
    CHECK(loaded.config_echo["T"] == 3);
    for (int k = 0; k < trace.size(); ++k) {
        const TraceRow& a = trace.rows[k];
        const TraceRow& b = loaded.rows[k];
        CHECK(a.t == b.t);
        CHECK(a.f == b.f); // %.17g is exact for doubles
        CHECK((a.g - b.g).norm() == 0.0);
        CHECK(a.comp == b.comp);
        CHECK(a.lam_norm == b.lam_norm);
        CHECK(a.step_norm == b.step_norm);
        CHECK(a.inner_iters == b.inner_iters);
        CHECK(a.cpu_s == b.cpu_s);
        if (std::isnan(a.moreau_sq))
            CHECK(std::isnan(b.moreau_sq));
        else
            CHECK(a.moreau_sq == b.moreau_sq);
    }
}

TEST_CASE("writing is stable across calls") {
    std::ostringstream a, b;
    write_trace_csv(sample_trace(), a);
    write_trace_csv(sample_trace(), b);
    CHECK(a.str() == b.str());
}

TEST_CASE("summary carries the final state and the audit block") {
    RunTrace trace = sample_trace();
    trace.min_multiplier = 0.0;
    trace.max_component_drift = 0.125;
    const nlohmann::json summary = trace_summary_json(trace);
    CHECK(summary["rows"] == 3);
    CHECK(summary["final_metrics"]["t"] == 3);
    CHECK(summary["run_audit"]["max_component_drift"] == 0.125);
    CHECK(summary["config"]["solver"] == "qpalm");
}

TEST_CASE("content digest is deterministic and input-sensitive") {
    CHECK(content_digest("abc") == content_digest("abc"));
    CHECK(content_digest("abc") != content_digest("abd"));
    CHECK(content_digest("").size() == 16);
}

TEST_CASE("missing files raise input errors") {
    CHECK_THROWS_AS(read_trace_csv("no_such_trace.csv"), InputError);
}
