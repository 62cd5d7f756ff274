#include "hyperlab/runner.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "hyperlab/constructions.hpp"

namespace hyperlab {

namespace {

// Shortest representation that parses back to the same double.
std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string witness_csv(const Verdict& v) {
    std::string out = "k,n_k,eps_k,deficit,sup_forward,sup_backward,sup_ratio\n";
    for (const auto& d : v.diagnostics) {
        out += std::to_string(d.k) + ',' + std::to_string(d.n) + ',' + fmt(d.eps_k) + ',' +
               fmt(d.deficit) + ',' + fmt(std::exp(d.log_sup_forward)) + ',' +
               fmt(std::exp(d.log_sup_backward_inv)) + ',';
        if (d.log_sup_ratio.has_value()) out += fmt(std::exp(*d.log_sup_ratio));
        out += '\n';
    }
    return out;
}

std::string criterion_csv(const CriterionReport& rep) {
    std::string out = "n,forward,inverse,cross\n";
    for (const auto& r : rep.rows)
        out += std::to_string(r.n) + ',' + fmt(r.forward) + ',' + fmt(r.inverse) + ',' +
               fmt(r.cross) + '\n';
    return out;
}

std::string orbit_csv(const OrbitSeries& series, std::size_t num_ops) {
    std::string out = "n,d_n";
    for (std::size_t l = 1; l <= num_ops; ++l) out += ",d_n_l" + std::to_string(l);
    out += '\n';
    for (const auto& pt : series.points) {
        out += std::to_string(pt.n) + ',' + fmt(pt.distance);
        for (const double d : pt.per_op) out += ',' + fmt(d);
        out += '\n';
    }
    return out;
}

std::vector<OperatorSpec> make_ops(const ExperimentConfig& cfg) {
    std::vector<OperatorSpec> ops;
    for (std::size_t l = 0; l < cfg.weights.size(); ++l)
        ops.push_back({cfg.a, cfg.weights[l], cfg.powers[l]});
    return ops;
}

struct CommandResult {
    std::string outcome;
    int exit_code = 0;
    json payload;
};

CommandResult verdict_result(const Verdict& v) {
    switch (v.kind) {
        case VerdictKind::Satisfied: return {"satisfied", 0, to_json(v)};
        case VerdictKind::Refuted: return {"refuted", 2, to_json(v)};
        default: return {"budget_exhausted", 2, to_json(v)};
    }
}

CommandResult dispatch(const ExperimentConfig& cfg, RunOutput& out) {
    if (cfg.command == "aperiodicity") {
        const auto res = aperiodicity_horizon(cfg.model, cfg.K, cfg.a);
        const bool periodic = std::holds_alternative<Periodic>(res);
        return {periodic ? "periodic" : "horizon", periodic ? 2 : 0, to_json(res)};
    }
    if (cfg.command == "check-hc") {
        const Verdict v =
            check_hypercyclicity(cfg.model, cfg.weights[0], cfg.a, cfg.K, cfg.schedule, cfg.p);
        if (cfg.emit_series) out.series.emplace_back("witness_diagnostics.csv", witness_csv(v));
        return verdict_result(v);
    }
    if (cfg.command == "check-dhc") {
        const Verdict v = check_joint_condition(cfg.model, cfg.weights, cfg.a, cfg.K,
                                                cfg.schedule, cfg.p, cfg.mode, cfg.ordering);
        if (cfg.emit_series) out.series.emplace_back("witness_diagnostics.csv", witness_csv(v));
        return verdict_result(v);
    }
    if (cfg.command == "dcriterion") {
        CriterionInput in;
        in.ops = make_ops(cfg);
        in.n_seq = cfg.n_seq;
        in.dense_tests = build_test_suite(cfg.suite, cfg.model, cfg.seed);
        in.target_tests.assign(in.ops.size(), in.dense_tests);
        in.p = cfg.p;
        in.tol = cfg.tol;
        const auto rep = verify_disjoint_criterion(in);
        if (cfg.emit_series) out.series.emplace_back("criterion_terms.csv", criterion_csv(rep));
        return {rep.satisfied ? "satisfied" : "not_satisfied", rep.satisfied ? 0 : 2,
                to_json(rep)};
    }
    if (cfg.command == "probe") {
        const auto rep =
            probe_transitivity(make_ops(cfg), *cfg.f, cfg.targets, cfg.eps, cfg.n_max, cfg.p);
        return {rep.success ? "success" : "exhausted", rep.success ? 0 : 2, to_json(rep)};
    }
    if (cfg.command == "construct") {
        CompactRegion E = cfg.f->support();
        for (const auto& t : cfg.targets) E = CompactRegion::union_of(E, t.support());
        if (cfg.E.has_value()) E = *cfg.E;
        const auto rep = build_transit_vector(*cfg.f, cfg.targets, make_ops(cfg), cfg.n, E, cfg.p);
        return {"report", 0, to_json(rep)};
    }
    if (cfg.command == "extract") {
        const auto rep =
            extract_deviation_sets(*cfg.f, cfg.weights, cfg.a, cfg.m, cfg.K, cfg.eta, cfg.p);
        const std::string outcome = !rep.premise_ok  ? "premise_violated"
                                    : rep.bounds_ok ? "ok"
                                                    : "bounds_violated";
        return {outcome, rep.premise_ok && rep.bounds_ok ? 0 : 2, to_json(rep)};
    }
    if (cfg.command == "synthesize") {
        const auto rep =
            synthesize_finite_horizon(make_ops(cfg), cfg.tuples, cfg.eps, cfg.budget, cfg.p);
        return {rep.success ? "success" : "exhausted", rep.success ? 0 : 2, to_json(rep)};
    }
    // orbit
    const auto series = simulate_orbit(make_ops(cfg), *cfg.f, cfg.targets, cfg.n_max, cfg.p);
    if (cfg.emit_series)
        out.series.emplace_back("orbit.csv", orbit_csv(series, cfg.weights.size()));
    json payload = to_json(series);
    payload["eps"] = cfg.eps;
    payload["visits"] = series.visits(cfg.eps);
    return {"report", 0, payload};
}

}  // namespace

RunOutput run(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    RunOutput out;
    CommandResult res;
    try {
        res = dispatch(cfg, out);
    } catch (const std::exception& e) {
        out.series.clear();
        res = {"error", 1, json{{"error", e.what()}}};
    }
    const auto t1 = std::chrono::steady_clock::now();

    out.exit_code = res.exit_code;
    json names = json::array();
    for (const auto& [name, content] : out.series) names.push_back(name);
    out.report = json{{"version", "v1"},
                      {"command", cfg.command},
                      {"config", to_json(cfg)},
                      {"outcome", res.outcome},
                      {"exit_code", res.exit_code},
                      {"payload", res.payload},
                      {"series", names},
                      {"wall_clock_ms",
                       std::chrono::duration<double, std::milli>(t1 - t0).count()}};
    return out;
}

RunOutput error_output(const std::string& command, const std::vector<ConfigError>& errors) {
    RunOutput out;
    out.exit_code = 1;
    json errs = json::array();
    for (const auto& e : errors)
        errs.push_back(json{{"path", e.path}, {"message", e.message}});
    out.report = json{{"version", "v1"},
                      {"command", command},
                      {"outcome", "config_error"},
                      {"exit_code", 1},
                      {"errors", errs}};
    return out;
}

json strip_volatile(json report) {
    report.erase("wall_clock_ms");
    return report;
}

void write_output(const RunOutput& out, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const auto write = [&](const std::string& name, const std::string& content) {
        const auto path = fs::path(dir) / name;
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot write " + path.string());
        os << content;
    };
    write("report.json", out.report.dump(2) + "\n");
    for (const auto& [name, content] : out.series) write(name, content);
}

}  // namespace hyperlab
