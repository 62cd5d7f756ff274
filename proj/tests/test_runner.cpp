#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hyperlab/runner.hpp"

using namespace hyperlab;

namespace {

json step_weight(double v_neg, double v_pos) {
    return {{"family", "step"},
            {"v_neg", v_neg},
            {"v_pos", v_pos},
            {"direction", json::array({1})},
            {"pivot", 0}};
}

json base_z_config() {
    return json{{"model", {{"kind", "integer_lattice"}, {"dim", 1}}}, {"a", json::array({1})}};
}

ExperimentConfig parse(json raw, const std::string& command) {
    const auto r = validate_config(raw, command);
    REQUIRE_MESSAGE(r.config.has_value(), json(raw).dump());
    return *r.config;
}

std::size_t line_count(const std::string& text) {
    std::size_t lines = 0;
    for (const char c : text)
        if (c == '\n') ++lines;
    return lines;
}

}  // namespace

TEST_CASE("aperiodicity run reports the escape horizon") {
    auto raw = base_z_config();
    raw["K"] = {{"box_min", json::array({0})}, {"box_max", json::array({10})}};
    const auto out = run(parse(raw, "aperiodicity"));
    CHECK(out.exit_code == 0);
    CHECK(out.report.at("outcome") == "horizon");
    CHECK(out.report.at("payload").at("n") == 10);
    CHECK(out.report.at("version") == "v1");
    CHECK(out.report.at("command") == "aperiodicity");
    CHECK(out.report.contains("wall_clock_ms"));
    CHECK(out.series.empty());
}

TEST_CASE("aperiodicity run flags periodic steps") {
    json raw{{"model", {{"kind", "finite_cyclic"}, {"q", 12}}},
             {"a", json::array({5})},
             {"K", {{"box_min", json::array({0})}, {"box_max", json::array({3})}}}};
    const auto out = run(parse(raw, "aperiodicity"));
    CHECK(out.exit_code == 2);
    CHECK(out.report.at("outcome") == "periodic");
}

TEST_CASE("witness run emits a diagnostics series and exits zero") {
    auto raw = base_z_config();
    raw["K"] = {{"box_min", json::array({-10})}, {"box_max", json::array({10})}};
    raw["weights"] = json::array({step_weight(2.0, 0.5)});
    raw["schedule"] = {{"zero_deficit", true}};
    const auto out = run(parse(raw, "check-hc"));
    CHECK(out.exit_code == 0);
    CHECK(out.report.at("outcome") == "satisfied");
    REQUIRE(out.series.size() == 1);
    CHECK(out.series[0].first == "witness_diagnostics.csv");
    const auto& csv = out.series[0].second;
    CHECK(csv.rfind("k,n_k,eps_k,deficit,sup_forward,sup_backward,sup_ratio\n", 0) == 0);
    CHECK(line_count(csv) == 11);  // header and one row per stage
    CHECK(out.report.at("payload").at("witness").size() == 10);
}

TEST_CASE("witness run exits two on refutation") {
    auto raw = base_z_config();
    raw["K"] = {{"box_min", json::array({-10})}, {"box_max", json::array({10})}};
    raw["weights"] = json::array({{{"family", "constant"}, {"c", 2.0}}});
    const auto out = run(parse(raw, "check-hc"));
    CHECK(out.exit_code == 2);
    CHECK(out.report.at("outcome") == "refuted");
    CHECK(out.report.at("payload").at("monotone_certificate").at("c") == 2.0);
}

TEST_CASE("joint run respects the mode switch") {
    auto raw = base_z_config();
    raw["K"] = {{"box_min", json::array({-10})}, {"box_max", json::array({10})}};
    raw["weights"] = json::array({step_weight(4.0, 0.25), step_weight(2.0, 0.5)});
    const auto refuted = run(parse(raw, "check-dhc"));
    CHECK(refuted.exit_code == 2);
    CHECK(refuted.report.at("payload").contains("reciprocal_certificate"));

    raw["mode"] = "one-directional";
    raw["ordering"] = json::array({json::array({2, 1})});
    const auto ok = run(parse(raw, "check-dhc"));
    CHECK(ok.exit_code == 0);
    CHECK(ok.report.at("outcome") == "satisfied");
}

TEST_CASE("criterion run emits the three-term series") {
    auto raw = base_z_config();
    raw["weights"] = json::array({step_weight(2.0, 0.5), step_weight(2.0, 0.5)});
    raw["powers"] = json::array({1, 2});
    raw["n_seq"] = {{"start", 20}, {"step", 10}, {"count", 4}};
    const auto out = run(parse(raw, "dcriterion"));
    CHECK(out.exit_code == 0);
    CHECK(out.report.at("outcome") == "satisfied");
    REQUIRE(out.series.size() == 1);
    CHECK(out.series[0].first == "criterion_terms.csv");
    CHECK(out.series[0].second.rfind("n,forward,inverse,cross\n", 0) == 0);
    CHECK(line_count(out.series[0].second) == 5);
}

TEST_CASE("extract run exits two when the premise fails") {
    auto raw = base_z_config();
    raw["K"] = {{"box_min", json::array({0})}, {"box_max", json::array({3})}};
    raw["weights"] = json::array({step_weight(2.0, 0.5)});
    raw["m"] = 60;
    raw["f"] = json::array({json::array({json::array({0}), 1.0}),
                            json::array({json::array({1}), 1.0}),
                            json::array({json::array({2}), 1.0}),
                            json::array({json::array({3}), 1.0})});
    const auto out = run(parse(raw, "extract"));
    CHECK(out.exit_code == 2);
    CHECK(out.report.at("outcome") == "premise_violated");
    CHECK(out.report.at("payload").at("premise_ok") == false);
}

TEST_CASE("orbit run writes one row per time step") {
    auto raw = base_z_config();
    raw["weights"] = json::array({step_weight(2.0, 0.5)});
    raw["u"] = json::array({json::array({json::array({0}), 1.0})});
    raw["targets"] = json::array({json::array({json::array({json::array({0}), 1.0})})});
    raw["n_max"] = 5;
    const auto out = run(parse(raw, "orbit"));
    CHECK(out.exit_code == 0);
    CHECK(out.report.at("outcome") == "report");
    REQUIRE(out.series.size() == 1);
    CHECK(out.series[0].first == "orbit.csv");
    CHECK(out.series[0].second.rfind("n,d_n,d_n_l1\n", 0) == 0);
    CHECK(line_count(out.series[0].second) == 7);
    CHECK(out.report.at("payload").at("visits") == json::array({0}));
}

TEST_CASE("identical runs differ only in wall clock time") {
    auto raw = base_z_config();
    raw["K"] = {{"box_min", json::array({-10})}, {"box_max", json::array({10})}};
    raw["weights"] = json::array({step_weight(2.0, 0.5)});
    const auto cfg = parse(raw, "check-hc");
    const auto once = run(cfg);
    const auto twice = run(cfg);
    CHECK(strip_volatile(once.report).dump() == strip_volatile(twice.report).dump());
    CHECK(once.series == twice.series);
}

TEST_CASE("library errors inside a run surface as outcome error") {
    auto raw = base_z_config();
    raw["weights"] = json::array({step_weight(2.0, 0.5)});
    raw["f0"] = json::array({json::array({json::array({0}), 1.0})});
    raw["targets"] = json::array({json::array({json::array({json::array({0}), 1.0})})});
    auto cfg = parse(raw, "probe");
    cfg.targets.clear();  // break an invariant the validator normally upholds
    const auto out = run(cfg);
    CHECK(out.exit_code == 1);
    CHECK(out.report.at("outcome") == "error");
    CHECK(out.series.empty());
}

TEST_CASE("config errors produce a machine readable report") {
    const auto out = error_output("check-hc", {{"/a", "required field is missing"}});
    CHECK(out.exit_code == 1);
    CHECK(out.report.at("outcome") == "config_error");
    CHECK(out.report.at("exit_code") == 1);
    REQUIRE(out.report.at("errors").size() == 1);
    CHECK(out.report.at("errors")[0].at("path") == "/a");
}

TEST_CASE("outputs land in the requested directory") {
    auto raw = base_z_config();
    raw["weights"] = json::array({step_weight(2.0, 0.5)});
    raw["u"] = json::array({json::array({json::array({0}), 1.0})});
    raw["targets"] = json::array({json::array({json::array({json::array({0}), 1.0})})});
    raw["n_max"] = 3;
    const auto out = run(parse(raw, "orbit"));

    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "hyperlab_runner_test";
    fs::remove_all(dir);
    write_output(out, dir.string());
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "orbit.csv"));

    std::ifstream in(dir / "report.json");
    json parsed;
    in >> parsed;
    CHECK(parsed.at("command") == "orbit");
    fs::remove_all(dir);
}
