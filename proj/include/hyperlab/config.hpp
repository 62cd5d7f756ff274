#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperlab/serialization.hpp"

namespace hyperlab {

// Test-function suites for the time-sequence criterion: a default family of
// point masses plus a box indicator, a seeded random batch of sparse
// functions, or functions written out in the config.
struct TestSuiteSpec {
    enum class Kind { Default, Random, Explicit };
    Kind kind = Kind::Default;
    std::int64_t radius = 5;                 // Default: deltas on [-radius, radius]^dim
    int count = 8;                           // Random: number of functions
    std::int64_t support_radius = 8;         // Random: coordinate range
    std::vector<LatticeFunction> functions;  // Explicit
};

std::vector<LatticeFunction> build_test_suite(const TestSuiteSpec& suite, const GroupModel& model,
                                              std::uint64_t seed);

// Normalized experiment description.  A config never carries more than its
// command consumes; validate_config fills the documented defaults and the
// echo in every report round-trips through validate_config unchanged.
struct ExperimentConfig {
    std::string command;
    GroupModel model = GroupModel::integer_lattice(1);
    GroupPoint a;
    NormParam p{2.0};
    std::uint64_t seed = 0;

    std::vector<WeightSpec> weights;
    std::vector<std::int64_t> powers;  // r_l, default all 1
    CompactRegion K;
    WitnessSchedule schedule;
    JointMode mode = JointMode::TwoSided;
    std::vector<std::pair<int, int>> ordering;  // one-directional pairs, 1-based

    double tol = 1e-6;           // dcriterion
    double eps = 0.1;            // probe, synthesize, orbit visit threshold
    std::int64_t n_max = 500;    // probe and orbit horizon
    std::int64_t budget = 2000;  // synthesize
    std::int64_t n = 1;          // construct block power
    std::int64_t m = 1;          // extract power
    double eta = 0.25;           // extract threshold

    std::optional<CompactRegion> E;    // construct admissible set, default supp union
    std::optional<LatticeFunction> f;  // construct/extract f, probe f0, orbit u
    std::vector<LatticeFunction> targets;
    std::vector<std::vector<LatticeFunction>> tuples;  // synthesize
    std::vector<std::int64_t> n_seq;                   // dcriterion
    TestSuiteSpec suite;                               // dcriterion test functions
    bool emit_series = true;
};

struct ConfigError {
    std::string path;  // JSON-pointer style, e.g. "/weights/0/c"
    std::string message;
};

struct ValidationResult {
    std::optional<ExperimentConfig> config;  // present only when errors is empty
    std::vector<ConfigError> errors;
};

// Parses and checks a raw JSON config for the given command.  Problems are
// collected across the whole document, never reported one at a time.
ValidationResult validate_config(const json& raw, const std::string& command);

// Canonical echo of a validated config; feeding it back through
// validate_config reproduces the same ExperimentConfig.
json to_json(const ExperimentConfig& cfg);

bool is_known_command(const std::string& command);
const std::vector<std::string>& known_commands();

}  // namespace hyperlab
