#include "hyperlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace hyperlab {

namespace {

const std::vector<std::string> kCommands = {
    "aperiodicity", "check-hc", "check-dhc", "dcriterion", "probe",
    "construct",    "extract",  "synthesize", "orbit"};

struct FieldSet {
    std::vector<std::string> required;
    std::vector<std::string> optional;
};

FieldSet fields_for(const std::string& command) {
    if (command == "aperiodicity")
        return {{"model", "a", "K"}, {"p", "seed"}};
    if (command == "check-hc")
        return {{"model", "a", "K", "weights"}, {"p", "seed", "schedule", "emit_series"}};
    if (command == "check-dhc")
        return {{"model", "a", "K", "weights"},
                {"p", "seed", "schedule", "mode", "ordering", "emit_series"}};
    if (command == "dcriterion")
        return {{"model", "a", "weights", "n_seq"},
                {"p", "seed", "powers", "tests", "tol", "emit_series"}};
    if (command == "probe")
        return {{"model", "a", "weights", "f0", "targets"},
                {"p", "seed", "powers", "eps", "n_max"}};
    if (command == "construct")
        return {{"model", "a", "weights", "f", "targets", "n"}, {"p", "seed", "powers", "E"}};
    if (command == "extract")
        return {{"model", "a", "weights", "f", "m", "K"}, {"p", "seed", "eta"}};
    if (command == "synthesize")
        return {{"model", "a", "weights", "tuples"}, {"p", "seed", "powers", "eps", "budget"}};
    return {{"model", "a", "weights", "u", "targets"},
            {"p", "seed", "powers", "n_max", "eps", "emit_series"}};  // orbit
}

bool wants(const FieldSet& fs, const std::string& key) {
    return std::find(fs.required.begin(), fs.required.end(), key) != fs.required.end() ||
           std::find(fs.optional.begin(), fs.optional.end(), key) != fs.optional.end();
}

// Collects errors under JSON-pointer style paths and hands fields to
// parsing callbacks; any exception a callback throws lands in the error
// list instead of aborting the walk.
struct Walker {
    const json& raw;
    std::vector<ConfigError>& errors;

    void add(const std::string& path, const std::string& message) {
        errors.push_back({path, message});
    }

    const json* field(const std::string& key) {
        auto it = raw.find(key);
        return it == raw.end() ? nullptr : &*it;
    }

    template <typename F>
    bool attempt(const std::string& path, F&& fn) {
        try {
            fn();
            return true;
        } catch (const std::exception& e) {
            add(path, e.what());
            return false;
        }
    }

    template <typename F>
    void with(const std::string& key, F&& fn) {
        if (const json* j = field(key)) attempt("/" + key, [&] { fn(*j); });
    }
};

std::int64_t as_int(const json& j) {
    if (!j.is_number_integer() && !j.is_number_unsigned())
        throw std::invalid_argument("expected an integer");
    return j.get<std::int64_t>();
}

double as_num(const json& j) {
    if (!j.is_number()) throw std::invalid_argument("expected a number");
    return j.get<double>();
}

std::int64_t positive_int(const json& j) {
    const auto v = as_int(j);
    if (v < 1) throw std::invalid_argument("expected a positive integer");
    return v;
}

double positive_num(const json& j) {
    const double v = as_num(j);
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument("expected a positive finite number");
    return v;
}

// Functions in configs may carry their own "model" (which must match the
// experiment model), use the bare {"points": ...} form, or be a plain array
// of [point, value] pairs.
LatticeFunction function_for_model(const json& j, const GroupModel& model) {
    if (j.is_object() && j.contains("model")) {
        LatticeFunction f = function_from_json(j);
        if (!(f.model() == model))
            throw std::invalid_argument("function model differs from the experiment model");
        return f;
    }
    if (j.is_array()) return function_from_json(json{{"model", to_json(model)}, {"points", j}});
    if (j.is_object() && j.contains("points"))
        return function_from_json(json{{"model", to_json(model)}, {"points", j.at("points")}});
    throw std::invalid_argument("expected a function: {\"points\": [...]} or [[point, value], ...]");
}

WitnessSchedule schedule_from_json(const json& j, double measure_K, double p,
                                   std::vector<ConfigError>& errors) {
    if (!j.is_object()) {
        errors.push_back({"/schedule", "expected an object"});
        return WitnessSchedule::defaults(measure_K, p);
    }
    static const std::set<std::string> keys = {"eps", "deficit", "k_max", "n_max",
                                               "zero_deficit"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!keys.count(it.key()))
            errors.push_back({"/schedule/" + it.key(), "unknown field"});

    int k_max = 10;
    std::int64_t n_max = 400;
    std::vector<double> eps, deficit;
    bool zero_deficit = false;
    const std::size_t before = errors.size();
    try {
        if (j.contains("zero_deficit")) {
            if (!j.at("zero_deficit").is_boolean())
                throw std::invalid_argument("zero_deficit: expected a boolean");
            zero_deficit = j.at("zero_deficit").get<bool>();
        }
        if (j.contains("eps"))
            for (const auto& e : j.at("eps")) eps.push_back(as_num(e));
        if (j.contains("deficit"))
            for (const auto& d : j.at("deficit")) deficit.push_back(as_num(d));
        if (!eps.empty()) k_max = static_cast<int>(eps.size());
        else if (!deficit.empty()) k_max = static_cast<int>(deficit.size());
        if (j.contains("k_max")) k_max = static_cast<int>(positive_int(j.at("k_max")));
        if (j.contains("n_max")) n_max = positive_int(j.at("n_max"));
    } catch (const std::exception& e) {
        errors.push_back({"/schedule", e.what()});
    }
    if (errors.size() > before) return WitnessSchedule::defaults(measure_K, p);

    WitnessSchedule sched = zero_deficit ? WitnessSchedule::zero_deficit(k_max, n_max)
                                         : WitnessSchedule::defaults(measure_K, p, k_max, n_max);
    if (!eps.empty()) sched.eps = eps;
    if (!deficit.empty()) sched.deficit = deficit;
    try {
        sched.validate();
    } catch (const std::exception& e) {
        errors.push_back({"/schedule", e.what()});
    }
    return sched;
}

TestSuiteSpec suite_from_json(const json& j, const GroupModel& model) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("expected an object with a \"kind\" field");
    const std::string kind = j.at("kind").get<std::string>();
    TestSuiteSpec suite;
    if (kind == "default") {
        suite.kind = TestSuiteSpec::Kind::Default;
        if (j.contains("radius")) suite.radius = positive_int(j.at("radius"));
        return suite;
    }
    if (kind == "random") {
        suite.kind = TestSuiteSpec::Kind::Random;
        if (j.contains("count")) suite.count = static_cast<int>(positive_int(j.at("count")));
        if (j.contains("support_radius"))
            suite.support_radius = positive_int(j.at("support_radius"));
        return suite;
    }
    if (kind == "explicit") {
        suite.kind = TestSuiteSpec::Kind::Explicit;
        if (!j.contains("functions") || !j.at("functions").is_array() ||
            j.at("functions").empty())
            throw std::invalid_argument("explicit suite needs a nonempty \"functions\" array");
        for (const auto& fj : j.at("functions"))
            suite.functions.push_back(function_for_model(fj, model));
        return suite;
    }
    throw std::invalid_argument("unknown suite kind \"" + kind + "\"");
}

const char* suite_kind_name(TestSuiteSpec::Kind kind) {
    switch (kind) {
        case TestSuiteSpec::Kind::Default: return "default";
        case TestSuiteSpec::Kind::Random: return "random";
        default: return "explicit";
    }
}

std::vector<std::int64_t> n_seq_from_json(const json& j) {
    std::vector<std::int64_t> seq;
    if (j.is_array()) {
        for (const auto& e : j) seq.push_back(positive_int(e));
    } else if (j.is_object()) {
        const auto start = positive_int(j.at("start"));
        const auto step = positive_int(j.at("step"));
        const auto count = positive_int(j.at("count"));
        for (std::int64_t i = 0; i < count; ++i) seq.push_back(start + i * step);
    } else {
        throw std::invalid_argument("expected an array or {start, step, count}");
    }
    if (seq.empty()) throw std::invalid_argument("time sequence must be nonempty");
    for (std::size_t i = 1; i < seq.size(); ++i)
        if (seq[i] <= seq[i - 1])
            throw std::invalid_argument("time sequence must increase strictly");
    return seq;
}

}  // namespace

bool is_known_command(const std::string& command) {
    return std::find(kCommands.begin(), kCommands.end(), command) != kCommands.end();
}

const std::vector<std::string>& known_commands() { return kCommands; }

ValidationResult validate_config(const json& raw, const std::string& command) {
    ValidationResult result;
    if (!is_known_command(command)) {
        std::string all;
        for (const auto& c : kCommands) all += (all.empty() ? "" : ", ") + c;
        result.errors.push_back({"", "unknown command \"" + command + "\"; expected one of " + all});
        return result;
    }
    if (!raw.is_object()) {
        result.errors.push_back({"", "config must be a JSON object"});
        return result;
    }

    const FieldSet fs = fields_for(command);
    Walker w{raw, result.errors};

    for (auto it = raw.begin(); it != raw.end(); ++it)
        if (!wants(fs, it.key()))
            w.add("/" + it.key(), "unknown field for command \"" + command + "\"");
    for (const auto& key : fs.required)
        if (!raw.contains(key)) w.add("/" + key, "required field is missing");

    ExperimentConfig cfg;
    cfg.command = command;

    bool have_model = false;
    w.with("model", [&](const json& j) {
        cfg.model = model_from_json(j);
        have_model = true;
    });
    w.with("p", [&](const json& j) { cfg.p = NormParam(as_num(j)); });
    w.with("seed", [&](const json& j) {
        if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
            throw std::invalid_argument("expected a nonnegative integer");
        cfg.seed = j.get<std::uint64_t>();
    });

    bool have_a = false;
    if (have_model)
        w.with("a", [&](const json& j) {
            cfg.a = cfg.model.make_point(point_from_json(j).coords);
            have_a = true;
        });

    w.with("weights", [&](const json& j) {
        if (!j.is_array() || j.empty())
            throw std::invalid_argument("expected a nonempty array of weights");
        for (std::size_t i = 0; i < j.size(); ++i)
            w.attempt("/weights/" + std::to_string(i),
                      [&] { cfg.weights.push_back(weight_from_json(j.at(i))); });
    });
    const std::size_t N = cfg.weights.size();
    if (!cfg.weights.empty()) {
        if (command == "check-hc" && N != 1)
            w.add("/weights", "this command takes exactly one weight");
        if (command == "check-dhc" && N < 2)
            w.add("/weights", "the joint condition needs at least two weights");
    }

    cfg.powers.assign(std::max<std::size_t>(N, 1), 1);
    w.with("powers", [&](const json& j) {
        if (!j.is_array()) throw std::invalid_argument("expected an array of positive integers");
        std::vector<std::int64_t> r;
        for (const auto& e : j) r.push_back(positive_int(e));
        if (N != 0 && r.size() != N)
            throw std::invalid_argument("powers must match the number of weights");
        cfg.powers = std::move(r);
    });

    bool have_K = false;
    if (have_model && wants(fs, "K"))
        w.with("K", [&](const json& j) {
            cfg.K = region_from_json(j, cfg.model);
            if (cfg.K.empty() && command != "aperiodicity")
                throw std::invalid_argument("region must be nonempty");
            have_K = true;
        });

    if (wants(fs, "schedule")) {
        const double measure_K = have_K ? haar_measure(cfg.model, cfg.K) : 1.0;
        if (const json* j = w.field("schedule")) {
            cfg.schedule = schedule_from_json(*j, measure_K, cfg.p.p, result.errors);
        } else if (have_K) {
            cfg.schedule = WitnessSchedule::defaults(measure_K, cfg.p.p);
        }
    }

    w.with("mode", [&](const json& j) {
        const std::string m = j.get<std::string>();
        if (m == "paper") cfg.mode = JointMode::TwoSided;
        else if (m == "one-directional") cfg.mode = JointMode::OneDirectional;
        else throw std::invalid_argument("expected \"paper\" or \"one-directional\"");
    });
    w.with("ordering", [&](const json& j) {
        if (!j.is_array()) throw std::invalid_argument("expected an array of [j, l] pairs");
        for (const auto& e : j) {
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("expected [j, l] pairs of 1-based indices");
            const auto pj = as_int(e.at(0)), pl = as_int(e.at(1));
            const auto hi = static_cast<std::int64_t>(N);
            if (pj < 1 || pj > hi || pl < 1 || pl > hi || pj == pl)
                throw std::invalid_argument("pair indices must be distinct and within 1..N");
            cfg.ordering.emplace_back(static_cast<int>(pj), static_cast<int>(pl));
        }
    });
    if (command == "check-dhc" && cfg.mode == JointMode::OneDirectional && cfg.ordering.empty())
        w.add("/ordering", "one-directional mode needs at least one ordered pair");

    w.with("tol", [&](const json& j) { cfg.tol = positive_num(j); });
    w.with("eps", [&](const json& j) { cfg.eps = positive_num(j); });
    w.with("eta", [&](const json& j) {
        cfg.eta = positive_num(j);
        if (cfg.eta >= 1.0) throw std::invalid_argument("expected a value in (0, 1)");
    });
    w.with("n_max", [&](const json& j) { cfg.n_max = positive_int(j); });
    w.with("budget", [&](const json& j) { cfg.budget = positive_int(j); });
    w.with("n", [&](const json& j) { cfg.n = positive_int(j); });
    w.with("m", [&](const json& j) { cfg.m = positive_int(j); });
    w.with("emit_series", [&](const json& j) {
        if (!j.is_boolean()) throw std::invalid_argument("expected a boolean");
        cfg.emit_series = j.get<bool>();
    });

    if (have_model) {
        w.with("E", [&](const json& j) { cfg.E = region_from_json(j, cfg.model); });
        const std::string fn_key =
            command == "probe" ? "f0" : command == "orbit" ? "u" : "f";
        if (wants(fs, fn_key))
            w.with(fn_key, [&](const json& j) { cfg.f = function_for_model(j, cfg.model); });
        w.with("targets", [&](const json& j) {
            if (!j.is_array() || j.empty())
                throw std::invalid_argument("expected a nonempty array of functions");
            for (std::size_t i = 0; i < j.size(); ++i)
                w.attempt("/targets/" + std::to_string(i),
                          [&] { cfg.targets.push_back(function_for_model(j.at(i), cfg.model)); });
        });
        w.with("tuples", [&](const json& j) {
            if (!j.is_array() || j.empty())
                throw std::invalid_argument("expected a nonempty array of target tuples");
            for (std::size_t i = 0; i < j.size(); ++i) {
                const auto& tj = j.at(i);
                const std::string path = "/tuples/" + std::to_string(i);
                if (!tj.is_array() || tj.empty()) {
                    w.add(path, "expected a nonempty array of functions");
                    continue;
                }
                std::vector<LatticeFunction> tuple;
                bool ok = true;
                for (std::size_t l = 0; l < tj.size(); ++l)
                    ok = w.attempt(path + "/" + std::to_string(l),
                                   [&] { tuple.push_back(function_for_model(tj.at(l), cfg.model)); }) &&
                         ok;
                if (ok) cfg.tuples.push_back(std::move(tuple));
            }
        });
        w.with("tests", [&](const json& j) { cfg.suite = suite_from_json(j, cfg.model); });
    }
    w.with("n_seq", [&](const json& j) { cfg.n_seq = n_seq_from_json(j); });

    if (N != 0 && !cfg.targets.empty() && cfg.targets.size() != N &&
        (command == "probe" || command == "construct" || command == "orbit"))
        w.add("/targets", "expected one target per operator (" + std::to_string(N) + ")");
    if (N != 0)
        for (std::size_t i = 0; i < cfg.tuples.size(); ++i)
            if (cfg.tuples[i].size() != N)
                w.add("/tuples/" + std::to_string(i),
                      "expected one target per operator (" + std::to_string(N) + ")");

    // The witness and deviation machinery is stated for aperiodic a: K must
    // eventually escape its own translates, which fails on finite cyclic
    // models and for a = 0.
    static const std::set<std::string> needs_aperiodic = {"check-hc", "check-dhc", "dcriterion",
                                                          "extract"};
    if (have_model && have_a && needs_aperiodic.count(command) &&
        cfg.model.is_periodic_element(cfg.a))
        w.add("/a",
              "aperiodic element required: the translates K + na must eventually miss K, but "
              "this a is periodic");

    if (result.errors.empty()) result.config = std::move(cfg);
    return result;
}

std::vector<LatticeFunction> build_test_suite(const TestSuiteSpec& suite, const GroupModel& model,
                                              std::uint64_t seed) {
    std::vector<LatticeFunction> out;
    switch (suite.kind) {
        case TestSuiteSpec::Kind::Default: {
            const std::vector<std::int64_t> lo(model.dim(), -suite.radius);
            const std::vector<std::int64_t> hi(model.dim(), suite.radius);
            const auto box = CompactRegion::box(GroupPoint{lo}, GroupPoint{hi});
            std::vector<GroupPoint> cells;
            for (const auto& x : box.cells()) cells.push_back(model.make_point(x.coords));
            const CompactRegion reduced(std::move(cells));
            for (const auto& x : reduced.cells()) {
                LatticeFunction delta(model);
                delta.set(x, 1.0);
                out.push_back(std::move(delta));
            }
            out.push_back(indicator(model, reduced));
            break;
        }
        case TestSuiteSpec::Kind::Random: {
            std::mt19937_64 rng(seed);
            std::uniform_int_distribution<std::int64_t> coord(-suite.support_radius,
                                                              suite.support_radius);
            std::uniform_real_distribution<double> value(-1.0, 1.0);
            std::uniform_int_distribution<int> size(1, 8);
            for (int i = 0; i < suite.count; ++i) {
                LatticeFunction f(model);
                const int k = size(rng);
                for (int s = 0; s < k; ++s) {
                    std::vector<std::int64_t> coords(model.dim());
                    for (auto& c : coords) c = coord(rng);
                    f.set(model.make_point(std::move(coords)), value(rng));
                }
                if (f.is_zero()) f.set(model.make_point(std::vector<std::int64_t>(model.dim(), 0)), 0.5);
                out.push_back(std::move(f));
            }
            break;
        }
        case TestSuiteSpec::Kind::Explicit:
            out = suite.functions;
            break;
    }
    return out;
}

json to_json(const ExperimentConfig& cfg) {
    const FieldSet fs = fields_for(cfg.command);
    json out{{"model", to_json(cfg.model)}, {"p", cfg.p.p}, {"seed", cfg.seed}};
    out["a"] = to_json(cfg.a);
    if (wants(fs, "weights")) {
        json ws = json::array();
        for (const auto& w : cfg.weights) ws.push_back(to_json(w));
        out["weights"] = ws;
    }
    if (wants(fs, "powers")) out["powers"] = cfg.powers;
    if (wants(fs, "K")) out["K"] = to_json(cfg.K);
    if (wants(fs, "schedule")) out["schedule"] = to_json(cfg.schedule);
    if (wants(fs, "mode"))
        out["mode"] = cfg.mode == JointMode::TwoSided ? "paper" : "one-directional";
    if (wants(fs, "ordering")) {
        json ord = json::array();
        for (const auto& [j, l] : cfg.ordering) ord.push_back(json::array({j, l}));
        out["ordering"] = ord;
    }
    if (wants(fs, "tol")) out["tol"] = cfg.tol;
    if (wants(fs, "eps")) out["eps"] = cfg.eps;
    if (wants(fs, "eta")) out["eta"] = cfg.eta;
    if (wants(fs, "n_max")) out["n_max"] = cfg.n_max;
    if (wants(fs, "budget")) out["budget"] = cfg.budget;
    if (wants(fs, "n")) out["n"] = cfg.n;
    if (wants(fs, "m")) out["m"] = cfg.m;
    if (wants(fs, "emit_series")) out["emit_series"] = cfg.emit_series;
    if (wants(fs, "E") && cfg.E.has_value()) out["E"] = to_json(*cfg.E);
    if (cfg.f.has_value()) {
        const std::string fn_key =
            cfg.command == "probe" ? "f0" : cfg.command == "orbit" ? "u" : "f";
        out[fn_key] = to_json(*cfg.f);
    }
    if (wants(fs, "targets")) {
        json ts = json::array();
        for (const auto& t : cfg.targets) ts.push_back(to_json(t));
        out["targets"] = ts;
    }
    if (wants(fs, "tuples")) {
        json ts = json::array();
        for (const auto& tuple : cfg.tuples) {
            json tj = json::array();
            for (const auto& t : tuple) tj.push_back(to_json(t));
            ts.push_back(tj);
        }
        out["tuples"] = ts;
    }
    if (wants(fs, "n_seq")) out["n_seq"] = cfg.n_seq;
    if (wants(fs, "tests")) {
        json tj{{"kind", suite_kind_name(cfg.suite.kind)}};
        switch (cfg.suite.kind) {
            case TestSuiteSpec::Kind::Default:
                tj["radius"] = cfg.suite.radius;
                break;
            case TestSuiteSpec::Kind::Random:
                tj["count"] = cfg.suite.count;
                tj["support_radius"] = cfg.suite.support_radius;
                break;
            case TestSuiteSpec::Kind::Explicit: {
                json fns = json::array();
                for (const auto& f : cfg.suite.functions) fns.push_back(to_json(f));
                tj["functions"] = fns;
                break;
            }
        }
        out["tests"] = tj;
    }
    return out;
}

}  // namespace hyperlab
