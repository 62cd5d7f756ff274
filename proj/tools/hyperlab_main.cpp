#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "hyperlab/runner.hpp"

namespace {

hyperlab::json load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    hyperlab::json raw;
    is >> raw;
    return raw;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"laboratory for weighted translations on lattice group models"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string mode;
    std::uint64_t seed = 0;

    for (const auto& name : hyperlab::known_commands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "directory for report.json and series CSVs");
        sub->add_option("--seed", seed, "overrides the config seed");
        if (name == "check-dhc")
            sub->add_option("--mode", mode, "paper or one-directional, overrides the config");
    }

    CLI11_PARSE(app, argc, argv);
    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();

    try {
        hyperlab::RunOutput out;
        try {
            hyperlab::json raw = load_config(config_path);
            if (sub->count("--seed") > 0) raw["seed"] = seed;
            if (command == "check-dhc" && sub->count("--mode") > 0) raw["mode"] = mode;
            const auto checked = hyperlab::validate_config(raw, command);
            out = checked.config.has_value() ? hyperlab::run(*checked.config)
                                             : hyperlab::error_output(command, checked.errors);
        } catch (const std::exception& e) {
            out = hyperlab::error_output(command, {{"", e.what()}});
        }
        std::cout << out.report.dump(2) << "\n";
        if (!out_dir.empty()) hyperlab::write_output(out, out_dir);
        return out.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
