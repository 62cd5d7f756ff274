#pragma once

#include "hyperlab/config.hpp"

namespace hyperlab {

struct RunOutput {
    int exit_code = 1;
    json report;
    std::vector<std::pair<std::string, std::string>> series;  // filename, CSV text
};

// Dispatches a validated config and assembles the report plus any CSV
// series.  Numeric trouble inside a command surfaces as outcome "error"
// with exit code 1; negative verdicts and exhausted budgets exit with 2.
RunOutput run(const ExperimentConfig& cfg);

// Report for a config that failed validation; always exit code 1.
RunOutput error_output(const std::string& command, const std::vector<ConfigError>& errors);

// Copy of a report with the wall clock removed.  Two runs of the same
// config agree byte for byte on this view.
json strip_volatile(json report);

// Writes report.json and every series file into dir, creating it if needed.
void write_output(const RunOutput& out, const std::string& dir);

}  // namespace hyperlab
