#pragma once

#include "flowstack/eval/experiment.hpp"
#include "flowstack/eval/report.hpp"

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace flowstack::cli {

// Everything one `evaluate` sweep needs. The file form is flat `key = value`
// lines with '#' comments; unknown keys are rejected.
struct RunConfig {
    std::string dataset;
    eval::EvalConfig eval{};  // `eval.repeats` is ignored; see `repeats`
    std::vector<std::size_t> repeats{5, 10, 20};
    std::string out_dir = "results";
    eval::ReportStyle format = eval::ReportStyle::table;

    eval::EvalConfig for_repeats(std::size_t r) const;
    void validate() const;
};

// Throws ConfigError(key, ...) on an unknown key or a malformed value.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

// "key=value" as given to --set.
void apply_override(RunConfig& cfg, const std::string& assignment);

}  // namespace flowstack::cli
