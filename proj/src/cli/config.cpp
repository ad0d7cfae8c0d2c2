#include "flowstack/cli/config.hpp"

#include "flowstack/data/csv.hpp"
#include "flowstack/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace flowstack::cli {

namespace {

double to_real(const std::string& key, const std::string& text) {
    const auto parsed = data::parse_numeric(text);
    if (!parsed || data::trim(text).empty()) throw ConfigError(key, key + ": expected a number, got '" + text + "'");
    return *parsed;
}

std::uint64_t to_unsigned(const std::string& key, std::string_view text) {
    text = data::trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(key, key + ": expected a nonnegative integer, got '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::size_t> to_list(const std::string& key, const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_unsigned(key, item));
    if (out.empty()) throw ConfigError(key, key + ": expected a comma-separated list");
    return out;
}

}  // namespace

eval::EvalConfig RunConfig::for_repeats(std::size_t r) const {
    auto cfg = eval;
    cfg.repeats = r;
    return cfg;
}

void RunConfig::validate() const {
    if (repeats.empty()) throw ConfigError("repeats", "repeats: at least one value required");
    for (auto r : repeats) {
        if (r < 1) throw ConfigError("repeats", "repeats: values must be at least 1");
    }
    for_repeats(repeats.front()).validate();
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto& e = cfg.eval;
    auto& l = e.learners;
    if (key == "dataset") cfg.dataset = value;
    else if (key == "positive_label") e.positive_label = value;
    else if (key == "sample_fraction") e.sample_fraction = to_real(key, value);
    else if (key == "train_fraction") e.train_fraction = to_real(key, value);
    else if (key == "repeats") cfg.repeats = to_list(key, value);
    else if (key == "seed") e.seed = to_unsigned(key, value);
    else if (key == "k") l.k = to_unsigned(key, value);
    else if (key == "kernel") {
        if (value != "linear" && value != "rbf") throw ConfigError(key, "kernel: expected 'linear' or 'rbf'");
        l.kernel = learn::kernel_kind_from_string(value);
    } else if (key == "C") l.C = to_real(key, value);
    else if (key == "gamma") l.gamma = value == "auto" ? 0.0 : to_real(key, value);
    else if (key == "internal_folds") l.internal_folds = to_unsigned(key, value);
    else if (key == "l2_lambda") l.l2_lambda = to_real(key, value);
    else if (key == "svm_row_cap") l.svm_row_cap = to_unsigned(key, value);
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "format") cfg.format = eval::report_style_from_string(value);
    else throw ConfigError(key, "unknown config key: " + key);
}

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        const auto body = data::trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("", "config line " + std::to_string(number) + ": expected 'key = value'");
        }
        apply_setting(cfg, std::string(data::trim(body.substr(0, eq))), std::string(data::trim(body.substr(eq + 1))));
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read config file " + path.string());
    return parse_config(in);
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("", "--set expects key=value, got '" + assignment + "'");
    apply_setting(cfg, std::string(data::trim(std::string_view(assignment).substr(0, eq))),
                  std::string(data::trim(std::string_view(assignment).substr(eq + 1))));
}

}  // namespace flowstack::cli
