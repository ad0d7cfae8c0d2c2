#include "flowstack/cli/commands.hpp"

#include "flowstack/cli/config.hpp"
#include "flowstack/data/flow_table.hpp"
#include "flowstack/error.hpp"
#include "flowstack/eval/report.hpp"
#include "flowstack/eval/roc.hpp"
#include "flowstack/eval/synth.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace flowstack::cli {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
    std::string config_path;
    std::string dataset;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string format;
    std::vector<std::string> settings;
    bool timings = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "key = value run configuration file");
    cmd->add_option("--dataset", opts.dataset, "flow CSV to evaluate");
    cmd->add_option("--seed", opts.seed, "master RNG seed");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--format", opts.format, "stdout format: table, csv or json");
    cmd->add_option("--set", opts.settings, "override one config key (key=value)");
}

RunConfig resolve_config(const CommonOptions& opts) {
    RunConfig cfg = opts.config_path.empty() ? RunConfig{} : load_config(opts.config_path);
    for (const auto& s : opts.settings) apply_override(cfg, s);
    if (!opts.dataset.empty()) cfg.dataset = opts.dataset;
    if (opts.seed) cfg.eval.seed = *opts.seed;
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (!opts.format.empty()) cfg.format = eval::report_style_from_string(opts.format);
    cfg.validate();
    if (cfg.dataset.empty()) throw ConfigError("dataset", "dataset: no dataset path given");
    return cfg;
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw DataError("cannot write " + path.string());
}

int cmd_evaluate(const CommonOptions& opts, std::ostream& out) {
    const auto cfg = resolve_config(opts);
    const auto table = data::load_flow_csv(cfg.dataset);

    eval::ExperimentReport report;
    for (std::size_t i = 0; i < cfg.repeats.size(); ++i) {
        auto run = eval::run_experiment(table, cfg.for_repeats(cfg.repeats[i]));
        if (i == 0) {
            report = std::move(run);
        } else {
            eval::merge_reports(report, run);
        }
    }

    const fs::path dir = cfg.out_dir;
    ensure_directory(dir);
    const eval::ReportOptions options{opts.timings};
    write_text(dir / "report.json", eval::format_report(report, eval::ReportStyle::json, options));
    write_text(dir / "report.txt", eval::format_report(report, eval::ReportStyle::table, options));
    out << eval::format_report(report, cfg.format, options);
    return kExitOk;
}

int cmd_roc(const CommonOptions& opts, std::string model, std::ostream& out) {
    std::transform(model.begin(), model.end(), model.begin(), [](unsigned char c) { return std::tolower(c); });
    if (model != eval::kKnnName && model != eval::kSvmName && model != eval::kStackName) {
        throw ConfigError("model", "unknown model '" + model + "' (expected knn, svm or stack)");
    }
    const auto cfg = resolve_config(opts);
    const auto table = data::load_flow_csv(cfg.dataset);
    const auto scores = eval::first_repeat_scores(table, cfg.for_repeats(cfg.repeats.front()));
    const auto curve = eval::roc_points(scores.y_true, scores.p1.at(model));

    const fs::path dir = cfg.out_dir;
    ensure_directory(dir);
    const fs::path path = dir / ("roc_" + model + ".csv");
    std::ostringstream text;
    eval::write_roc_csv(text, curve);
    write_text(path, text.str());
    out << path.string() << '\n';
    return kExitOk;
}

int cmd_synth(const eval::SynthParams& params, const std::string& path, std::ostream& out) {
    if (params.n < 4) throw ConfigError("n", "n: at least 4 rows required");
    if (params.d < 1) throw ConfigError("d", "d: at least one feature required");
    if (!(params.separation >= 0.0)) throw ConfigError("separation", "separation: must be >= 0");
    if (!(params.class_balance > 0.0 && params.class_balance < 1.0)) {
        throw ConfigError("balance", "balance: must lie in (0, 1)");
    }
    if (path.empty()) throw ConfigError("out", "out: output path required");
    const auto [table, labels] = eval::synth_flows(params);
    data::write_flow_csv(fs::path(path), table);
    out << "wrote " << table.rows() << " rows (" << labels.negative_count << " " << data::kBenignLabel << ", "
        << labels.positive_count << " " << data::kDefaultAttackLabel << ") to " << path << '\n';
    return kExitOk;
}

int cmd_inspect(const std::string& path, std::ostream& out) {
    const auto table = data::load_flow_csv(path);
    std::map<std::string, std::size_t> counts;
    for (const auto& l : table.raw_labels) ++counts[l];
    out << "rows: " << table.rows() << '\n';
    out << "numeric features: " << table.cols() << '\n';
    for (const auto& [label, count] : counts) out << "label " << label << ": " << count << '\n';
    out << "dropped columns:";
    for (std::size_t i = 0; i < table.dropped_columns.size(); ++i) {
        out << (i == 0 ? " " : ", ") << table.dropped_columns[i];
    }
    out << '\n';
    out << "nonfinite cells: " << data::count_nonfinite(table.features) << '\n';
    return kExitOk;
}

void configure_threads() {
    if (const char* env = std::getenv(kThreadsEnv)) {
        const int threads = std::atoi(env);
        if (threads > 0) omp_set_num_threads(threads);
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    configure_threads();

    CLI::App app{"DDoS flow classification with kNN, SVM and stacked generalization", "flowstack"};
    app.require_subcommand(1);

    CommonOptions eval_opts;
    auto* evaluate = app.add_subcommand("evaluate", "run the repeated train/test sweep and write reports");
    add_common(evaluate, eval_opts);
    evaluate->add_flag("--timings", eval_opts.timings, "include wall-clock stage timings in report.json");

    CommonOptions roc_opts;
    std::string roc_model;
    auto* roc = app.add_subcommand("roc", "write ROC points of one model's first-repeat test scores");
    add_common(roc, roc_opts);
    roc->add_option("--model", roc_model, "knn, svm or stack")->required();

    eval::SynthParams synth_params;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "write a synthetic two-cluster flow CSV");
    synth->add_option("--n", synth_params.n, "rows");
    synth->add_option("--d", synth_params.d, "features");
    synth->add_option("--separation", synth_params.separation, "distance between class means");
    synth->add_option("--balance", synth_params.class_balance, "share of attack rows");
    synth->add_option("--seed", synth_params.seed, "RNG seed");
    synth->add_option("--out", synth_out, "output CSV path")->required();

    std::string inspect_path;
    auto* inspect = app.add_subcommand("inspect", "summarize a flow CSV");
    inspect->add_option("path", inspect_path, "flow CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "flowstack: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (evaluate->parsed()) return cmd_evaluate(eval_opts, out);
        if (roc->parsed()) return cmd_roc(roc_opts, roc_model, out);
        if (synth->parsed()) return cmd_synth(synth_params, synth_out, out);
        if (inspect->parsed()) return cmd_inspect(inspect_path, out);
    } catch (const ConfigError& e) {
        err << "flowstack: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DataError& e) {
        err << "flowstack: data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "flowstack: training failure: " << e.what() << '\n';
        return kExitTraining;
    }
    return kExitConfig;
}

}  // namespace flowstack::cli
