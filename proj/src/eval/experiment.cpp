#include "flowstack/eval/experiment.hpp"

#include "flowstack/data/sampling.hpp"
#include "flowstack/data/scaler.hpp"
#include "flowstack/error.hpp"
#include "flowstack/eval/metrics.hpp"
#include "flowstack/eval/roc.hpp"
#include "flowstack/rng.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace flowstack::eval {

namespace {

// Independent RNG streams hanging off the master seed.
constexpr std::uint64_t kSampleStream = 1;
constexpr std::uint64_t kSplitStream = 2;
constexpr std::uint64_t kModelStream = 3;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void add_timing(std::vector<StageTiming>& timings, const std::string& stage, double seconds) {
    for (auto& t : timings) {
        if (t.stage == stage) {
            t.seconds += seconds;
            return;
        }
    }
    timings.push_back({stage, seconds});
}

struct Prepared {
    data::FlowTable table;
    data::LabelVector labels;
    data::SplitPlan plan;
};

Prepared prepare(const data::FlowTable& raw, const EvalConfig& cfg) {
    cfg.validate();
    const auto cleaned = data::clean(raw);
    const auto labels = data::encode_labels(cleaned, cfg.positive_label);
    auto [table, sampled] =
        data::stratified_sample(cleaned, labels, cfg.sample_fraction, derive_seed(cfg.seed, kSampleStream));
    auto plan = data::make_splits(table.rows(), sampled, cfg.train_fraction, cfg.repeats,
                                  derive_seed(cfg.seed, kSplitStream));
    return {std::move(table), std::move(sampled), std::move(plan)};
}

struct SplitOutcome {
    std::vector<int> y_test;
    std::vector<std::pair<std::string, learn::BatchPrediction>> predictions;
    std::vector<std::string> warnings;
    double train_seconds = 0.0;
    double score_seconds = 0.0;
};

SplitOutcome evaluate_split(const Prepared& prep, std::size_t repeat, const EvalConfig& cfg) {
    const auto& split = prep.plan.splits.at(repeat);
    const auto stats = data::fit_scaler(prep.table.features, split.train);
    const Matrix scaled = data::apply_scaler(prep.table.features, stats);
    const Matrix x_train = scaled.select_rows(split.train);
    const Matrix x_test = scaled.select_rows(split.test);
    const auto y_train = prep.labels.select(split.train).values;

    SplitOutcome out;
    out.y_test = prep.labels.select(split.test).values;

    ensemble::StackConfig stack_cfg;
    stack_cfg.base_specs = base_specs(cfg.learners);
    stack_cfg.internal_folds = cfg.learners.internal_folds;
    stack_cfg.meta.l2_lambda = cfg.learners.l2_lambda;
    stack_cfg.seed = derive_seed(derive_seed(cfg.seed, kModelStream), repeat);

    auto start = Clock::now();
    // The stack's base models are kNN and SVM fitted on the whole training
    // split, i.e. exactly the standalone models being compared.
    const auto stack = ensemble::stack_fit(x_train, y_train, stack_cfg);
    out.train_seconds = seconds_since(start);

    start = Clock::now();
    auto knn = ensemble::predict_base(stack.base_models[0], x_test);
    auto svm = ensemble::predict_base(stack.base_models[1], x_test);
    auto stacked = ensemble::stack_combine(stack, {knn, svm});
    out.score_seconds = seconds_since(start);

    const std::string tag = "repeat " + std::to_string(repeat) + " of " + std::to_string(cfg.repeats) + ": ";
    if (!ensemble::base_converged(stack.base_models[1])) {
        out.warnings.push_back(tag + "svm stopped at the SMO iteration cap");
    }
    if (!stack.meta.converged) out.warnings.push_back(tag + "stack meta-classifier stopped at the iteration cap");

    out.predictions.emplace_back(kKnnName, std::move(knn));
    out.predictions.emplace_back(kSvmName, std::move(svm));
    out.predictions.emplace_back(kStackName, std::move(stacked));
    return out;
}

}  // namespace

void EvalConfig::validate() const {
    if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) {
        throw ConfigError("sample_fraction", "sample_fraction must lie in (0, 1]");
    }
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("train_fraction", "train_fraction must lie in (0, 1)");
    }
    if (repeats < 1) throw ConfigError("repeats", "repeats must be at least 1");
    if (learners.k < 1) throw ConfigError("k", "k must be at least 1");
    if (!(learners.C > 0.0) || !std::isfinite(learners.C)) throw ConfigError("C", "C must be positive");
    if (!std::isfinite(learners.gamma)) throw ConfigError("gamma", "gamma must be finite");
    if (learners.internal_folds < 2) throw ConfigError("internal_folds", "internal_folds must be at least 2");
    if (!(learners.l2_lambda >= 0.0) || !std::isfinite(learners.l2_lambda)) {
        throw ConfigError("l2_lambda", "l2_lambda must be nonnegative");
    }
    if (learners.svm_row_cap < 2) throw ConfigError("svm_row_cap", "svm_row_cap must be at least 2");
    if (positive_label.empty()) throw ConfigError("positive_label", "positive_label must not be empty");
}

std::vector<ensemble::LearnerSpec> base_specs(const LearnerConfig& cfg) {
    ensemble::SvmParams svm;
    svm.smo.kernel = learn::KernelSpec{cfg.kernel, cfg.gamma};
    svm.smo.C = cfg.C;
    svm.row_cap = cfg.svm_row_cap;
    return {ensemble::KnnParams{cfg.k}, svm};
}

MetricRow aggregate(std::span<const MetricRow> rows) {
    if (rows.empty()) throw std::invalid_argument("cannot aggregate zero rows");
    MetricRow out;
    out.model_name = rows.front().model_name;
    out.repeats = rows.front().repeats;
    out.train_fraction = rows.front().train_fraction;
    for (const auto& r : rows) {
        if (r.model_name != out.model_name) throw std::invalid_argument("cannot aggregate rows of different models");
        out.auc += r.auc;
        out.ca += r.ca;
        out.f1 += r.f1;
        out.precision += r.precision;
        out.recall += r.recall;
    }
    const double n = static_cast<double>(rows.size());
    out.auc /= n;
    out.ca /= n;
    out.f1 /= n;
    out.precision /= n;
    out.recall /= n;
    return out;
}

ExperimentReport run_experiment(const data::FlowTable& table, const EvalConfig& cfg) {
    ExperimentReport report;
    report.config = cfg;
    report.repeat_counts = {cfg.repeats};

    auto start = Clock::now();
    const auto prep = prepare(table, cfg);
    add_timing(report.timings, "prepare", seconds_since(start));

    std::map<std::string, std::vector<MetricRow>> by_model;
    for (std::size_t r = 0; r < cfg.repeats; ++r) {
        auto outcome = evaluate_split(prep, r, cfg);
        add_timing(report.timings, "train", outcome.train_seconds);
        add_timing(report.timings, "score", outcome.score_seconds);
        report.warnings.insert(report.warnings.end(), outcome.warnings.begin(), outcome.warnings.end());
        for (const auto& [name, pred] : outcome.predictions) {
            const auto scores = metrics_from_confusion(confusion(outcome.y_test, pred.label));
            MetricRow row;
            row.model_name = name;
            row.auc = auc(outcome.y_test, pred.p1);
            row.ca = scores.ca;
            row.f1 = scores.f1;
            row.precision = scores.precision;
            row.recall = scores.recall;
            row.repeats = cfg.repeats;
            row.train_fraction = cfg.train_fraction;
            row.repeat_index = r;
            report.rows.push_back(row);
            by_model[name].push_back(row);
        }
    }
    for (const char* name : {kKnnName, kSvmName, kStackName}) report.aggregates.push_back(aggregate(by_model[name]));
    return report;
}

void merge_reports(ExperimentReport& into, const ExperimentReport& from) {
    into.repeat_counts.insert(into.repeat_counts.end(), from.repeat_counts.begin(), from.repeat_counts.end());
    into.rows.insert(into.rows.end(), from.rows.begin(), from.rows.end());
    into.aggregates.insert(into.aggregates.end(), from.aggregates.begin(), from.aggregates.end());
    into.warnings.insert(into.warnings.end(), from.warnings.begin(), from.warnings.end());
    for (const auto& t : from.timings) add_timing(into.timings, t.stage, t.seconds);
}

RepeatScores first_repeat_scores(const data::FlowTable& table, const EvalConfig& cfg) {
    const auto prep = prepare(table, cfg);
    auto outcome = evaluate_split(prep, 0, cfg);
    RepeatScores out;
    out.y_true = std::move(outcome.y_test);
    for (auto& [name, pred] : outcome.predictions) out.p1[name] = std::move(pred.p1);
    return out;
}

}  // namespace flowstack::eval
