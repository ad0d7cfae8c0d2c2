#pragma once

#include "flowstack/data/flow_table.hpp"
#include "flowstack/ensemble/stacking.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace flowstack::eval {

inline constexpr const char* kKnnName = "knn";
inline constexpr const char* kSvmName = "svm";
inline constexpr const char* kStackName = "stack";

struct LearnerConfig {
    std::size_t k = learn::kDefaultNeighbors;
    learn::KernelSpec::Kind kernel = learn::KernelSpec::Kind::rbf;
    double C = 1.0;
    double gamma = 0.0;  // <= 0: derived from the training split
    std::size_t internal_folds = 5;
    double l2_lambda = 1e-3;
    std::size_t svm_row_cap = 20000;
};

struct EvalConfig {
    double sample_fraction = 0.10;
    double train_fraction = 0.10;
    std::size_t repeats = 10;
    std::uint64_t seed = 42;
    LearnerConfig learners{};
    std::string positive_label = data::kDefaultAttackLabel;

    // Throws ConfigError naming the offending field.
    void validate() const;
};

struct MetricRow {
    std::string model_name;
    double auc = 0.0;
    double ca = 0.0;
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    std::size_t repeats = 0;  // the TRAIN/TEST repeat count of the run
    double train_fraction = 0.0;
    std::optional<std::size_t> repeat_index;  // unset on aggregated rows
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct ExperimentReport {
    EvalConfig config;
    std::vector<std::size_t> repeat_counts;
    std::vector<MetricRow> rows;
    std::vector<MetricRow> aggregates;
    std::vector<std::string> warnings;
    std::vector<StageTiming> timings;
};

// Arithmetic mean of each metric over per-repeat rows of one model.
MetricRow aggregate(std::span<const MetricRow> rows);

std::vector<ensemble::LearnerSpec> base_specs(const LearnerConfig& cfg);

// clean -> encode -> stratified sample -> repeated splits; per split: scale on
// train, fit kNN / SVM / stack, score the test rows.
ExperimentReport run_experiment(const data::FlowTable& table, const EvalConfig& cfg);

// Appends another run (typically a different repeat count) to `into`.
void merge_reports(ExperimentReport& into, const ExperimentReport& from);

// Test-set labels and P(class 1) per model for the first repeat.
struct RepeatScores {
    std::vector<int> y_true;
    std::map<std::string, std::vector<double>> p1;
};

RepeatScores first_repeat_scores(const data::FlowTable& table, const EvalConfig& cfg);

}  // namespace flowstack::eval
