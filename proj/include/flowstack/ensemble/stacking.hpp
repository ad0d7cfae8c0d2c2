#pragma once

#include "flowstack/ensemble/base_learner.hpp"
#include "flowstack/ensemble/logistic.hpp"

#include <json.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace flowstack::ensemble {

// Out-of-fold P(class 1) per base learner: cell (i, b) comes from a model of
// spec b trained without fold_assignment[i].
struct MetaFeatures {
    Matrix values;
    std::vector<std::size_t> fold_assignment;
    std::vector<LearnerSpec> base_specs;
};

struct StackConfig {
    std::vector<LearnerSpec> base_specs{KnnParams{}, SvmParams{}};
    std::size_t internal_folds = 5;
    LogregOptions meta{};
    std::uint64_t seed = 0;
};

struct StackModel {
    std::vector<LearnerSpec> base_specs;
    std::vector<BaseModel> base_models;  // column order of the meta-features
    LogisticModel meta;
    std::size_t internal_folds = 5;
    std::uint64_t seed = 0;
};

// Class-stratified fold ids; fold sizes and per-class counts differ by at most one.
std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t folds, std::uint64_t seed);

MetaFeatures build_meta_features(const Matrix& features, std::span<const int> labels,
                                 const std::vector<LearnerSpec>& specs, std::size_t internal_folds,
                                 std::uint64_t seed);

// Explicit fold ids (0..F-1). Each fold's complement must hold both classes,
// which admits leave-one-out.
MetaFeatures build_meta_features(const Matrix& features, std::span<const int> labels,
                                 const std::vector<LearnerSpec>& specs, std::vector<std::size_t> fold_assignment,
                                 std::uint64_t seed);

StackModel stack_fit(const Matrix& features, std::span<const int> labels, const StackConfig& config);
StackModel stack_fit(const Matrix& features, std::span<const int> labels, const std::vector<LearnerSpec>& specs,
                     std::size_t internal_folds, double l2_lambda, std::uint64_t seed);

learn::ClassProba stack_predict_proba(const StackModel& model, std::span<const double> x);
learn::BatchPrediction stack_predict_batch(const StackModel& model, const Matrix& rows);
// Meta step only, over base predictions already computed for the same rows.
learn::BatchPrediction stack_combine(const StackModel& model, const std::vector<learn::BatchPrediction>& base);

nlohmann::ordered_json stack_to_json(const StackModel& model);
StackModel stack_from_json(const nlohmann::ordered_json& doc);

}  // namespace flowstack::ensemble
