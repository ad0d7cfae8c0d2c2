#include "flowstack/ensemble/stacking.hpp"

#include "flowstack/error.hpp"
#include "flowstack/rng.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <stdexcept>

namespace flowstack::ensemble {

namespace {

constexpr int kModelVersion = 1;
// Stream tag separating full-split retraining seeds from per-fold seeds.
constexpr std::uint64_t kFullFitStream = 0x5eed5eed5eedULL;

std::uint64_t fold_seed(std::uint64_t seed, std::size_t fold, std::size_t spec) {
    return derive_seed(derive_seed(seed, fold), spec);
}

std::uint64_t full_seed(std::uint64_t seed, std::size_t spec) {
    return derive_seed(derive_seed(seed, kFullFitStream), spec);
}

void require_binary(std::span<const int> labels) {
    const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
    const bool has_neg = std::find(labels.begin(), labels.end(), 0) != labels.end();
    if (!has_pos || !has_neg) throw TrainingError("degenerate labels");
}

}  // namespace

std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t folds, std::uint64_t seed) {
    if (folds < 2) throw TrainingError("internal_folds must be at least 2");
    require_binary(labels);
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i] == 1 ? 1 : 0].push_back(i);
    if (by_class[0].size() < folds || by_class[1].size() < folds) {
        throw TrainingError("class too small for folds");
    }
    Rng rng(seed);
    std::vector<std::size_t> assignment(labels.size());
    std::size_t next = 0;
    for (auto& members : by_class) {
        rng.shuffle(std::span(members));
        // Continue the round robin across classes so overall sizes stay balanced.
        for (auto i : members) assignment[i] = next++ % folds;
    }
    return assignment;
}

MetaFeatures build_meta_features(const Matrix& features, std::span<const int> labels,
                                 const std::vector<LearnerSpec>& specs, std::size_t internal_folds,
                                 std::uint64_t seed) {
    return build_meta_features(features, labels, specs, stratified_folds(labels, internal_folds, seed), seed);
}

MetaFeatures build_meta_features(const Matrix& features, std::span<const int> labels,
                                 const std::vector<LearnerSpec>& specs, std::vector<std::size_t> fold_assignment,
                                 std::uint64_t seed) {
    const std::size_t n = features.rows();
    if (labels.size() != n || fold_assignment.size() != n) {
        throw std::invalid_argument("features, labels and fold ids differ in length");
    }
    if (specs.empty()) throw TrainingError("stacking needs at least one base learner");
    require_binary(labels);
    const std::size_t folds = *std::max_element(fold_assignment.begin(), fold_assignment.end()) + 1;

    std::vector<std::vector<std::size_t>> inside(folds), outside(folds);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t f = 0; f < folds; ++f) (fold_assignment[i] == f ? inside : outside)[f].push_back(i);
    }
    for (std::size_t f = 0; f < folds; ++f) {
        if (inside[f].empty()) throw TrainingError("empty fold " + std::to_string(f));
        std::array<bool, 2> present{};
        for (auto i : outside[f]) present[labels[i] == 1 ? 1 : 0] = true;
        if (!present[0] || !present[1]) throw TrainingError("class too small for folds");
    }

    MetaFeatures meta{Matrix(n, specs.size()), std::move(fold_assignment), specs};
    std::vector<std::exception_ptr> failures(folds);
    const auto fold_count = static_cast<std::ptrdiff_t>(folds);
    // Each fold writes only its own rows, so the result is schedule-independent.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t fi = 0; fi < fold_count; ++fi) {
        const auto f = static_cast<std::size_t>(fi);
        try {
            const Matrix train = features.select_rows(outside[f]);
            const Matrix held_out = features.select_rows(inside[f]);
            std::vector<int> train_labels;
            train_labels.reserve(outside[f].size());
            for (auto i : outside[f]) train_labels.push_back(labels[i]);
            for (std::size_t b = 0; b < specs.size(); ++b) {
                const auto model = fit_base(specs[b], train, train_labels, fold_seed(seed, f, b));
                const auto scored = predict_base(model, held_out);
                for (std::size_t r = 0; r < inside[f].size(); ++r) meta.values(inside[f][r], b) = scored.p1[r];
            }
        } catch (...) {
            failures[f] = std::current_exception();
        }
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
    return meta;
}

StackModel stack_fit(const Matrix& features, std::span<const int> labels, const StackConfig& config) {
    const auto meta = build_meta_features(features, labels, config.base_specs, config.internal_folds, config.seed);
    StackModel model;
    model.base_specs = config.base_specs;
    model.internal_folds = config.internal_folds;
    model.seed = config.seed;
    model.meta = logreg_fit(meta.values, labels, config.meta);
    for (std::size_t b = 0; b < config.base_specs.size(); ++b) {
        model.base_models.push_back(fit_base(config.base_specs[b], features, labels, full_seed(config.seed, b)));
    }
    return model;
}

StackModel stack_fit(const Matrix& features, std::span<const int> labels, const std::vector<LearnerSpec>& specs,
                     std::size_t internal_folds, double l2_lambda, std::uint64_t seed) {
    StackConfig config;
    config.base_specs = specs;
    config.internal_folds = internal_folds;
    config.meta.l2_lambda = l2_lambda;
    config.seed = seed;
    return stack_fit(features, labels, config);
}

learn::ClassProba stack_predict_proba(const StackModel& model, std::span<const double> x) {
    std::vector<double> row(model.base_models.size());
    for (std::size_t b = 0; b < row.size(); ++b) row[b] = base_p1(model.base_models[b], x);
    return logreg_predict_proba(model.meta, row);
}

learn::BatchPrediction stack_combine(const StackModel& model, const std::vector<learn::BatchPrediction>& base) {
    if (base.size() != model.base_models.size()) throw std::invalid_argument("base prediction count mismatch");
    const std::size_t n = base.empty() ? 0 : base.front().p1.size();
    learn::BatchPrediction out{std::vector<double>(n), std::vector<int>(n)};
    std::vector<double> row(base.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t b = 0; b < base.size(); ++b) row[b] = base[b].p1.at(i);
        out.p1[i] = logreg_predict_proba(model.meta, row).p1;
        out.label[i] = out.p1[i] > 0.5 ? 1 : 0;
    }
    return out;
}

learn::BatchPrediction stack_predict_batch(const StackModel& model, const Matrix& rows) {
    std::vector<learn::BatchPrediction> base;
    base.reserve(model.base_models.size());
    for (const auto& m : model.base_models) base.push_back(predict_base(m, rows));
    return stack_combine(model, base);
}

nlohmann::ordered_json stack_to_json(const StackModel& model) {
    nlohmann::ordered_json doc;
    doc["type"] = "stack";
    doc["version"] = kModelVersion;
    doc["internal_folds"] = model.internal_folds;
    doc["seed"] = model.seed;
    auto& specs = doc["base_specs"] = nlohmann::ordered_json::array();
    for (const auto& s : model.base_specs) specs.push_back(spec_to_json(s));
    auto& bases = doc["base_models"] = nlohmann::ordered_json::array();
    for (const auto& m : model.base_models) bases.push_back(base_to_json(m));
    doc["meta"] = logreg_to_json(model.meta);
    return doc;
}

StackModel stack_from_json(const nlohmann::ordered_json& doc) {
    if (doc.at("type") != "stack" || doc.at("version") != kModelVersion) {
        throw std::invalid_argument("not a version-1 stack document");
    }
    StackModel model;
    model.internal_folds = doc.at("internal_folds").get<std::size_t>();
    model.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& s : doc.at("base_specs")) model.base_specs.push_back(spec_from_json(s));
    for (const auto& m : doc.at("base_models")) model.base_models.push_back(base_from_json(m));
    model.meta = logreg_from_json(doc.at("meta"));
    return model;
}

}  // namespace flowstack::ensemble
