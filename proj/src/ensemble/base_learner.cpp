#include "flowstack/ensemble/base_learner.hpp"

#include "flowstack/data/sampling.hpp"
#include "flowstack/error.hpp"

#include <algorithm>
#include <stdexcept>

namespace flowstack::ensemble {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::pair<Matrix, std::vector<int>> cap_rows(const Matrix& features, std::span<const int> labels,
                                             std::size_t cap, std::uint64_t seed) {
    std::vector<int> y(labels.begin(), labels.end());
    if (features.rows() <= cap) return {features, std::move(y)};
    const auto lv = data::make_label_vector(y);
    const double fraction = static_cast<double>(cap) / static_cast<double>(features.rows());
    auto picked = data::stratified_sample_indices(lv, fraction, seed);
    std::sort(picked.begin(), picked.end());
    std::vector<int> picked_labels;
    picked_labels.reserve(picked.size());
    for (auto i : picked) picked_labels.push_back(labels[i]);
    return {features.select_rows(picked), std::move(picked_labels)};
}

}  // namespace

std::string learner_name(const LearnerSpec& spec) {
    return std::visit(overloaded{[](const KnnParams&) { return std::string("knn"); },
                                 [](const SvmParams&) { return std::string("svm"); },
                                 [](const ConstantParams&) { return std::string("constant"); }},
                      spec);
}

BaseModel fit_base(const LearnerSpec& spec, const Matrix& features, std::span<const int> labels,
                   std::uint64_t seed) {
    return std::visit(
        overloaded{
            [&](const KnnParams& p) -> BaseModel { return learn::knn_fit(features, labels, p.k); },
            [&](const SvmParams& p) -> BaseModel {
                if (p.row_cap < 2) throw TrainingError("svm row cap must be at least 2");
                auto [x, y] = cap_rows(features, labels, p.row_cap, seed);
                return learn::svm_fit(x, std::span<const int>(y), p.smo);
            },
            [&](const ConstantParams& p) -> BaseModel {
                if (p.p1) return ConstantModel{*p.p1};
                if (labels.empty()) throw TrainingError("constant learner needs training rows");
                const auto positives = std::count(labels.begin(), labels.end(), 1);
                return ConstantModel{static_cast<double>(positives) / static_cast<double>(labels.size())};
            }},
        spec);
}

learn::BatchPrediction predict_base(const BaseModel& model, const Matrix& rows) {
    return std::visit(overloaded{[&](const learn::KnnModel& m) { return learn::knn_predict_batch(m, rows); },
                                 [&](const learn::SvmModel& m) { return learn::svm_predict_batch(m, rows); },
                                 [&](const ConstantModel& m) {
                                     return learn::BatchPrediction{std::vector<double>(rows.rows(), m.p1),
                                                                   std::vector<int>(rows.rows(), m.p1 > 0.5)};
                                 }},
                      model);
}

double base_p1(const BaseModel& model, std::span<const double> x) {
    return std::visit(overloaded{[&](const learn::KnnModel& m) { return learn::knn_predict_proba(m, x).p1; },
                                 [&](const learn::SvmModel& m) { return learn::svm_predict_proba(m, x).p1; },
                                 [](const ConstantModel& m) { return m.p1; }},
                      model);
}

bool base_converged(const BaseModel& model) {
    if (const auto* svm = std::get_if<learn::SvmModel>(&model)) return svm->converged;
    return true;
}

nlohmann::ordered_json spec_to_json(const LearnerSpec& spec) {
    return std::visit(
        overloaded{[](const KnnParams& p) { return nlohmann::ordered_json{{"type", "knn"}, {"k", p.k}}; },
                   [](const SvmParams& p) {
                       return nlohmann::ordered_json{{"type", "svm"},
                                                     {"kernel", learn::to_string(p.smo.kernel.kind)},
                                                     {"gamma", p.smo.kernel.gamma},
                                                     {"C", p.smo.C},
                                                     {"tolerance", p.smo.tolerance},
                                                     {"max_passes", p.smo.max_passes},
                                                     {"row_cap", p.row_cap}};
                   },
                   [](const ConstantParams& p) {
                       nlohmann::ordered_json doc{{"type", "constant"}};
                       doc["p1"] = p.p1 ? nlohmann::ordered_json(*p.p1) : nlohmann::ordered_json(nullptr);
                       return doc;
                   }},
        spec);
}

LearnerSpec spec_from_json(const nlohmann::ordered_json& doc) {
    const auto type = doc.at("type").get<std::string>();
    if (type == "knn") return KnnParams{doc.at("k").get<std::size_t>()};
    if (type == "svm") {
        SvmParams p;
        p.smo.kernel.kind = learn::kernel_kind_from_string(doc.at("kernel").get<std::string>());
        p.smo.kernel.gamma = doc.at("gamma").get<double>();
        p.smo.C = doc.at("C").get<double>();
        p.smo.tolerance = doc.at("tolerance").get<double>();
        p.smo.max_passes = doc.at("max_passes").get<std::size_t>();
        p.row_cap = doc.at("row_cap").get<std::size_t>();
        return p;
    }
    if (type == "constant") {
        ConstantParams p;
        if (!doc.at("p1").is_null()) p.p1 = doc.at("p1").get<double>();
        return p;
    }
    throw std::invalid_argument("unknown learner type: " + type);
}

nlohmann::ordered_json base_to_json(const BaseModel& model) {
    return std::visit(overloaded{[](const learn::KnnModel& m) { return learn::knn_to_json(m); },
                                 [](const learn::SvmModel& m) { return learn::svm_to_json(m); },
                                 [](const ConstantModel& m) {
                                     return nlohmann::ordered_json{{"type", "constant"}, {"p1", m.p1}};
                                 }},
                      model);
}

BaseModel base_from_json(const nlohmann::ordered_json& doc) {
    const auto type = doc.at("type").get<std::string>();
    if (type == "knn") return learn::knn_from_json(doc);
    if (type == "svm") return learn::svm_from_json(doc);
    if (type == "constant") return ConstantModel{doc.at("p1").get<double>()};
    throw std::invalid_argument("unknown model type: " + type);
}

}  // namespace flowstack::ensemble
