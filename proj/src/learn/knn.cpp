#include "flowstack/learn/knn.hpp"

#include "flowstack/error.hpp"

#include <algorithm>
#include <stdexcept>

namespace flowstack::learn {

namespace {

constexpr int kModelVersion = 1;

ClassProba vote(const KnnModel& model, const std::vector<Neighbor>& neighbors) {
    std::size_t positives = 0;
    for (const auto& n : neighbors) positives += model.train_labels[n.index] == 1 ? 1 : 0;
    const std::size_t negatives = neighbors.size() - positives;
    // The minority share is divided, the majority is its complement: exact under label swap.
    const double minority = static_cast<double>(std::min(positives, negatives)) / static_cast<double>(neighbors.size());
    if (positives <= negatives) return {1.0 - minority, minority};
    return {minority, 1.0 - minority};
}

int decide(const KnnModel& model, const std::vector<Neighbor>& neighbors, const ClassProba& p) {
    if (p.p1 > p.p0) return 1;
    if (p.p0 > p.p1) return 0;
    return model.train_labels[neighbors.front().index];
}

void check_query(const KnnModel& model, std::span<const double> x) {
    if (x.size() != model.train_features.cols()) throw std::invalid_argument("dimension mismatch");
}

}  // namespace

KnnModel knn_fit(Matrix features, std::span<const int> labels, std::size_t k) {
    if (features.empty()) throw TrainingError("kNN needs at least one training row");
    if (labels.size() != features.rows()) throw TrainingError("label count does not match training rows");
    if (k == 0) throw TrainingError("k must be positive");
    if (k > features.rows()) throw TrainingError("k exceeds the number of training rows");
    const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
    const bool has_neg = std::find(labels.begin(), labels.end(), 0) != labels.end();
    if (!has_pos || !has_neg) throw TrainingError("degenerate labels");

    KnnModel model;
    model.train_features = std::move(features);
    model.train_labels.assign(labels.begin(), labels.end());
    model.k = k;
    model.index = KdTree(model.train_features);
    return model;
}

KnnModel knn_fit(Matrix features, const data::LabelVector& labels, std::size_t k) {
    return knn_fit(std::move(features), std::span<const int>(labels.values), k);
}

std::vector<Neighbor> knn_neighbors(const KnnModel& model, std::span<const double> x) {
    check_query(model, x);
    return model.index.nearest(model.train_features, x, model.k);
}

ClassProba knn_predict_proba(const KnnModel& model, std::span<const double> x) {
    return vote(model, knn_neighbors(model, x));
}

int knn_predict(const KnnModel& model, std::span<const double> x) {
    const auto neighbors = knn_neighbors(model, x);
    return decide(model, neighbors, vote(model, neighbors));
}

BatchPrediction knn_predict_batch(const KnnModel& model, const Matrix& queries) {
    if (queries.cols() != model.train_features.cols()) throw std::invalid_argument("dimension mismatch");
    const auto n = static_cast<std::ptrdiff_t>(queries.rows());
    BatchPrediction out{std::vector<double>(queries.rows()), std::vector<int>(queries.rows())};
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto row = static_cast<std::size_t>(i);
        const auto neighbors = model.index.nearest(model.train_features, queries.row(row), model.k);
        const auto p = vote(model, neighbors);
        out.p1[row] = p.p1;
        out.label[row] = decide(model, neighbors, p);
    }
    return out;
}

BatchPrediction knn_predict_batch_serial(const KnnModel& model, const Matrix& queries) {
    if (queries.cols() != model.train_features.cols()) throw std::invalid_argument("dimension mismatch");
    BatchPrediction out{std::vector<double>(queries.rows()), std::vector<int>(queries.rows())};
    for (std::size_t row = 0; row < queries.rows(); ++row) {
        const auto neighbors = brute_force_nearest(model.train_features, queries.row(row), model.k);
        const auto p = vote(model, neighbors);
        out.p1[row] = p.p1;
        out.label[row] = decide(model, neighbors, p);
    }
    return out;
}

nlohmann::ordered_json knn_to_json(const KnnModel& model) {
    nlohmann::ordered_json doc;
    doc["type"] = "knn";
    doc["version"] = kModelVersion;
    doc["k"] = model.k;
    doc["rows"] = model.train_features.rows();
    doc["cols"] = model.train_features.cols();
    doc["labels"] = model.train_labels;
    doc["features"] = model.train_features.data();
    return doc;
}

KnnModel knn_from_json(const nlohmann::ordered_json& doc) {
    if (doc.at("type") != "knn" || doc.at("version") != kModelVersion) {
        throw std::invalid_argument("not a version-1 kNN document");
    }
    Matrix features(doc.at("rows").get<std::size_t>(), doc.at("cols").get<std::size_t>(),
                    doc.at("features").get<std::vector<double>>());
    const auto labels = doc.at("labels").get<std::vector<int>>();
    return knn_fit(std::move(features), std::span<const int>(labels), doc.at("k").get<std::size_t>());
}

}  // namespace flowstack::learn
