#pragma once

#include "flowstack/data/flow_table.hpp"
#include "flowstack/learn/kdtree.hpp"
#include "flowstack/learn/proba.hpp"
#include "flowstack/matrix.hpp"

#include <json.hpp>

#include <span>
#include <vector>

namespace flowstack::learn {

inline constexpr std::size_t kDefaultNeighbors = 5;

// Frozen training snapshot plus its search index. Uniform neighbor voting.
struct KnnModel {
    Matrix train_features;
    std::vector<int> train_labels;
    std::size_t k = kDefaultNeighbors;
    KdTree index;
};

KnnModel knn_fit(Matrix features, std::span<const int> labels, std::size_t k);
KnnModel knn_fit(Matrix features, const data::LabelVector& labels, std::size_t k);

std::vector<Neighbor> knn_neighbors(const KnnModel& model, std::span<const double> x);

// p1 is the positive share of the k nearest rows.
ClassProba knn_predict_proba(const KnnModel& model, std::span<const double> x);
// argmax of the probabilities; an even vote goes to the single nearest row's label.
int knn_predict(const KnnModel& model, std::span<const double> x);

// Batch scoring, parallel over query rows.
BatchPrediction knn_predict_batch(const KnnModel& model, const Matrix& queries);
// Serial brute-force reference for the batch kernel.
BatchPrediction knn_predict_batch_serial(const KnnModel& model, const Matrix& queries);

nlohmann::ordered_json knn_to_json(const KnnModel& model);
KnnModel knn_from_json(const nlohmann::ordered_json& doc);

}  // namespace flowstack::learn
