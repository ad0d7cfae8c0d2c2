#pragma once

#include "flowstack/learn/knn.hpp"
#include "flowstack/learn/svm.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>

namespace flowstack::ensemble {

struct KnnParams {
    std::size_t k = learn::kDefaultNeighbors;
};

struct SvmParams {
    learn::SmoConfig smo{};
    // Larger training sets are stratified-subsampled to this many rows.
    std::size_t row_cap = 20000;
};

// Predicts a fixed P(class 1); the training prior when `p1` is unset.
struct ConstantParams {
    std::optional<double> p1;
};

using LearnerSpec = std::variant<KnnParams, SvmParams, ConstantParams>;

struct ConstantModel {
    double p1 = 0.5;
};

using BaseModel = std::variant<learn::KnnModel, learn::SvmModel, ConstantModel>;

std::string learner_name(const LearnerSpec& spec);

BaseModel fit_base(const LearnerSpec& spec, const Matrix& features, std::span<const int> labels,
                   std::uint64_t seed);

learn::BatchPrediction predict_base(const BaseModel& model, const Matrix& rows);
double base_p1(const BaseModel& model, std::span<const double> x);

// False when the underlying optimizer stopped at its iteration cap.
bool base_converged(const BaseModel& model);

nlohmann::ordered_json spec_to_json(const LearnerSpec& spec);
LearnerSpec spec_from_json(const nlohmann::ordered_json& doc);
nlohmann::ordered_json base_to_json(const BaseModel& model);
BaseModel base_from_json(const nlohmann::ordered_json& doc);

}  // namespace flowstack::ensemble
