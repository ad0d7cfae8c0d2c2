#pragma once

#include "flowstack/data/flow_table.hpp"
#include "flowstack/learn/kernel.hpp"
#include "flowstack/learn/proba.hpp"
#include "flowstack/matrix.hpp"

#include <json.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace flowstack::learn {

struct SmoConfig {
    // Stop once the maximal KKT violation (gap between the most violating
    // pair) is at most this value.
    double tolerance = 1e-3;
    // Iteration cap is max_passes * 100 * n pair updates.
    std::size_t max_passes = 10;
    KernelSpec kernel{};
    double C = 1.0;
    // Kernel column cache budget for one training run.
    std::size_t cache_bytes = std::size_t{256} << 20;
};

struct SvmModel {
    Matrix support_vectors;
    std::vector<double> dual_coefficients;  // alpha_i * y_i, y in {-1, +1}
    std::vector<std::size_t> support_indices;  // rows of the training matrix
    double bias = 0.0;
    KernelSpec kernel{};
    double C = 1.0;
    double platt_a = 0.0;
    double platt_b = 0.0;
    bool calibrated = false;
    bool converged = true;
    std::size_t iterations = 0;
};

SvmModel svm_fit(const Matrix& features, std::span<const int> labels, const SmoConfig& cfg);
SvmModel svm_fit(const Matrix& features, const data::LabelVector& labels, const SmoConfig& cfg);

double svm_decision(const SvmModel& model, std::span<const double> x);
std::vector<double> svm_decision_batch(const SvmModel& model, const Matrix& rows);

// p1 = 1 / (1 + exp(A f + B)).
ClassProba svm_predict_proba(const SvmModel& model, std::span<const double> x);
// Hard labels come from the sign of the decision value, p1 from the sigmoid.
BatchPrediction svm_predict_batch(const SvmModel& model, const Matrix& rows);

struct PlattParams {
    double a = 0.0;
    double b = 0.0;
};

// Sigmoid fit over decision values with smoothed targets and a damped Newton
// method; `labels` are 0/1.
PlattParams fit_platt(std::span<const double> decision_values, std::span<const int> labels,
                      std::size_t max_iterations = 10);

double platt_probability(const PlattParams& params, double decision_value);

nlohmann::ordered_json svm_to_json(const SvmModel& model);
SvmModel svm_from_json(const nlohmann::ordered_json& doc);

}  // namespace flowstack::learn
