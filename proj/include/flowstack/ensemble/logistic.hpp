#pragma once

#include "flowstack/learn/proba.hpp"
#include "flowstack/matrix.hpp"

#include <json.hpp>

#include <span>
#include <vector>

namespace flowstack::ensemble {

struct LogisticModel {
    std::vector<double> weights;
    double bias = 0.0;
    double l2_lambda = 0.0;
    bool converged = true;
    std::size_t iterations = 0;
};

struct LogregOptions {
    double l2_lambda = 1e-3;
    std::size_t max_iterations = 10000;
    double gradient_tolerance = 1e-5;
};

double sigmoid(double z) noexcept;

// mean log-loss + (lambda / 2) * |w|^2; the bias is not penalized.
double logreg_loss(const Matrix& m, std::span<const int> y, std::span<const double> weights, double bias,
                   double l2_lambda);

// Gradient of logreg_loss; returns d/dbias, fills `grad_weights`.
double logreg_gradient(const Matrix& m, std::span<const int> y, std::span<const double> weights, double bias,
                       double l2_lambda, std::span<double> grad_weights);

// Full-batch gradient descent with Armijo backtracking from zero weights.
// `loss_trace`, when given, receives the loss after every accepted step.
LogisticModel logreg_fit(const Matrix& m, std::span<const int> y, const LogregOptions& options,
                         std::vector<double>* loss_trace = nullptr);
LogisticModel logreg_fit(const Matrix& m, std::span<const int> y, double l2_lambda, std::size_t iterations);

learn::ClassProba logreg_predict_proba(const LogisticModel& model, std::span<const double> row);

nlohmann::ordered_json logreg_to_json(const LogisticModel& model);
LogisticModel logreg_from_json(const nlohmann::ordered_json& doc);

}  // namespace flowstack::ensemble
