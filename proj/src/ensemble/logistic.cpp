#include "flowstack/ensemble/logistic.hpp"

#include "flowstack/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace flowstack::ensemble {

namespace {

constexpr int kModelVersion = 1;

double dot(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void check_shape(const Matrix& m, std::span<const int> y, std::span<const double> weights) {
    if (m.rows() != y.size()) throw std::invalid_argument("label count does not match rows");
    if (m.cols() != weights.size()) throw std::invalid_argument("dimension mismatch");
}

}  // namespace

double sigmoid(double z) noexcept {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double logreg_loss(const Matrix& m, std::span<const int> y, std::span<const double> weights, double bias,
                   double l2_lambda) {
    check_shape(m, y, weights);
    double loss = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double z = dot(weights, m.row(i)) + bias;
        // -log sigmoid(z) for y = 1, -log(1 - sigmoid(z)) for y = 0.
        loss += y[i] == 1 ? softplus(-z) : softplus(z);
    }
    loss /= static_cast<double>(m.rows());
    return loss + 0.5 * l2_lambda * dot(weights, weights);
}

double logreg_gradient(const Matrix& m, std::span<const int> y, std::span<const double> weights, double bias,
                       double l2_lambda, std::span<double> grad_weights) {
    check_shape(m, y, weights);
    std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
    double grad_bias = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto row = m.row(i);
        const double residual = sigmoid(dot(weights, row) + bias) - static_cast<double>(y[i]);
        for (std::size_t j = 0; j < row.size(); ++j) grad_weights[j] += residual * row[j];
        grad_bias += residual;
    }
    const double n = static_cast<double>(m.rows());
    for (std::size_t j = 0; j < weights.size(); ++j) grad_weights[j] = grad_weights[j] / n + l2_lambda * weights[j];
    return grad_bias / n;
}

LogisticModel logreg_fit(const Matrix& m, std::span<const int> y, const LogregOptions& options,
                         std::vector<double>* loss_trace) {
    if (m.rows() != y.size()) throw std::invalid_argument("label count does not match rows");
    const bool has_pos = std::find(y.begin(), y.end(), 1) != y.end();
    const bool has_neg = std::find(y.begin(), y.end(), 0) != y.end();
    if (!has_pos || !has_neg) throw TrainingError("degenerate labels");
    if (options.l2_lambda < 0.0) throw TrainingError("l2_lambda must be nonnegative");

    const std::size_t d = m.cols();
    LogisticModel model;
    model.weights.assign(d, 0.0);
    model.l2_lambda = options.l2_lambda;
    model.converged = false;

    std::vector<double> grad(d), trial(d);
    double loss = logreg_loss(m, y, model.weights, model.bias, options.l2_lambda);
    if (loss_trace) loss_trace->push_back(loss);
    double step = 1.0;
    for (;;) {
        const double grad_bias = logreg_gradient(m, y, model.weights, model.bias, options.l2_lambda, grad);
        const double grad_sq = dot(grad, grad) + grad_bias * grad_bias;
        if (std::sqrt(grad_sq) <= options.gradient_tolerance) {
            model.converged = true;
            break;
        }
        if (model.iterations >= options.max_iterations) break;
        ++model.iterations;

        // Armijo backtracking; the accepted step seeds the next trial at twice its size.
        double trial_loss = loss;
        double trial_bias = model.bias;
        for (;;) {
            for (std::size_t j = 0; j < d; ++j) trial[j] = model.weights[j] - step * grad[j];
            trial_bias = model.bias - step * grad_bias;
            trial_loss = logreg_loss(m, y, trial, trial_bias, options.l2_lambda);
            if (trial_loss <= loss - 0.5 * step * grad_sq || step < 1e-20) break;
            step *= 0.5;
        }
        if (trial_loss > loss) break;  // no descent possible at machine precision
        model.weights.swap(trial);
        model.bias = trial_bias;
        loss = trial_loss;
        if (loss_trace) loss_trace->push_back(loss);
        step *= 2.0;
    }
    return model;
}

LogisticModel logreg_fit(const Matrix& m, std::span<const int> y, double l2_lambda, std::size_t iterations) {
    return logreg_fit(m, y, LogregOptions{l2_lambda, iterations});
}

learn::ClassProba logreg_predict_proba(const LogisticModel& model, std::span<const double> row) {
    if (row.size() != model.weights.size()) throw std::invalid_argument("dimension mismatch");
    const double p1 = sigmoid(dot(model.weights, row) + model.bias);
    return {1.0 - p1, p1};
}

nlohmann::ordered_json logreg_to_json(const LogisticModel& model) {
    return {{"type", "logistic"},     {"version", kModelVersion},       {"weights", model.weights},
            {"bias", model.bias},     {"l2_lambda", model.l2_lambda},   {"converged", model.converged},
            {"iterations", model.iterations}};
}

LogisticModel logreg_from_json(const nlohmann::ordered_json& doc) {
    if (doc.at("type") != "logistic" || doc.at("version") != kModelVersion) {
        throw std::invalid_argument("not a version-1 logistic document");
    }
    LogisticModel model;
    model.weights = doc.at("weights").get<std::vector<double>>();
    model.bias = doc.at("bias").get<double>();
    model.l2_lambda = doc.at("l2_lambda").get<double>();
    model.converged = doc.at("converged").get<bool>();
    model.iterations = doc.at("iterations").get<std::size_t>();
    return model;
}

}  // namespace flowstack::ensemble
