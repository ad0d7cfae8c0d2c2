#include "flowstack/learn/kernel.hpp"

#include "flowstack/learn/distance.hpp"

#include <cmath>
#include <stdexcept>

namespace flowstack::learn {

std::string to_string(KernelSpec::Kind kind) {
    return kind == KernelSpec::Kind::linear ? "linear" : "rbf";
}

KernelSpec::Kind kernel_kind_from_string(const std::string& name) {
    if (name == "linear") return KernelSpec::Kind::linear;
    if (name == "rbf") return KernelSpec::Kind::rbf;
    throw std::invalid_argument("unknown kernel: " + name);
}

double kernel_value(const KernelSpec& spec, std::span<const double> a, std::span<const double> b) {
    if (spec.kind == KernelSpec::Kind::rbf) return std::exp(-spec.gamma * squared_distance(a, b));
    if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return dot;
}

void kernel_column(const KernelSpec& spec, const Matrix& points, std::size_t j, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(points.rows());
    const auto pivot = points.row(j);
#pragma omp parallel for schedule(static) if (n > 2048)
    for (std::ptrdiff_t t = 0; t < n; ++t) {
        out[static_cast<std::size_t>(t)] = kernel_value(spec, points.row(static_cast<std::size_t>(t)), pivot);
    }
}

void kernel_column_serial(const KernelSpec& spec, const Matrix& points, std::size_t j, std::span<double> out) {
    const auto pivot = points.row(j);
    for (std::size_t t = 0; t < points.rows(); ++t) out[t] = kernel_value(spec, points.row(t), pivot);
}

double default_gamma(const Matrix& points) {
    if (points.rows() == 0 || points.cols() == 0) return 1.0;
    const double n = static_cast<double>(points.rows());
    double variance_sum = 0.0;
    for (std::size_t c = 0; c < points.cols(); ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < points.rows(); ++r) mean += points(r, c);
        mean /= n;
        double ss = 0.0;
        for (std::size_t r = 0; r < points.rows(); ++r) {
            const double d = points(r, c) - mean;
            ss += d * d;
        }
        variance_sum += ss / n;
    }
    // d * mean variance is just the summed variance.
    if (!(variance_sum > 0.0) || !std::isfinite(variance_sum)) return 1.0;
    return 1.0 / variance_sum;
}

}  // namespace flowstack::learn
