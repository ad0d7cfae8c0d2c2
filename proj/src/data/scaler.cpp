#include "flowstack/data/scaler.hpp"

#include "flowstack/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace flowstack::data {

double finite_median(std::vector<double> values) {
    std::erase_if(values, [](double v) { return !std::isfinite(v); });
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return lower + (upper - lower) / 2.0;
}

ScalerStats fit_scaler(const Matrix& features, std::span<const std::size_t> train_indices) {
    if (train_indices.empty()) throw DataError("cannot fit scaler on an empty index set");
    ScalerStats stats;
    const std::size_t d = features.cols();
    stats.min.resize(d);
    stats.max.resize(d);
    stats.median.resize(d);
    std::vector<double> column;
    column.reserve(train_indices.size());
    for (std::size_t c = 0; c < d; ++c) {
        column.clear();
        for (auto r : train_indices) {
            const double v = features(r, c);
            if (std::isfinite(v)) column.push_back(v);
        }
        if (column.empty()) {
            stats.min[c] = stats.max[c] = stats.median[c] = 0.0;
            continue;
        }
        const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
        stats.min[c] = *lo;
        stats.max[c] = *hi;
        stats.median[c] = finite_median(column);
    }
    return stats;
}

ScalerStats fit_scaler(const FlowTable& table, std::span<const std::size_t> train_indices) {
    return fit_scaler(table.features, train_indices);
}

Matrix apply_scaler(const Matrix& features, const ScalerStats& stats) {
    if (features.cols() != stats.cols()) throw DataError("scaler column count does not match table");
    Matrix out(features.rows(), features.cols());
    for (std::size_t r = 0; r < features.rows(); ++r) {
        for (std::size_t c = 0; c < features.cols(); ++c) {
            const double range = stats.max[c] - stats.min[c];
            out(r, c) = range > 0.0 ? (features(r, c) - stats.min[c]) / range : 0.0;
        }
    }
    return out;
}

FlowTable apply_scaler(const FlowTable& table, const ScalerStats& stats) {
    FlowTable out = table;
    out.features = apply_scaler(table.features, stats);
    return out;
}

}  // namespace flowstack::data
