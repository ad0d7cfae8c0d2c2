#pragma once

#include "flowstack/data/flow_table.hpp"

#include <span>
#include <vector>

namespace flowstack::data {

struct ScalerStats {
    std::vector<double> min;
    std::vector<double> max;
    std::vector<double> median;

    std::size_t cols() const noexcept { return min.size(); }
    friend bool operator==(const ScalerStats&, const ScalerStats&) = default;
};

// Min/max/median per column over the listed rows only (finite values).
ScalerStats fit_scaler(const Matrix& features, std::span<const std::size_t> train_indices);
ScalerStats fit_scaler(const FlowTable& table, std::span<const std::size_t> train_indices);

// (v - min) / (max - min), 0 for a degenerate range; no clipping.
Matrix apply_scaler(const Matrix& features, const ScalerStats& stats);
FlowTable apply_scaler(const FlowTable& table, const ScalerStats& stats);

// Median of the finite values; NaN when there are none.
double finite_median(std::vector<double> values);

}  // namespace flowstack::data
