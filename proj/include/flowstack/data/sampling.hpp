#pragma once

#include "flowstack/data/flow_table.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace flowstack::data {

struct Split {
    std::vector<std::size_t> train;  // ascending
    std::vector<std::size_t> test;   // ascending

    friend bool operator==(const Split&, const Split&) = default;
};

struct SplitPlan {
    std::uint64_t seed = 0;
    double train_fraction = 0.0;
    std::size_t repeats = 0;
    std::vector<Split> splits;

    friend bool operator==(const SplitPlan&, const SplitPlan&) = default;
};

// Row indices of a class-stratified sample, in shuffled order.
std::vector<std::size_t> stratified_sample_indices(const LabelVector& labels, double fraction,
                                                   std::uint64_t seed);

std::pair<FlowTable, LabelVector> stratified_sample(const FlowTable& table, const LabelVector& labels,
                                                    double fraction, std::uint64_t seed);

// Repeated stratified train/test partitions. Repeat r draws from the stream
// derive_seed(seed, r), so a plan's prefix does not depend on `repeats`.
SplitPlan make_splits(std::size_t n, const LabelVector& labels, double train_fraction,
                      std::size_t repeats, std::uint64_t seed);

// Per-class quotas summing to round(fraction * total) (largest remainder),
// each class given at least one row.
std::vector<std::size_t> allocate_per_class(std::span<const std::size_t> class_counts, double fraction);

}  // namespace flowstack::data
