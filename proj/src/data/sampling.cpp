#include "flowstack/data/sampling.hpp"

#include "flowstack/error.hpp"
#include "flowstack/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace flowstack::data {

namespace {

std::array<std::vector<std::size_t>, 2> indices_by_class(const LabelVector& labels) {
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels.values[i] == 1 ? 1 : 0].push_back(i);
    if (by_class[0].empty() || by_class[1].empty()) throw DataError("degenerate labels: only one class present");
    return by_class;
}

}  // namespace

std::vector<std::size_t> allocate_per_class(std::span<const std::size_t> class_counts, double fraction) {
    const std::size_t total_rows = std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0});
    const auto target = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total_rows)));

    std::vector<std::size_t> quota(class_counts.size());
    std::vector<double> remainder(class_counts.size());
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < class_counts.size(); ++c) {
        const double exact = fraction * static_cast<double>(class_counts[c]);
        quota[c] = std::min(class_counts[c], static_cast<std::size_t>(std::floor(exact)));
        remainder[c] = exact - std::floor(exact);
        assigned += quota[c];
    }
    std::vector<std::size_t> order(class_counts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < target && i < order.size(); ++i) {
        if (quota[order[i]] < class_counts[order[i]]) {
            ++quota[order[i]];
            ++assigned;
        }
    }

    // Keep every class represented by borrowing from the largest quota.
    for (std::size_t c = 0; c < quota.size(); ++c) {
        if (quota[c] > 0 || class_counts[c] == 0) continue;
        const auto donor = static_cast<std::size_t>(std::max_element(quota.begin(), quota.end()) - quota.begin());
        if (quota[donor] < 2) throw DataError("fraction too small: a class would have no rows");
        --quota[donor];
        quota[c] = 1;
    }
    return quota;
}

std::vector<std::size_t> stratified_sample_indices(const LabelVector& labels, double fraction,
                                                   std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw DataError("sample fraction must lie in (0, 1]");
    auto by_class = indices_by_class(labels);
    for (const auto& members : by_class) {
        if (std::llround(fraction * static_cast<double>(members.size())) < 1) {
            throw DataError("sample fraction too small: a class would vanish");
        }
    }
    const std::array<std::size_t, 2> counts = {by_class[0].size(), by_class[1].size()};
    const auto quota = allocate_per_class(counts, fraction);

    Rng rng(seed);
    std::vector<std::size_t> picked;
    for (std::size_t c = 0; c < 2; ++c) {
        rng.shuffle(std::span(by_class[c]));
        picked.insert(picked.end(), by_class[c].begin(), by_class[c].begin() + static_cast<std::ptrdiff_t>(quota[c]));
    }
    if (picked.size() < 2) throw DataError("sample fraction too small: fewer than two rows");
    rng.shuffle(std::span(picked));
    return picked;
}

std::pair<FlowTable, LabelVector> stratified_sample(const FlowTable& table, const LabelVector& labels,
                                                    double fraction, std::uint64_t seed) {
    if (table.rows() != labels.size()) throw DataError("label vector does not match table rows");
    const auto picked = stratified_sample_indices(labels, fraction, seed);
    return {table.select_rows(picked), labels.select(picked)};
}

SplitPlan make_splits(std::size_t n, const LabelVector& labels, double train_fraction, std::size_t repeats,
                      std::uint64_t seed) {
    if (labels.size() != n) throw DataError("label vector does not match row count");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw DataError("train fraction must lie in (0, 1)");
    if (repeats == 0) throw DataError("repeats must be positive");
    const auto by_class = indices_by_class(labels);
    const std::array<std::size_t, 2> counts = {by_class[0].size(), by_class[1].size()};
    if (std::llround(train_fraction * static_cast<double>(n)) < 2) {
        throw DataError("train fraction too small to include both classes");
    }
    const auto quota = allocate_per_class(counts, train_fraction);
    if (quota[0] >= counts[0] || quota[1] >= counts[1]) {
        throw DataError("train fraction leaves a class without test rows");
    }

    SplitPlan plan{seed, train_fraction, repeats, {}};
    plan.splits.reserve(repeats);
    std::vector<char> in_train(n);
    for (std::size_t r = 0; r < repeats; ++r) {
        Rng rng(derive_seed(seed, r));
        std::fill(in_train.begin(), in_train.end(), 0);
        for (std::size_t c = 0; c < 2; ++c) {
            auto members = by_class[c];
            rng.shuffle(std::span(members));
            for (std::size_t i = 0; i < quota[c]; ++i) in_train[members[i]] = 1;
        }
        Split split;
        split.train.reserve(quota[0] + quota[1]);
        split.test.reserve(n - quota[0] - quota[1]);
        for (std::size_t i = 0; i < n; ++i) (in_train[i] ? split.train : split.test).push_back(i);
        plan.splits.push_back(std::move(split));
    }
    return plan;
}

}  // namespace flowstack::data
