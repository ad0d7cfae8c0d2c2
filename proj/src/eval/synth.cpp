#include "flowstack/eval/synth.hpp"

#include "flowstack/error.hpp"
#include "flowstack/rng.hpp"

#include <cmath>

namespace flowstack::eval {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double bayes_accuracy(double separation) { return normal_cdf(separation / 2.0); }

std::pair<data::FlowTable, data::LabelVector> synth_flows(const SynthParams& p) {
    if (p.n < 4) throw DataError("synthetic bench needs at least 4 rows");
    if (p.d < 1) throw DataError("synthetic bench needs at least one feature");
    if (!(p.class_balance > 0.0 && p.class_balance < 1.0)) throw DataError("class balance must lie in (0, 1)");
    if (!std::isfinite(p.separation) || p.separation < 0.0) throw DataError("separation must be finite and >= 0");
    const auto positives = static_cast<std::size_t>(std::llround(p.class_balance * static_cast<double>(p.n)));
    if (positives == 0 || positives == p.n) throw DataError("class balance leaves a class empty");

    Rng rng(p.seed);
    std::vector<int> labels(p.n, 0);
    std::fill(labels.end() - static_cast<std::ptrdiff_t>(positives), labels.end(), 1);
    rng.shuffle(std::span(labels));

    data::FlowTable table;
    for (std::size_t c = 0; c < p.d; ++c) table.column_names.push_back("feature_" + std::to_string(c + 1));
    table.features = Matrix(p.n, p.d);
    table.raw_labels.reserve(p.n);
    const double half = p.separation / 2.0;
    for (std::size_t r = 0; r < p.n; ++r) {
        for (std::size_t c = 0; c < p.d; ++c) table.features(r, c) = rng.normal();
        table.features(r, 0) += labels[r] == 1 ? half : -half;
        table.raw_labels.emplace_back(labels[r] == 1 ? data::kDefaultAttackLabel : data::kBenignLabel);
    }
    return {std::move(table), data::make_label_vector(std::move(labels), data::kDefaultAttackLabel)};
}

}  // namespace flowstack::eval
