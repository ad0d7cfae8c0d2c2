#pragma once

#include "flowstack/data/flow_table.hpp"

#include <cstdint>
#include <utility>

namespace flowstack::eval {

struct SynthParams {
    std::size_t n = 1000;
    std::size_t d = 5;
    double separation = 3.29;
    double class_balance = 0.5;  // share of attack rows
    std::uint64_t seed = 42;
};

// Two unit-variance spherical Gaussian clusters whose means differ by
// `separation` along the first feature. BENIGN rows map to 0 and DrDoS_NTP to 1.
std::pair<data::FlowTable, data::LabelVector> synth_flows(const SynthParams& params);

// Bayes accuracy of the balanced problem: Phi(separation / 2).
double bayes_accuracy(double separation);

double normal_cdf(double x);

}  // namespace flowstack::eval
