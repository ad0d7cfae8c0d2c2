#pragma once

#include <vector>

namespace flowstack::learn {

struct ClassProba {
    double p0 = 0.5;
    double p1 = 0.5;

    friend bool operator==(const ClassProba&, const ClassProba&) = default;
};

// Scores for a batch of rows: P(class 1) and the hard prediction.
struct BatchPrediction {
    std::vector<double> p1;
    std::vector<int> label;
};

}  // namespace flowstack::learn
