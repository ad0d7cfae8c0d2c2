#pragma once

// Frozen expectations for metrics_from_confusion, produced offline with exact
// rational arithmetic (Python fractions, per-class P/R/F1 from their textbook
// definitions, support-weighted, converted with correct rounding).
// Fields: tp, fp, tn, fn, ca, precision, recall, f1.

#include <cstddef>

namespace flowstack::test {

struct FrozenMetrics {
    std::size_t tp, fp, tn, fn;
    double ca, precision, recall, f1;
};

inline constexpr FrozenMetrics kFrozenMetrics[] = {
    {0, 0, 0, 1, 0.0, 0.0, 0.0, 0.0},
    {0, 0, 0, 2, 0.0, 0.0, 0.0, 0.0},
    {0, 0, 1, 0, 1.0, 1.0, 1.0, 1.0},
    {0, 0, 1, 1, 0.5, 0.25, 0.5, 0.3333333333333333},
    {0, 0, 1, 2, 0.3333333333333333, 0.1111111111111111, 0.3333333333333333, 0.16666666666666666},
    {0, 0, 2, 0, 1.0, 1.0, 1.0, 1.0},
    {0, 0, 2, 1, 0.6666666666666666, 0.4444444444444444, 0.6666666666666666, 0.5333333333333333},
    {0, 0, 2, 2, 0.5, 0.25, 0.5, 0.3333333333333333},
    {0, 1, 0, 0, 0.0, 0.0, 0.0, 0.0},
    {0, 1, 0, 1, 0.0, 0.0, 0.0, 0.0},
    {0, 1, 0, 2, 0.0, 0.0, 0.0, 0.0},
    {0, 1, 1, 0, 0.5, 1.0, 0.5, 0.6666666666666666},
    {0, 1, 1, 1, 0.3333333333333333, 0.3333333333333333, 0.3333333333333333, 0.3333333333333333},
    {0, 1, 1, 2, 0.25, 0.16666666666666666, 0.25, 0.2},
    {0, 1, 2, 0, 0.6666666666666666, 1.0, 0.6666666666666666, 0.8},
    {0, 1, 2, 1, 0.5, 0.5, 0.5, 0.5},
    {0, 1, 2, 2, 0.4, 0.3, 0.4, 0.34285714285714286},
    {0, 2, 0, 0, 0.0, 0.0, 0.0, 0.0},
    {0, 2, 0, 1, 0.0, 0.0, 0.0, 0.0},
    {0, 2, 0, 2, 0.0, 0.0, 0.0, 0.0},
    {0, 2, 1, 0, 0.3333333333333333, 1.0, 0.3333333333333333, 0.5},
    {0, 2, 1, 1, 0.25, 0.375, 0.25, 0.3},
    {0, 2, 1, 2, 0.2, 0.2, 0.2, 0.2},
    {0, 2, 2, 0, 0.5, 1.0, 0.5, 0.6666666666666666},
    {0, 2, 2, 1, 0.4, 0.5333333333333333, 0.4, 0.45714285714285713},
    {0, 2, 2, 2, 0.3333333333333333, 0.3333333333333333, 0.3333333333333333, 0.3333333333333333},
    {1, 0, 0, 0, 1.0, 1.0, 1.0, 1.0},
    {1, 0, 0, 1, 0.5, 1.0, 0.5, 0.6666666666666666},
    {1, 0, 0, 2, 0.3333333333333333, 1.0, 0.3333333333333333, 0.5},
    {1, 0, 1, 0, 1.0, 1.0, 1.0, 1.0},
    {1, 0, 1, 1, 0.6666666666666666, 0.8333333333333334, 0.6666666666666666, 0.6666666666666666},
    {1, 0, 1, 2, 0.5, 0.8333333333333334, 0.5, 0.5},
    {1, 0, 2, 0, 1.0, 1.0, 1.0, 1.0},
    {1, 0, 2, 1, 0.75, 0.8333333333333334, 0.75, 0.7333333333333333},
    {1, 0, 2, 2, 0.6, 0.8, 0.6, 0.5666666666666667},
    {1, 1, 0, 0, 0.5, 0.25, 0.5, 0.3333333333333333},
    {1, 1, 0, 1, 0.3333333333333333, 0.3333333333333333, 0.3333333333333333, 0.3333333333333333},
    {1, 1, 0, 2, 0.25, 0.375, 0.25, 0.3},
    {1, 1, 1, 0, 0.6666666666666666, 0.8333333333333334, 0.6666666666666666, 0.6666666666666666},
    {1, 1, 1, 1, 0.5, 0.5, 0.5, 0.5},
    {2, 1, 6, 1, 0.8, 0.8, 0.8, 0.8},
    {0, 0, 9, 1, 0.9, 0.81, 0.9, 0.8526315789473684},
    {90, 5, 880, 25, 0.97, 0.969499854608898, 0.97, 0.9687390263367917},
    {1000, 0, 0, 0, 1.0, 1.0, 1.0, 1.0},
    {0, 1000, 0, 0, 0.0, 0.0, 0.0, 0.0},
    {7, 3, 0, 0, 0.7, 0.49, 0.7, 0.5764705882352941},
    {0, 0, 5, 5, 0.5, 0.25, 0.5, 0.3333333333333333},
    {123, 45, 678, 9, 0.9368421052631579, 0.9475687034179335, 0.9368421052631579, 0.9398253079507278},
    {1, 2, 3, 4, 0.4, 0.38095238095238093, 0.4, 0.375},
    {50, 50, 50, 50, 0.5, 0.5, 0.5, 0.5},
};

}  // namespace flowstack::test
