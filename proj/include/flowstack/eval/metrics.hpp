#pragma once

#include <cstddef>
#include <span>

namespace flowstack::eval {

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Scores for class `cls` (0 or 1); a zero denominator yields 0.
ClassScores class_scores(const ConfusionMatrix& cm, int cls);

// Accuracy plus support-weighted precision/recall/F1 over both classes.
struct Scores {
    double ca = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

Scores metrics_from_confusion(const ConfusionMatrix& cm);

}  // namespace flowstack::eval
