#pragma once

#include <limits>
#include <ostream>
#include <span>
#include <vector>

namespace flowstack::eval {

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    // Rows scoring >= threshold are called positive; +inf for the origin.
    double threshold = std::numeric_limits<double>::infinity();

    friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
    std::vector<RocPoint> points;
};

// One point per distinct score, descending, framed by (0,0) and (1,1).
RocCurve roc_points(std::span<const int> y_true, std::span<const double> scores);

double trapezoid_area(const RocCurve& curve);

// Trapezoidal area under roc_points; ties between classes count one half.
double auc(std::span<const int> y_true, std::span<const double> scores);

// "fpr,tpr,threshold" header then one full-precision row per point.
void write_roc_csv(std::ostream& out, const RocCurve& curve);

}  // namespace flowstack::eval
