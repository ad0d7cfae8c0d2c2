#include "flowstack/eval/roc.hpp"

#include "flowstack/data/csv.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace flowstack::eval {

RocCurve roc_points(std::span<const int> y_true, std::span<const double> scores) {
    if (y_true.size() != scores.size()) throw std::invalid_argument("label and score lengths differ");
    const auto positives = static_cast<double>(std::count(y_true.begin(), y_true.end(), 1));
    const double negatives = static_cast<double>(y_true.size()) - positives;
    if (positives == 0.0 || negatives == 0.0) throw std::invalid_argument("ROC needs both classes");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.points.push_back(RocPoint{});
    double tp = 0.0, fp = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        const double threshold = scores[order[i]];
        // Tied scores move together: one point per distinct threshold.
        for (; i < order.size() && scores[order[i]] == threshold; ++i) {
            (y_true[order[i]] == 1 ? tp : fp) += 1.0;
        }
        curve.points.push_back(RocPoint{fp / negatives, tp / positives, threshold});
    }
    return curve;
}

double trapezoid_area(const RocCurve& curve) {
    double area = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& a = curve.points[i - 1];
        const auto& b = curve.points[i];
        area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
    }
    return area;
}

double auc(std::span<const int> y_true, std::span<const double> scores) {
    return trapezoid_area(roc_points(y_true, scores));
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
    out << "fpr,tpr,threshold\n";
    for (const auto& p : curve.points) {
        out << data::format_double(p.fpr) << ',' << data::format_double(p.tpr) << ','
            << data::format_double(p.threshold) << '\n';
    }
}

}  // namespace flowstack::eval
