#include "flowstack/eval/metrics.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace flowstack::eval {

namespace {

using u128 = unsigned __int128;

struct ClassCounts {
    std::size_t correct;    // tp for class 1, tn for class 0
    std::size_t predicted;  // rows predicted as the class
    std::size_t support;    // rows truly in the class
};

ClassCounts counts_for(const ConfusionMatrix& cm, int cls) {
    return cls == 1 ? ClassCounts{cm.tp, cm.tp + cm.fp, cm.tp + cm.fn} : ClassCounts{cm.tn, cm.tn + cm.fn, cm.tn + cm.fp};
}

int bit_length(u128 v) {
    int bits = 0;
    for (; v != 0; v >>= 1) ++bits;
    return bits;
}

// Nonnegative rational; a zero denominator marks an undefined metric, read as 0.
struct Fraction {
    u128 num = 0;
    u128 den = 1;
};

Fraction operator+(Fraction a, Fraction b) {
    if (a.den == 0) a = Fraction{};
    if (b.den == 0) b = Fraction{};
    return {a.num * b.den + b.num * a.den, a.den * b.den};
}

// num / den rounded once, to nearest with ties to even.
double to_double(Fraction f) {
    if (f.den == 0 || f.num == 0) return 0.0;
    u128 q = f.num / f.den;
    u128 r = f.num % f.den;
    int exponent = 0;
    bool sticky = false;
    while (bit_length(q) > 55) {
        sticky |= (q & 1) != 0;
        q >>= 1;
        ++exponent;
    }
    while (bit_length(q) < 55) {
        r <<= 1;
        q <<= 1;
        if (r >= f.den) {
            r -= f.den;
            q |= 1;
        }
        --exponent;
    }
    sticky |= r != 0;
    const auto guard = static_cast<unsigned>(q & 3);
    q >>= 2;
    exponent += 2;
    if (guard > 2 || (guard == 2 && (sticky || (q & 1) != 0))) {
        ++q;
        if (bit_length(q) > 53) {
            q >>= 1;
            ++exponent;
        }
    }
    return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(q)), exponent);
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size()) throw std::invalid_argument("label and prediction lengths differ");
    if (y_true.empty()) throw std::invalid_argument("confusion matrix of an empty set");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const bool truth = y_true[i] == 1;
        const bool pred = y_pred[i] == 1;
        if (truth && pred) ++cm.tp;
        else if (!truth && pred) ++cm.fp;
        else if (!truth && !pred) ++cm.tn;
        else ++cm.fn;
    }
    return cm;
}

ClassScores class_scores(const ConfusionMatrix& cm, int cls) {
    const auto c = counts_for(cm, cls);
    const Fraction precision{c.correct, c.predicted};
    const Fraction recall{c.correct, c.support};
    // 2PR/(P+R) in count form: 2 correct / (predicted + support).
    const Fraction f1{2 * u128{c.correct}, u128{c.predicted} + c.support};
    return {to_double(precision), to_double(recall), to_double(f1)};
}

Scores metrics_from_confusion(const ConfusionMatrix& cm) {
    const std::size_t total = cm.total();
    if (total == 0) throw std::invalid_argument("metrics of an empty confusion matrix");
    // Support-weighted means are summed as exact fractions and rounded once, so
    // algebraic identities survive: weighted recall is (tp + tn) / total.
    Fraction precision, recall, f1;
    for (int cls : {0, 1}) {
        const auto c = counts_for(cm, cls);
        const u128 support = c.support;
        precision = precision + Fraction{support * c.correct, c.predicted};
        recall = recall + Fraction{support * c.correct, support};
        f1 = f1 + Fraction{support * 2 * c.correct, u128{c.predicted} + c.support};
    }
    for (Fraction* f : {&precision, &recall, &f1}) f->den *= total;
    return {to_double(Fraction{cm.tp + cm.tn, total}), to_double(precision), to_double(recall), to_double(f1)};
}

}  // namespace flowstack::eval
