#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flowstack/ensemble/stacking.hpp"
#include "flowstack/error.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>

using namespace flowstack;
using namespace flowstack::ensemble;

namespace {

std::pair<Matrix, std::vector<int>> overlapping(std::size_t n, std::uint64_t seed) {
    return test::blobs(n, 3, 1.5, seed);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

TEST_CASE("stratified folds are balanced") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const std::size_t n = 20 + rng.below(200);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = i < 10 ? static_cast<int>(i % 2) : static_cast<int>(rng.below(2));
        const std::size_t folds = 2 + rng.below(4);
        auto a = stratified_folds(y, folds, seed);
        CHECK(a == stratified_folds(y, folds, seed));
        std::vector<std::size_t> size(folds), pos(folds);
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(a[i] < folds);
            ++size[a[i]];
            pos[a[i]] += y[i];
        }
        CHECK(*std::max_element(size.begin(), size.end()) - *std::min_element(size.begin(), size.end()) <= 1);
        CHECK(*std::max_element(pos.begin(), pos.end()) - *std::min_element(pos.begin(), pos.end()) <= 1);
    }
}

TEST_CASE("class too small for folds") {
    const std::vector<int> y{0, 0, 0, 0, 0, 0, 1, 1};
    try {
        stratified_folds(y, 5, 1);
        FAIL("expected an error");
    } catch (const TrainingError& e) {
        CHECK(std::string(e.what()) == "class too small for folds");
    }
}

TEST_CASE("constant learner column") {
    auto [x, y] = overlapping(40, 1);
    auto meta = build_meta_features(x, y, {ConstantParams{0.7}, KnnParams{3}}, 5, 9);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        CHECK(meta.values(i, 0) == 0.7);
        CHECK(meta.values(i, 1) >= 0.0);
        CHECK(meta.values(i, 1) <= 1.0);
    }
}

TEST_CASE("meta-feature cells lie in the unit interval") {
    auto [x, y] = overlapping(120, 2);
    auto meta = build_meta_features(x, y, {KnnParams{5}, SvmParams{}}, 5, 3);
    for (double c : meta.values.data()) {
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
    }
    CHECK(meta.fold_assignment == stratified_folds(y, 5, 3));
}

TEST_CASE("changing one row leaves its own fold's meta rows unchanged") {
    auto [x, y] = overlapping(60, 4);
    const std::vector<LearnerSpec> specs{KnnParams{5}, SvmParams{}};
    const auto folds = stratified_folds(y, 5, 11);
    const auto base = build_meta_features(x, y, specs, folds, 11);

    for (std::size_t row = 0; row < 60; ++row) {
        if (folds[row] != 3) continue;
        auto y2 = y;
        y2[row] = 1 - y2[row];
        auto x2 = x;
        x2(row, 0) += 5.0;
        x2(row, 2) = -3.0;
        // A label flip must leave the whole fold unchanged, the row itself included.
        // Moving the row's features changes its own prediction, so only its fold mates are compared.
        for (const bool moved_features : {false, true}) {
            const auto changed = moved_features ? build_meta_features(x2, y, specs, folds, 11)
                                                : build_meta_features(x, y2, specs, folds, 11);
            bool other_fold_moved = false;
            for (std::size_t i = 0; i < 60; ++i) {
                if (moved_features && i == row) continue;
                for (std::size_t b = 0; b < specs.size(); ++b) {
                    if (folds[i] == 3) CHECK(changed.values(i, b) == base.values(i, b));
                    else if (changed.values(i, b) != base.values(i, b)) other_fold_moved = true;
                }
            }
            CHECK(other_fold_moved);
        }
    }
}

TEST_CASE("leave-one-out matches an explicit loop") {
    Matrix x(6, 2, {0, 0, 1, 0, 0, 1, 3, 3, 4, 3, 3, 4.5});
    const std::vector<int> y{0, 0, 1, 1, 1, 0};
    const std::vector<LearnerSpec> specs{KnnParams{1}, KnnParams{3}};
    std::vector<std::size_t> loo(6);
    for (std::size_t i = 0; i < 6; ++i) loo[i] = i;
    const auto meta = build_meta_features(x, y, specs, loo, 5);

    for (std::size_t held = 0; held < 6; ++held) {
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < 6; ++i) if (i != held) rest.push_back(i);
        std::vector<int> rest_y;
        for (auto i : rest) rest_y.push_back(y[i]);
        const Matrix train = x.select_rows(rest);
        for (std::size_t b = 0; b < specs.size(); ++b) {
            const std::size_t k = std::get<KnnParams>(specs[b]).k;
            // Independent vote over the k nearest remaining rows.
            std::vector<std::pair<double, std::size_t>> d;
            for (std::size_t r = 0; r < rest.size(); ++r) {
                const double dx = train(r, 0) - x(held, 0);
                const double dy = train(r, 1) - x(held, 1);
                d.emplace_back(dx * dx + dy * dy, r);
            }
            std::sort(d.begin(), d.end());
            std::size_t pos = 0;
            for (std::size_t t = 0; t < k; ++t) pos += rest_y[d[t].second];
            CHECK(meta.values(held, b) == doctest::Approx(static_cast<double>(pos) / k).epsilon(1e-15));
        }
    }
}

TEST_CASE("explicit fold assignment validation") {
    auto [x, y] = overlapping(10, 5);
    CHECK_THROWS_AS(build_meta_features(x, y, {KnnParams{1}}, std::vector<std::size_t>(10, 1), 0), TrainingError);
    std::vector<std::size_t> only_class;
    for (std::size_t i = 0; i < 10; ++i) only_class.push_back(static_cast<std::size_t>(y[i]));
    CHECK_THROWS_AS(build_meta_features(x, y, {KnnParams{1}}, only_class, 0), TrainingError);
}

TEST_CASE("sigmoid and the zero model") {
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(sigmoid(800.0) == 1.0);
    CHECK(sigmoid(-800.0) >= 0.0);
    CHECK(sigmoid(40.0) > 0.999);
    CHECK(std::isfinite(sigmoid(-1e308)));

    LogisticModel zero{{0.0, 0.0}, 0.0};
    CHECK(logreg_predict_proba(zero, std::vector<double>{0.3, 0.9}) == learn::ClassProba{0.5, 0.5});

    auto [x, y] = overlapping(30, 6);
    auto untrained = logreg_fit(x, y, LogregOptions{1e-3, 0, 1e-5});
    for (std::size_t i = 0; i < x.rows(); ++i) CHECK(logreg_predict_proba(untrained, x.row(i)).p1 == 0.5);
    CHECK_FALSE(untrained.converged);
    CHECK_THROWS_AS(logreg_predict_proba(zero, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("probability pairs sum to one") {
    Rng rng(7);
    for (int t = 0; t < 1000; ++t) {
        LogisticModel m{{rng.normal() * 10, rng.normal() * 10}, rng.normal() * 5};
        const std::vector<double> row{rng.uniform(), rng.uniform()};
        const auto p = logreg_predict_proba(m, row);
        CHECK(p.p0 + p.p1 == 1.0);
    }
}

TEST_CASE("separable one-dimensional meta-feature") {
    Matrix m(8, 1, {0.1, 0.2, 0.15, 0.3, 0.7, 0.8, 0.9, 0.75});
    const std::vector<int> y{0, 0, 0, 0, 1, 1, 1, 1};
    auto model = logreg_fit(m, y, LogregOptions{});
    CHECK(model.converged);
    for (std::size_t i = 0; i < 8; ++i) CHECK((logreg_predict_proba(model, m.row(i)).p1 > 0.5) == (y[i] == 1));
    CHECK_THROWS_AS(logreg_fit(m, std::vector<int>(8, 1), LogregOptions{}), TrainingError);
}

TEST_CASE("analytic gradient matches finite differences") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const std::size_t n = 10 + rng.below(40);
        const std::size_t d = 1 + rng.below(4);
        auto m = test::random_matrix(n, d, seed + 1000);
        std::vector<int> y(n);
        for (auto& e : y) e = static_cast<int>(rng.below(2));
        std::vector<double> params(d + 1);
        for (auto& p : params) p = rng.normal();
        const double lambda = rng.uniform() * 0.1;

        const auto loss = [&](const std::vector<double>& p) {
            return logreg_loss(m, y, std::span(p).first(d), p[d], lambda);
        };
        const auto numeric = test::central_difference(loss, params, 1e-5);
        std::vector<double> grad(d);
        const double gb = logreg_gradient(m, y, std::span(params).first(d), params[d], lambda, grad);
        grad.push_back(gb);
        for (std::size_t j = 0; j <= d; ++j) {
            const double scale = std::max(std::abs(numeric[j]), 1e-3);
            CHECK(std::abs(grad[j] - numeric[j]) / scale <= 1e-6);
        }
    }
}

TEST_CASE("loss is non-increasing across iterations") {
    auto [x, y] = overlapping(200, 8);
    std::vector<double> trace;
    auto model = logreg_fit(x, y, LogregOptions{1e-3, 10000, 1e-5}, &trace);
    CHECK(model.converged);
    REQUIRE(trace.size() >= 2);
    for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1]);
    for (double w : model.weights) CHECK(std::isfinite(w));
}

TEST_CASE("two identical base specs agree with a single one") {
    auto [x, y] = overlapping(150, 9);
    auto [qx, qy] = overlapping(100, 10);
    StackConfig single;
    single.base_specs = {KnnParams{5}};
    single.meta = LogregOptions{1e-8, 200000, 1e-10};
    single.seed = 3;
    StackConfig doubled = single;
    doubled.base_specs = {KnnParams{5}, KnnParams{5}};
    auto a = stack_fit(x, y, single);
    auto b = stack_fit(x, y, doubled);
    REQUIRE(b.meta.weights.size() == 2);
    CHECK(std::isfinite(b.meta.weights[0]));
    CHECK(b.meta.weights[0] == doctest::Approx(b.meta.weights[1]).epsilon(1e-9));
    CHECK(max_abs_diff(stack_predict_batch(a, qx).p1, stack_predict_batch(b, qx).p1) <= 1e-6);
}

TEST_CASE("a perfect base learner reaches training accuracy one") {
    auto [x, y] = test::blobs(100, 2, 12.0, 11);
    auto model = stack_fit(x, y, {KnnParams{1}}, 5, 1e-3, 4);
    const auto pred = stack_predict_batch(model, x);
    CHECK(pred.label == y);
}

TEST_CASE("stack_fit is deterministic") {
    auto [x, y] = overlapping(120, 12);
    auto a = stack_fit(x, y, StackConfig{.seed = 77});
    auto b = stack_fit(x, y, StackConfig{.seed = 77});
    CHECK(stack_to_json(a).dump() == stack_to_json(b).dump());
}

TEST_CASE("stack prediction is the two-step composition") {
    auto [x, y] = overlapping(120, 13);
    auto [qx, qy] = overlapping(50, 14);
    auto model = stack_fit(x, y, StackConfig{.seed = 1});
    const auto batch = stack_predict_batch(model, qx);
    for (std::size_t i = 0; i < qx.rows(); ++i) {
        const double knn_p = learn::knn_predict_proba(std::get<learn::KnnModel>(model.base_models[0]), qx.row(i)).p1;
        const double svm_p = learn::svm_predict_proba(std::get<learn::SvmModel>(model.base_models[1]), qx.row(i)).p1;
        const double z = model.meta.weights[0] * knn_p + model.meta.weights[1] * svm_p + model.meta.bias;
        const double manual = 1.0 / (1.0 + std::exp(-z));
        CHECK(std::abs(stack_predict_proba(model, qx.row(i)).p1 - manual) <= 1e-12);
        CHECK(batch.p1[i] == stack_predict_proba(model, qx.row(i)).p1);
    }
}

TEST_CASE("confident bases with positive weights give a positive stack") {
    StackModel model;
    model.base_specs = {ConstantParams{1.0}, ConstantParams{1.0}};
    model.base_models = {ConstantModel{1.0}, ConstantModel{1.0}};
    model.meta = LogisticModel{{0.8, 1.3}, -1.0};
    CHECK(stack_predict_proba(model, std::vector<double>{0.0}).p1 > 0.5);
}

TEST_CASE("permuting bases with their weights leaves predictions unchanged") {
    auto [x, y] = overlapping(120, 15);
    auto [qx, qy] = overlapping(60, 16);
    auto model = stack_fit(x, y, StackConfig{.seed = 2});
    auto swapped = model;
    std::swap(swapped.base_models[0], swapped.base_models[1]);
    std::swap(swapped.base_specs[0], swapped.base_specs[1]);
    std::swap(swapped.meta.weights[0], swapped.meta.weights[1]);
    CHECK(max_abs_diff(stack_predict_batch(model, qx).p1, stack_predict_batch(swapped, qx).p1) <= 1e-15);
}

TEST_CASE("stack json round trip") {
    auto [x, y] = overlapping(100, 17);
    auto model = stack_fit(x, y, StackConfig{.seed = 5});
    const auto text = stack_to_json(model).dump();
    auto back = stack_from_json(nlohmann::ordered_json::parse(text));
    CHECK(stack_to_json(back).dump() == text);
    CHECK(stack_predict_batch(back, x).p1 == stack_predict_batch(model, x).p1);
}

TEST_CASE("svm base learner honours the row cap") {
    auto [x, y] = overlapping(300, 18);
    SvmParams capped;
    capped.row_cap = 50;
    auto model = fit_base(capped, x, y, 1);
    const auto& svm = std::get<learn::SvmModel>(model);
    CHECK(svm.support_vectors.rows() <= 50);
    for (auto i : svm.support_indices) CHECK(i < 300);
}
