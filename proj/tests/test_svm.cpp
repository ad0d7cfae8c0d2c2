#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flowstack/error.hpp"
#include "flowstack/eval/roc.hpp"
#include "flowstack/learn/kernel.hpp"
#include "flowstack/learn/svm.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace flowstack;
using namespace flowstack::learn;

namespace {

std::vector<double> v(std::initializer_list<double> xs) { return xs; }

SmoConfig linear_config(double C) {
    SmoConfig cfg;
    cfg.kernel = {KernelSpec::Kind::linear, 0.0};
    cfg.C = C;
    return cfg;
}

struct KktReport {
    double worst_residual = 0.0;
    double coefficient_sum = 0.0;
    bool box_ok = true;
};

// KKT residuals recomputed from the stored model and the training data.
KktReport kkt(const SvmModel& model, const Matrix& x, std::span<const int> labels) {
    std::vector<double> alpha(x.rows(), 0.0);
    KktReport r;
    for (std::size_t s = 0; s < model.support_indices.size(); ++s) {
        alpha[model.support_indices[s]] = std::abs(model.dual_coefficients[s]);
        r.coefficient_sum += model.dual_coefficients[s];
        if (std::abs(model.dual_coefficients[s]) > model.C) r.box_ok = false;
        if (model.dual_coefficients[s] == 0.0) r.box_ok = false;
    }
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double y = labels[i] == 1 ? 1.0 : -1.0;
        const double margin = y * svm_decision(model, x.row(i));
        double residual = 0.0;
        if (alpha[i] <= 0.0) residual = std::max(0.0, 1.0 - margin);
        else if (alpha[i] >= model.C) residual = std::max(0.0, margin - 1.0);
        else residual = std::abs(margin - 1.0);
        r.worst_residual = std::max(r.worst_residual, residual);
    }
    return r;
}

std::pair<Matrix, std::vector<int>> random_problem(std::uint64_t seed, bool separable) {
    Rng rng(seed);
    const std::size_t n = 200;
    Matrix x(n, 2);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<int>(i % 2);
        const double shift = separable ? 3.0 : 0.7;
        x(i, 0) = rng.normal() * (separable ? 0.5 : 1.0) + (y[i] ? shift : -shift);
        x(i, 1) = rng.normal();
    }
    return {x, y};
}

}  // namespace

TEST_CASE("one-dimensional maximal margin") {
    Matrix x(2, 1, {-1, 1});
    const std::vector<int> y{0, 1};
    auto m = svm_fit(x, y, linear_config(1000));
    CHECK(m.converged);
    CHECK(std::abs(svm_decision(m, v({0.0}))) <= 1e-6);
    CHECK(svm_decision(m, v({1.0})) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(svm_decision(m, v({-1.0})) == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(svm_decision(m, v({2.5})) == doctest::Approx(2.5).epsilon(1e-3));
    CHECK(m.support_indices.size() == 2);
    CHECK(std::abs(m.bias) <= 1e-6);
}

TEST_CASE("two-dimensional midpoint hyperplane") {
    Matrix x(2, 2, {0, 0, 2, 2});
    const std::vector<int> y{0, 1};
    auto m = svm_fit(x, y, linear_config(1e4));
    CHECK(std::abs(svm_decision(m, v({1.0, 1.0}))) <= 1e-6);
    CHECK(std::abs(svm_decision(m, v({2.0, 0.0}))) <= 1e-6);
    CHECK(svm_decision(m, v({2.0, 2.0})) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(svm_decision(m, v({0.0, 0.0})) == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("degenerate labels") {
    Matrix x(3, 1, {0, 1, 2});
    const std::vector<int> y{1, 1, 1};
    try {
        svm_fit(x, y, SmoConfig{});
        FAIL("expected an error");
    } catch (const TrainingError& e) {
        CHECK(std::string(e.what()) == "degenerate labels");
    }
}

TEST_CASE("rbf kernel identity") {
    KernelSpec rbf{KernelSpec::Kind::rbf, 0.7};
    const auto x = v({0.3, -2.0, 5.0});
    CHECK(kernel_value(rbf, x, x) == 1.0);
    CHECK(kernel_value(rbf, v({0.0}), v({1.0})) == doctest::Approx(std::exp(-0.7)).epsilon(1e-15));

    SvmModel m;
    m.support_vectors = Matrix(1, 3, {0.3, -2.0, 5.0});
    m.dual_coefficients = {0.25};
    m.bias = -0.1;
    m.kernel = rbf;
    CHECK(svm_decision(m, x) == doctest::Approx(0.15).epsilon(1e-15));
}

TEST_CASE("default gamma is the inverse total variance") {
    Matrix x(4, 2, {0, 0, 2, 0, 0, 4, 2, 4});
    CHECK(default_gamma(x) == doctest::Approx(1.0 / (1.0 + 4.0)).epsilon(1e-15));
    CHECK(default_gamma(Matrix(3, 1, 2.0)) == 1.0);
}

TEST_CASE("kernel column parallel equals serial") {
    const auto pts = test::random_matrix(5000, 6, 9);
    for (auto kind : {KernelSpec::Kind::linear, KernelSpec::Kind::rbf}) {
        KernelSpec spec{kind, 0.4};
        std::vector<double> a(pts.rows()), b(pts.rows());
        kernel_column(spec, pts, 17, a);
        kernel_column_serial(spec, pts, 17, b);
        CHECK(a == b);
    }
}

TEST_CASE("dual feasibility and KKT residuals on random problems") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        for (bool separable : {true, false}) {
            auto [x, y] = random_problem(seed, separable);
            for (auto kind : {KernelSpec::Kind::linear, KernelSpec::Kind::rbf}) {
                SmoConfig cfg;
                cfg.kernel.kind = kind;
                cfg.C = separable ? 10.0 : 1.0;
                auto m = svm_fit(x, y, cfg);
                CHECK(m.converged);
                auto r = kkt(m, x, y);
                CHECK(r.box_ok);
                CHECK(std::abs(r.coefficient_sum) <= 1e-6);
                CHECK(r.worst_residual <= cfg.tolerance + 1e-9);
            }
        }
    }
}

TEST_CASE("swapping labels negates decision values") {
    for (std::uint64_t seed = 10; seed < 14; ++seed) {
        auto [x, y] = random_problem(seed, false);
        std::vector<int> flipped(y.size());
        std::transform(y.begin(), y.end(), flipped.begin(), [](int l) { return 1 - l; });
        SmoConfig cfg;
        auto a = svm_fit(x, y, cfg);
        auto b = svm_fit(x, flipped, cfg);
        const auto queries = test::random_matrix(100, 2, seed, 4.0);
        for (std::size_t q = 0; q < queries.rows(); ++q) {
            CHECK(std::abs(svm_decision(a, queries.row(q)) + svm_decision(b, queries.row(q))) <= 1e-6);
        }
    }
}

TEST_CASE("zero-coefficient vectors do not change decisions") {
    auto [x, y] = random_problem(21, false);
    auto m = svm_fit(x, y, SmoConfig{});
    auto padded = m;
    Matrix sv(m.support_vectors.rows() + 1, 2);
    std::copy(m.support_vectors.data().begin(), m.support_vectors.data().end(), sv.data().begin());
    sv(sv.rows() - 1, 0) = 0.123;
    sv(sv.rows() - 1, 1) = -4.5;
    padded.support_vectors = sv;
    padded.dual_coefficients.push_back(0.0);
    padded.support_indices.push_back(9999);
    for (std::size_t i = 0; i < x.rows(); ++i) CHECK(svm_decision(padded, x.row(i)) == svm_decision(m, x.row(i)));

    for (double c : m.dual_coefficients) CHECK(c != 0.0);
}

TEST_CASE("batch decisions equal single decisions") {
    auto [x, y] = random_problem(22, false);
    auto m = svm_fit(x, y, SmoConfig{});
    auto batch = svm_decision_batch(m, x);
    auto pred = svm_predict_batch(m, x);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        CHECK(batch[i] == svm_decision(m, x.row(i)));
        CHECK(pred.p1[i] == svm_predict_proba(m, x.row(i)).p1);
        CHECK(pred.label[i] == (batch[i] > 0 ? 1 : 0));
    }
    CHECK_THROWS_AS(svm_decision(m, v({1.0})), std::invalid_argument);
}

TEST_CASE("platt sigmoid midpoint and monotonicity") {
    CHECK(platt_probability({-2.0, 0.0}, 0.0) == 0.5);
    auto [x, y] = random_problem(23, false);
    auto m = svm_fit(x, y, SmoConfig{});
    CHECK(m.calibrated);
    CHECK(m.platt_a < 0.0);
    const auto queries = test::random_matrix(200, 2, 24, 6.0);
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t q = 0; q < queries.rows(); ++q) {
        const auto p = svm_predict_proba(m, queries.row(q));
        CHECK(p.p0 + p.p1 == doctest::Approx(1.0).epsilon(1e-15));
        pairs.emplace_back(svm_decision(m, queries.row(q)), p.p1);
    }
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 1; i < pairs.size(); ++i) CHECK(pairs[i - 1].second <= pairs[i].second);
}

TEST_CASE("calibration on a separable set is confident beyond the margin") {
    auto [x, y] = random_problem(25, true);
    auto m = svm_fit(x, y, linear_config(10.0));
    std::size_t checked = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double yi = y[i] == 1 ? 1.0 : -1.0;
        const double f = svm_decision(m, x.row(i));
        if (yi * f < 1.0) continue;
        ++checked;
        const auto p = svm_predict_proba(m, x.row(i));
        CHECK((y[i] == 1 ? p.p1 : p.p0) > 0.9);
    }
    CHECK(checked > 100);
}

TEST_CASE("auc from probabilities equals auc from decisions") {
    auto [x, y] = random_problem(26, false);
    auto m = svm_fit(x, y, SmoConfig{});
    auto [tx, ty] = random_problem(27, false);
    auto f = svm_decision_batch(m, tx);
    auto p = svm_predict_batch(m, tx).p1;
    CHECK(eval::auc(ty, f) == eval::auc(ty, p));
}

TEST_CASE("unfitted calibration is an error") {
    SvmModel m;
    m.support_vectors = Matrix(1, 1, {0.0});
    m.dual_coefficients = {1.0};
    CHECK_THROWS_AS(svm_predict_proba(m, v({0.0})), std::logic_error);
}

TEST_CASE("iteration cap flags non-convergence but returns a model") {
    auto [x, y] = random_problem(28, false);
    SmoConfig cfg;
    cfg.C = 1000.0;
    cfg.tolerance = 1e-12;
    cfg.max_passes = 1;
    auto m = svm_fit(x, y, cfg);
    CHECK_FALSE(m.converged);
    CHECK(m.iterations == 100 * x.rows());
    CHECK(m.calibrated);
    CHECK(std::isfinite(svm_decision(m, x.row(0))));
}

TEST_CASE("svm json round trip") {
    auto [x, y] = random_problem(29, false);
    auto m = svm_fit(x, y, SmoConfig{});
    auto back = svm_from_json(nlohmann::ordered_json::parse(svm_to_json(m).dump()));
    CHECK(back.support_vectors == m.support_vectors);
    CHECK(back.dual_coefficients == m.dual_coefficients);
    CHECK(back.kernel == m.kernel);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        CHECK(std::abs(svm_decision(back, x.row(i)) - svm_decision(m, x.row(i))) <= 1e-12);
        CHECK(svm_predict_proba(back, x.row(i)).p1 == svm_predict_proba(m, x.row(i)).p1);
    }
}
