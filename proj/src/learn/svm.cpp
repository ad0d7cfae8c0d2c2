#include "flowstack/learn/svm.hpp"

#include "flowstack/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <stdexcept>

namespace flowstack::learn {

namespace {

constexpr int kModelVersion = 1;
constexpr double kMinCurvature = 1e-12;

// LRU cache of kernel matrix columns, bounded by a byte budget.
class KernelCache {
  public:
    KernelCache(const KernelSpec& spec, const Matrix& points, std::size_t budget_bytes)
      : spec_(spec), points_(points), columns_(points.rows()), where_(points.rows()), cached_(points.rows(), 0) {
        const std::size_t column_bytes = std::max<std::size_t>(1, points.rows() * sizeof(double));
        capacity_ = std::max<std::size_t>(2, budget_bytes / column_bytes);
    }

    std::span<const double> column(std::size_t j) {
        if (cached_[j]) {
            lru_.splice(lru_.begin(), lru_, where_[j]);
            return columns_[j];
        }
        if (lru_.size() >= capacity_) {
            const std::size_t victim = lru_.back();
            lru_.pop_back();
            cached_[victim] = 0;
            columns_[j] = std::move(columns_[victim]);
            std::vector<double>().swap(columns_[victim]);
        }
        columns_[j].resize(points_.rows());
        kernel_column(spec_, points_, j, columns_[j]);
        lru_.push_front(j);
        where_[j] = lru_.begin();
        cached_[j] = 1;
        return columns_[j];
    }

  private:
    KernelSpec spec_;
    const Matrix& points_;
    std::vector<std::vector<double>> columns_;
    std::vector<std::list<std::size_t>::iterator> where_;
    std::vector<char> cached_;
    std::list<std::size_t> lru_;
    std::size_t capacity_ = 2;
};

struct DualSolution {
    std::vector<double> alpha;
    std::vector<double> gradient;  // Q alpha - 1
    double rho = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
};

// SMO over the dual with maximal-violating-pair selection. The pair update is
// written without reference to which member was selected first, and ties are
// broken by lowest index, so flipping every label yields the same alphas.
DualSolution solve_dual(const Matrix& points, std::span<const double> y, const SmoConfig& cfg,
                        const KernelSpec& kernel) {
    const std::size_t n = points.rows();
    const double C = cfg.C;
    DualSolution sol;
    sol.alpha.assign(n, 0.0);
    sol.gradient.assign(n, -1.0);
    std::vector<double> diag(n);
    for (std::size_t t = 0; t < n; ++t) diag[t] = kernel_value(kernel, points.row(t), points.row(t));

    KernelCache cache(kernel, points, cfg.cache_bytes);
    auto& alpha = sol.alpha;
    auto& G = sol.gradient;
    const std::size_t cap = cfg.max_passes * 100 * std::max<std::size_t>(n, 1);

    while (sol.iterations < cap) {
        double m_up = -std::numeric_limits<double>::infinity();
        double m_low = std::numeric_limits<double>::infinity();
        std::size_t i = n;
        std::size_t j = n;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -y[t] * G[t];
            const bool up = y[t] > 0 ? alpha[t] < C : alpha[t] > 0.0;
            const bool low = y[t] > 0 ? alpha[t] > 0.0 : alpha[t] < C;
            if (up && v > m_up) {
                m_up = v;
                i = t;
            }
            if (low && v < m_low) {
                m_low = v;
                j = t;
            }
        }
        if (i == n || j == n || m_up - m_low <= cfg.tolerance) {
            sol.converged = true;
            break;
        }
        ++sol.iterations;

        const std::size_t a = std::min(i, j);
        const std::size_t b = std::max(i, j);
        const auto Ka = cache.column(a);
        const auto Kb = cache.column(b);
        const double old_a = alpha[a];
        const double old_b = alpha[b];
        double quad = diag[a] + diag[b] - 2.0 * Ka[b];
        if (quad <= 0.0) quad = kMinCurvature;

        if (y[a] != y[b]) {
            const double delta = (-G[a] - G[b]) / quad;
            const double diff = alpha[a] - alpha[b];
            alpha[a] += delta;
            alpha[b] += delta;
            if (diff > 0.0) {
                if (alpha[b] < 0.0) {
                    alpha[b] = 0.0;
                    alpha[a] = diff;
                }
            } else if (alpha[a] < 0.0) {
                alpha[a] = 0.0;
                alpha[b] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[a] > C) {
                    alpha[a] = C;
                    alpha[b] = C - diff;
                }
            } else if (alpha[b] > C) {
                alpha[b] = C;
                alpha[a] = C + diff;
            }
        } else {
            const double delta = (G[a] - G[b]) / quad;
            const double sum = alpha[a] + alpha[b];
            alpha[a] -= delta;
            alpha[b] += delta;
            if (sum > C) {
                if (alpha[a] > C) {
                    alpha[a] = C;
                    alpha[b] = sum - C;
                }
                if (alpha[b] > C) {
                    alpha[b] = C;
                    alpha[a] = sum - C;
                }
            } else {
                if (alpha[b] < 0.0) {
                    alpha[b] = 0.0;
                    alpha[a] = sum;
                }
                if (alpha[a] < 0.0) {
                    alpha[a] = 0.0;
                    alpha[b] = sum;
                }
            }
        }

        const double da = (alpha[a] - old_a) * y[a];
        const double db = (alpha[b] - old_b) * y[b];
        const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (count > 8192)
        for (std::ptrdiff_t s = 0; s < count; ++s) {
            const auto t = static_cast<std::size_t>(s);
            G[t] += y[t] * (Ka[t] * da + Kb[t] * db);
        }
    }

    // rho: mean of y*G over free vectors, else the midpoint of the feasible interval.
    double upper = std::numeric_limits<double>::infinity();
    double lower = -upper;
    double free_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yG = y[t] * G[t];
        if (alpha[t] >= C) {
            if (y[t] < 0) upper = std::min(upper, yG);
            else lower = std::max(lower, yG);
        } else if (alpha[t] <= 0.0) {
            if (y[t] > 0) upper = std::min(upper, yG);
            else lower = std::max(lower, yG);
        } else {
            ++free_count;
            free_sum += yG;
        }
    }
    sol.rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (upper + lower) / 2.0;
    return sol;
}

double stable_log1p_exp(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

SvmModel svm_fit(const Matrix& features, std::span<const int> labels, const SmoConfig& cfg) {
    if (!(cfg.tolerance > 0.0)) throw TrainingError("SMO tolerance must be positive");
    if (!(cfg.C > 0.0)) throw TrainingError("C must be positive");
    if (cfg.max_passes == 0) throw TrainingError("max_passes must be positive");
    if (labels.size() != features.rows()) throw TrainingError("label count does not match training rows");
    const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
    const bool has_neg = std::find(labels.begin(), labels.end(), 0) != labels.end();
    if (!has_pos || !has_neg) throw TrainingError("degenerate labels");

    KernelSpec kernel = cfg.kernel;
    if (kernel.kind == KernelSpec::Kind::rbf && !(kernel.gamma > 0.0)) kernel.gamma = default_gamma(features);

    std::vector<double> y(labels.size());
    std::transform(labels.begin(), labels.end(), y.begin(), [](int l) { return l == 1 ? 1.0 : -1.0; });
    const auto sol = solve_dual(features, y, cfg, kernel);

    SvmModel model;
    model.kernel = kernel;
    model.C = cfg.C;
    model.bias = -sol.rho;
    model.converged = sol.converged;
    model.iterations = sol.iterations;
    for (std::size_t t = 0; t < sol.alpha.size(); ++t) {
        if (sol.alpha[t] > 0.0) {
            model.support_indices.push_back(t);
            model.dual_coefficients.push_back(sol.alpha[t] * y[t]);
        }
    }
    model.support_vectors = features.select_rows(model.support_indices);

    // Training decision values fall out of the gradient: y f(x) - 1 = G + y b.
    std::vector<double> decision(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) decision[t] = y[t] * (sol.gradient[t] + 1.0) + model.bias;
    const auto platt = fit_platt(decision, labels);
    model.platt_a = platt.a;
    model.platt_b = platt.b;
    model.calibrated = true;
    return model;
}

SvmModel svm_fit(const Matrix& features, const data::LabelVector& labels, const SmoConfig& cfg) {
    return svm_fit(features, std::span<const int>(labels.values), cfg);
}

double svm_decision(const SvmModel& model, std::span<const double> x) {
    if (x.size() != model.support_vectors.cols()) throw std::invalid_argument("dimension mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < model.dual_coefficients.size(); ++i) {
        sum += model.dual_coefficients[i] * kernel_value(model.kernel, model.support_vectors.row(i), x);
    }
    return sum + model.bias;
}

std::vector<double> svm_decision_batch(const SvmModel& model, const Matrix& rows) {
    if (rows.cols() != model.support_vectors.cols()) throw std::invalid_argument("dimension mismatch");
    std::vector<double> out(rows.rows());
    const auto n = static_cast<std::ptrdiff_t>(rows.rows());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = svm_decision(model, rows.row(static_cast<std::size_t>(i)));
    }
    return out;
}

double platt_probability(const PlattParams& params, double f) {
    const double z = params.a * f + params.b;
    // 1 / (1 + e^z) without overflow on either side.
    return z >= 0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
}

ClassProba svm_predict_proba(const SvmModel& model, std::span<const double> x) {
    if (!model.calibrated) throw std::logic_error("SVM probability calibration has not been fitted");
    const double p1 = platt_probability({model.platt_a, model.platt_b}, svm_decision(model, x));
    return {1.0 - p1, p1};
}

BatchPrediction svm_predict_batch(const SvmModel& model, const Matrix& rows) {
    if (!model.calibrated) throw std::logic_error("SVM probability calibration has not been fitted");
    const auto decision = svm_decision_batch(model, rows);
    BatchPrediction out{std::vector<double>(decision.size()), std::vector<int>(decision.size())};
    for (std::size_t i = 0; i < decision.size(); ++i) {
        out.p1[i] = platt_probability({model.platt_a, model.platt_b}, decision[i]);
        out.label[i] = decision[i] > 0.0 ? 1 : 0;
    }
    return out;
}

PlattParams fit_platt(std::span<const double> f, std::span<const int> labels, std::size_t max_iterations) {
    if (f.size() != labels.size()) throw std::invalid_argument("decision values and labels differ in length");
    const double positives = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
    const double negatives = static_cast<double>(labels.size()) - positives;
    const double hi_target = (positives + 1.0) / (positives + 2.0);
    const double lo_target = 1.0 / (negatives + 2.0);
    constexpr double kMinStep = 1e-10;
    constexpr double kSigma = 1e-12;
    constexpr double kEps = 1e-5;

    std::vector<double> target(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) target[i] = labels[i] == 1 ? hi_target : lo_target;

    // Negative log-likelihood of targets t under p = 1/(1+exp(A f + B)).
    auto objective = [&](double A, double B) {
        double value = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double z = A * f[i] + B;
            value += target[i] * z + stable_log1p_exp(-z);
        }
        return value;
    };

    double A = 0.0;
    double B = std::log((negatives + 1.0) / (positives + 1.0));
    double fval = objective(A, B);
    for (std::size_t it = 0; it < max_iterations; ++it) {
        double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double z = A * f[i] + B;
            double p = 0.0, q = 0.0;
            if (z >= 0) {
                p = std::exp(-z) / (1.0 + std::exp(-z));
                q = 1.0 / (1.0 + std::exp(-z));
            } else {
                p = 1.0 / (1.0 + std::exp(z));
                q = std::exp(z) / (1.0 + std::exp(z));
            }
            const double d2 = p * q;
            h11 += f[i] * f[i] * d2;
            h22 += d2;
            h21 += f[i] * d2;
            const double d1 = target[i] - p;
            g1 += f[i] * d1;
            g2 += d1;
        }
        if (std::abs(g1) < kEps && std::abs(g2) < kEps) break;

        const double det = h11 * h22 - h21 * h21;
        const double dA = -(h22 * g1 - h21 * g2) / det;
        const double dB = -(-h21 * g1 + h11 * g2) / det;
        const double gd = g1 * dA + g2 * dB;
        double step = 1.0;
        while (step >= kMinStep) {
            const double nA = A + step * dA;
            const double nB = B + step * dB;
            const double nf = objective(nA, nB);
            if (nf < fval + 1e-4 * step * gd) {
                A = nA;
                B = nB;
                fval = nf;
                break;
            }
            step /= 2.0;
        }
        if (step < kMinStep) break;
    }
    return {A, B};
}

nlohmann::ordered_json svm_to_json(const SvmModel& model) {
    nlohmann::ordered_json doc;
    doc["type"] = "svm";
    doc["version"] = kModelVersion;
    doc["kernel"] = {{"kind", to_string(model.kernel.kind)}, {"gamma", model.kernel.gamma}};
    doc["C"] = model.C;
    doc["bias"] = model.bias;
    doc["platt"] = {{"a", model.platt_a}, {"b", model.platt_b}, {"calibrated", model.calibrated}};
    doc["converged"] = model.converged;
    doc["iterations"] = model.iterations;
    doc["rows"] = model.support_vectors.rows();
    doc["cols"] = model.support_vectors.cols();
    doc["support_indices"] = model.support_indices;
    doc["dual_coefficients"] = model.dual_coefficients;
    doc["support_vectors"] = model.support_vectors.data();
    return doc;
}

SvmModel svm_from_json(const nlohmann::ordered_json& doc) {
    if (doc.at("type") != "svm" || doc.at("version") != kModelVersion) {
        throw std::invalid_argument("not a version-1 SVM document");
    }
    SvmModel model;
    model.kernel.kind = kernel_kind_from_string(doc.at("kernel").at("kind").get<std::string>());
    model.kernel.gamma = doc.at("kernel").at("gamma").get<double>();
    model.C = doc.at("C").get<double>();
    model.bias = doc.at("bias").get<double>();
    model.platt_a = doc.at("platt").at("a").get<double>();
    model.platt_b = doc.at("platt").at("b").get<double>();
    model.calibrated = doc.at("platt").at("calibrated").get<bool>();
    model.converged = doc.at("converged").get<bool>();
    model.iterations = doc.at("iterations").get<std::size_t>();
    model.support_indices = doc.at("support_indices").get<std::vector<std::size_t>>();
    model.dual_coefficients = doc.at("dual_coefficients").get<std::vector<double>>();
    model.support_vectors = Matrix(doc.at("rows").get<std::size_t>(), doc.at("cols").get<std::size_t>(),
                                   doc.at("support_vectors").get<std::vector<double>>());
    return model;
}

}  // namespace flowstack::learn
