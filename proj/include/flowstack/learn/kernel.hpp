#pragma once

#include "flowstack/matrix.hpp"

#include <span>
#include <string>

namespace flowstack::learn {

struct KernelSpec {
    enum class Kind { linear, rbf };
    Kind kind = Kind::rbf;
    // RBF width; a non-positive value asks svm_fit to derive it from the data.
    double gamma = 0.0;

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

std::string to_string(KernelSpec::Kind kind);
KernelSpec::Kind kernel_kind_from_string(const std::string& name);

double kernel_value(const KernelSpec& spec, std::span<const double> a, std::span<const double> b);

// K(x_t, x_j) for every row t, parallel over t.
void kernel_column(const KernelSpec& spec, const Matrix& points, std::size_t j, std::span<double> out);
void kernel_column_serial(const KernelSpec& spec, const Matrix& points, std::size_t j, std::span<double> out);

// 1 / (d * mean per-column variance); 1 when the data has no spread.
double default_gamma(const Matrix& points);

}  // namespace flowstack::learn
