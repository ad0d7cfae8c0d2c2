#pragma once

#include "flowstack/matrix.hpp"

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace flowstack::data {

inline constexpr const char* kLabelColumn = "Label";
inline constexpr const char* kBenignLabel = "BENIGN";
inline constexpr const char* kDefaultAttackLabel = "DrDoS_NTP";

// In-memory flow CSV: numeric feature matrix plus the raw label column.
struct FlowTable {
    std::vector<std::string> column_names;
    Matrix features;
    std::vector<std::string> raw_labels;
    // Columns present in the file but excluded from `features`.
    std::vector<std::string> dropped_columns;

    std::size_t rows() const noexcept { return features.rows(); }
    std::size_t cols() const noexcept { return features.cols(); }

    FlowTable select_rows(std::span<const std::size_t> indices) const;

    // Throws std::logic_error when the shape invariants are broken.
    void check_invariants() const;

    friend bool operator==(const FlowTable&, const FlowTable&) = default;
};

// Binary target derived from raw labels.
struct LabelVector {
    std::vector<int> values;
    std::string positive_label;
    std::size_t negative_count = 0;
    std::size_t positive_count = 0;

    std::size_t size() const noexcept { return values.size(); }
    LabelVector select(std::span<const std::size_t> indices) const;

    friend bool operator==(const LabelVector&, const LabelVector&) = default;
};

LabelVector make_label_vector(std::vector<int> values, std::string positive_label = {});

FlowTable load_flow_csv(const std::filesystem::path& path);

// Writes the table in the same CSV dialect `load_flow_csv` reads.
void write_flow_csv(std::ostream& out, const FlowTable& table);
void write_flow_csv(const std::filesystem::path& path, const FlowTable& table);

// Drops constant columns and imputes nonfinite cells with the column's finite median.
FlowTable clean(const FlowTable& table);

LabelVector encode_labels(const FlowTable& table, const std::string& positive_label);

std::size_t count_nonfinite(const Matrix& m) noexcept;

}  // namespace flowstack::data
