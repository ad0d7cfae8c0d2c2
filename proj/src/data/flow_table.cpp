#include "flowstack/data/flow_table.hpp"

#include "flowstack/data/csv.hpp"
#include "flowstack/data/scaler.hpp"
#include "flowstack/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace flowstack::data {

namespace {

// Flow identifiers and endpoints: unique per flow, meaningless as distances.
constexpr std::array<std::string_view, 12> kIdentifierColumns = {
    "flow id",   "source ip",        "src ip",   "destination ip", "dst ip",     "source port",
    "src port",  "destination port", "dst port", "timestamp",      "unnamed: 0", "",
};

constexpr double kNumericColumnThreshold = 0.99;

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_identifier(std::string_view trimmed_name) {
    const std::string lower = lowercase(trimmed_name);
    return std::find(kIdentifierColumns.begin(), kIdentifierColumns.end(), lower) != kIdentifierColumns.end();
}

}  // namespace

FlowTable FlowTable::select_rows(std::span<const std::size_t> indices) const {
    FlowTable out;
    out.column_names = column_names;
    out.dropped_columns = dropped_columns;
    out.features = features.select_rows(indices);
    out.raw_labels.reserve(indices.size());
    for (auto i : indices) out.raw_labels.push_back(raw_labels[i]);
    return out;
}

void FlowTable::check_invariants() const {
    if (features.rows() != raw_labels.size()) throw std::logic_error("feature rows differ from label count");
    if (features.cols() != column_names.size()) throw std::logic_error("feature columns differ from names");
}

LabelVector LabelVector::select(std::span<const std::size_t> indices) const {
    std::vector<int> picked;
    picked.reserve(indices.size());
    for (auto i : indices) picked.push_back(values[i]);
    return make_label_vector(std::move(picked), positive_label);
}

LabelVector make_label_vector(std::vector<int> values, std::string positive_label) {
    LabelVector out;
    out.positive_count = static_cast<std::size_t>(std::count(values.begin(), values.end(), 1));
    out.negative_count = values.size() - out.positive_count;
    out.values = std::move(values);
    out.positive_label = std::move(positive_label);
    return out;
}

FlowTable load_flow_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("missing file: " + path.string());

    CsvReader reader(in);
    auto header = reader.next();
    if (!header) throw DataError("empty file: " + path.string());
    if (!header->empty() && header->front().starts_with("\xEF\xBB\xBF")) header->front().erase(0, 3);

    const std::size_t width = header->size();
    std::vector<std::string> names(width);
    std::size_t label_col = width;
    for (std::size_t c = 0; c < width; ++c) {
        names[c] = std::string(trim((*header)[c]));
        if (names[c] == kLabelColumn && label_col == width) label_col = c;
    }
    if (label_col == width) throw DataError("missing label column");

    std::vector<std::size_t> candidates;
    std::vector<std::string> dropped;
    for (std::size_t c = 0; c < width; ++c) {
        if (c == label_col) continue;
        if (is_identifier(names[c])) {
            dropped.push_back(names[c]);
        } else {
            candidates.push_back(c);
        }
    }

    std::vector<double> values;
    std::vector<std::size_t> unparseable(candidates.size(), 0);
    std::vector<std::string> labels;
    while (auto record = reader.next()) {
        if (record->size() == 1 && trim(record->front()).empty()) continue;
        if (record->size() != width) {
            throw DataError("malformed CSV: line " + std::to_string(reader.line()) + " has " +
                            std::to_string(record->size()) + " fields, expected " + std::to_string(width));
        }
        for (std::size_t j = 0; j < candidates.size(); ++j) {
            const auto parsed = parse_numeric((*record)[candidates[j]]);
            if (!parsed) ++unparseable[j];
            values.push_back(parsed.value_or(std::nan("")));
        }
        labels.emplace_back(trim((*record)[label_col]));
    }
    const std::size_t n = labels.size();
    if (n == 0) throw DataError("no data rows");

    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        const double parseable = static_cast<double>(n - unparseable[j]) / static_cast<double>(n);
        if (parseable >= kNumericColumnThreshold) {
            keep.push_back(j);
        } else {
            dropped.push_back(names[candidates[j]]);
        }
    }

    FlowTable table;
    table.features = Matrix(n, candidates.size(), std::move(values)).select_cols(keep);
    for (auto j : keep) table.column_names.push_back(names[candidates[j]]);
    table.raw_labels = std::move(labels);
    table.dropped_columns = std::move(dropped);
    return table;
}

void write_flow_csv(std::ostream& out, const FlowTable& table) {
    for (const auto& name : table.column_names) {
        write_csv_field(out, name);
        out << ',';
    }
    out << kLabelColumn << '\n';
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (double v : table.features.row(r)) out << format_double(v) << ',';
        write_csv_field(out, table.raw_labels[r]);
        out << '\n';
    }
}

void write_flow_csv(const std::filesystem::path& path, const FlowTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_flow_csv(out, table);
    if (!out) throw DataError("write failed: " + path.string());
}

FlowTable clean(const FlowTable& table) {
    const std::size_t n = table.rows();
    std::vector<std::size_t> keep;
    std::vector<double> medians;
    FlowTable out;
    out.dropped_columns = table.dropped_columns;

    std::vector<double> column;
    for (std::size_t c = 0; c < table.cols(); ++c) {
        column.clear();
        for (std::size_t r = 0; r < n; ++r) {
            const double v = table.features(r, c);
            if (std::isfinite(v)) column.push_back(v);
        }
        const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
        if (column.empty() || *lo == *hi) {
            out.dropped_columns.push_back(table.column_names[c]);
            continue;
        }
        keep.push_back(c);
        medians.push_back(finite_median(column));
    }
    if (keep.empty()) throw DataError("no informative features");

    out.features = table.features.select_cols(keep);
    for (std::size_t j = 0; j < keep.size(); ++j) {
        out.column_names.push_back(table.column_names[keep[j]]);
        for (std::size_t r = 0; r < n; ++r) {
            double& v = out.features(r, j);
            if (!std::isfinite(v)) v = medians[j];
        }
    }
    out.raw_labels = table.raw_labels;
    return out;
}

LabelVector encode_labels(const FlowTable& table, const std::string& positive_label) {
    const auto& raw = table.raw_labels;
    const bool single_class =
        raw.empty() || std::all_of(raw.begin(), raw.end(), [&](const auto& l) { return l == raw.front(); });
    if (single_class) throw DataError("degenerate labels: only one class present");
    if (std::find(raw.begin(), raw.end(), positive_label) == raw.end()) {
        throw DataError("positive label not found: " + positive_label);
    }
    std::vector<int> values(raw.size());
    std::transform(raw.begin(), raw.end(), values.begin(),
                   [&](const std::string& l) { return l == positive_label ? 1 : 0; });
    return make_label_vector(std::move(values), positive_label);
}

std::size_t count_nonfinite(const Matrix& m) noexcept {
    return static_cast<std::size_t>(
        std::count_if(m.data().begin(), m.data().end(), [](double v) { return !std::isfinite(v); }));
}

}  // namespace flowstack::data
