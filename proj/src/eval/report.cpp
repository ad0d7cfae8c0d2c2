#include "flowstack/eval/report.hpp"

#include "flowstack/data/csv.hpp"
#include "flowstack/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace flowstack::eval {

namespace {

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g%%", fraction * 100.0);
    return buf;
}

nlohmann::ordered_json row_to_json(const MetricRow& row) {
    nlohmann::ordered_json doc;
    doc["model"] = row.model_name;
    doc["repeats"] = row.repeats;
    if (row.repeat_index) doc["repeat"] = *row.repeat_index;
    doc["train_fraction"] = row.train_fraction;
    doc["auc"] = row.auc;
    doc["ca"] = row.ca;
    doc["f1"] = row.f1;
    doc["precision"] = row.precision;
    doc["recall"] = row.recall;
    return doc;
}

std::string format_table(const ExperimentReport& report) {
    std::ostringstream out;
    auto cell = [&](const std::string& text, int width) { out << std::left << std::setw(width) << text; };
    auto header = [&] {
        cell("MODEL", 8);
        for (const char* h : {"AUC", "CA", "F1", "PRECISION", "RECALL"}) cell(h, 11);
        cell("TRAIN/TEST", 12);
        out << "TRAIN/SETSIZE\n";
    };
    header();
    for (std::size_t repeats : report.repeat_counts) {
        std::vector<MetricRow> block;
        for (const auto& row : report.aggregates) {
            if (row.repeats == repeats) block.push_back(row);
        }
        std::stable_sort(block.begin(), block.end(), [](const MetricRow& a, const MetricRow& b) {
            return a.ca > b.ca || (a.ca == b.ca && a.model_name < b.model_name);
        });
        for (const auto& row : block) {
            cell(upper(row.model_name), 8);
            for (double v : {row.auc, row.ca, row.f1, row.precision, row.recall}) cell(format_fixed5(v), 11);
            cell(std::to_string(row.repeats), 12);
            out << percent(row.train_fraction) << '\n';
        }
    }
    return out.str();
}

std::string format_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "model,repeats,repeat,train_fraction,auc,ca,f1,precision,recall\n";
    auto emit = [&](const MetricRow& row) {
        out << row.model_name << ',' << row.repeats << ','
            << (row.repeat_index ? std::to_string(*row.repeat_index) : std::string("mean"));
        for (double v : {row.train_fraction, row.auc, row.ca, row.f1, row.precision, row.recall}) {
            out << ',' << data::format_double(v);
        }
        out << '\n';
    };
    for (const auto& row : report.rows) emit(row);
    for (const auto& row : report.aggregates) emit(row);
    return out.str();
}

}  // namespace

ReportStyle report_style_from_string(const std::string& name) {
    if (name == "table") return ReportStyle::table;
    if (name == "csv") return ReportStyle::csv;
    if (name == "json") return ReportStyle::json;
    throw ConfigError("format", "format must be one of table, csv, json");
}

std::string format_fixed5(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    // Round the shortest decimal spelling of the value, half away from zero.
    char buf[512];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    std::string text(buf, end);
    std::string sign;
    if (!text.empty() && text.front() == '-') {
        sign = "-";
        text.erase(0, 1);
    }
    const auto dot = text.find('.');
    std::string digits = dot == std::string::npos ? text : text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t int_len = dot == std::string::npos ? text.size() : dot;
    const std::size_t keep = int_len + 5;
    if (digits.size() < keep) digits.append(keep - digits.size(), '0');
    const bool round_up = digits.size() > keep && digits[keep] >= '5';
    digits.resize(keep);
    std::size_t int_digits = int_len;
    if (round_up) {
        std::size_t i = keep;
        for (; i > 0; --i) {
            if (digits[i - 1] == '9') {
                digits[i - 1] = '0';
            } else {
                ++digits[i - 1];
                break;
            }
        }
        if (i == 0) {
            digits.insert(digits.begin(), '1');
            ++int_digits;
        }
    }
    std::string result = digits.substr(0, int_digits) + "." + digits.substr(int_digits);
    if (sign == "-" && result.find_first_not_of("0.") == std::string::npos) sign.clear();
    return sign + result;
}

nlohmann::ordered_json report_to_json(const ExperimentReport& report, const ReportOptions& options) {
    const auto& cfg = report.config;
    const auto& learners = cfg.learners;
    nlohmann::ordered_json doc;
    doc["config"] = {
        {"positive_label", cfg.positive_label},
        {"sample_fraction", cfg.sample_fraction},
        {"train_fraction", cfg.train_fraction},
        {"repeats", report.repeat_counts},
        {"seed", cfg.seed},
        {"learners",
         {{"k", learners.k},
          {"kernel", learn::to_string(learners.kernel)},
          {"C", learners.C},
          {"gamma", learners.gamma},
          {"internal_folds", learners.internal_folds},
          {"l2_lambda", learners.l2_lambda},
          {"svm_row_cap", learners.svm_row_cap}}},
    };
    auto& rows = doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) rows.push_back(row_to_json(r));
    auto& aggregates = doc["aggregates"] = nlohmann::ordered_json::array();
    for (const auto& r : report.aggregates) aggregates.push_back(row_to_json(r));
    doc["warnings"] = report.warnings;
    auto& timings = doc["timings"] = nlohmann::ordered_json::object();
    if (options.include_timings) {
        for (const auto& t : report.timings) timings[t.stage] = t.seconds;
    }
    return doc;
}

std::string format_report(const ExperimentReport& report, ReportStyle style, const ReportOptions& options) {
    switch (style) {
        case ReportStyle::table:
            return format_table(report);
        case ReportStyle::csv:
            return format_csv(report);
        case ReportStyle::json:
            return report_to_json(report, options).dump(2) + "\n";
    }
    return {};
}

}  // namespace flowstack::eval
