#pragma once

#include "flowstack/eval/experiment.hpp"

#include <json.hpp>

#include <string>

namespace flowstack::eval {

enum class ReportStyle { table, csv, json };

ReportStyle report_style_from_string(const std::string& name);

struct ReportOptions {
    // Wall-clock values differ run to run; they are left out unless asked for.
    bool include_timings = false;
};

nlohmann::ordered_json report_to_json(const ExperimentReport& report, const ReportOptions& options = {});

std::string format_report(const ExperimentReport& report, ReportStyle style, const ReportOptions& options = {});

// Fixed 5-decimal rendering used by the table style.
std::string format_fixed5(double value);

}  // namespace flowstack::eval
