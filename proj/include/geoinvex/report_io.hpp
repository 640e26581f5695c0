#pragma once

#include <string>

#include "geoinvex/report.hpp"
#include "geoinvex/scenario.hpp"

namespace geoinvex {

enum class ReportFormat { Json, Text, Csv };

ReportFormat report_format_from_string(const std::string& s);

/// Doubles are written in shortest round-trip form; non-finite values as
/// the strings "inf", "-inf" and "nan".
Json to_json(const CheckReport& report);
Json to_json(const RunReport& report);

CheckReport check_report_from_json(const Json& j, const Manifold& m);
RunReport run_report_from_json(const Json& j);

std::string emit_report(const RunReport& report, ReportFormat format);

/// Writes `content` to `path` through a temporary file and a rename.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace geoinvex
