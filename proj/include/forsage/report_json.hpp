#pragma once

#include "forsage/analytics.hpp"

#include <string>
#include <string_view>

namespace forsage {

/// JSON rendering of a profit report. Key order is fixed, every wei amount
/// is a decimal string, and monetary aggregates carry an `_eth` twin with
/// 18 fractional digits. The output ends with a newline.
std::string export_report(const ProfitReport& report);

/// Inverse of export_report (the `_eth` renderings are ignored).
/// Throws std::runtime_error on malformed input.
ProfitReport parse_report(std::string_view json_text);

} // namespace forsage
