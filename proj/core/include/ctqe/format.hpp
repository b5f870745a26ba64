#pragma once

#include <string>
#include <string_view>

namespace ctqe {

/// Shortest decimal text that round-trips to the same double.
std::string format_shortest(double value);

/// Fixed-point text with `decimals` digits after the point ("-0.000" is
/// printed as "0.000").
std::string format_fixed(double value, int decimals);

/// Quotes a CSV field when it contains a comma, quote, or line break.
std::string csv_field(std::string_view value);

std::string html_escape(std::string_view text);

/// Percent-encodes characters outside [A-Za-z0-9._-] so a trace id can be
/// used as a file name.
std::string file_stem_for_id(std::string_view id);

}  // namespace ctqe
