#pragma once

#include <cstdint>
#include <string>
#include <string_view>

// Locale-independent numeric formatting/parsing. format_double emits the
// shortest decimal form that round-trips bit-exactly through parse_double.

namespace ocdr::text {

std::string format_double(double v);
std::string format_int(std::int64_t v);
std::string format_uint(std::uint64_t v);

/// Parses a double; throws Error(corrupt_file) with `context` on failure.
double parse_double(std::string_view s, const std::string& context);
std::uint64_t parse_uint(std::string_view s, const std::string& context);
std::int64_t parse_int(std::string_view s, const std::string& context);

std::string_view trim(std::string_view s);

} // namespace ocdr::text
