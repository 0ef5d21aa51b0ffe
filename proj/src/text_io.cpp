#include "ocdr/text_io.hpp"

#include "ocdr/error.hpp"

#include <charconv>
#include <system_error>

namespace ocdr::text {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) fail(Errc::io_failure, "to_chars failed");
  return std::string(buf, ptr);
}

std::string format_int(std::int64_t v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) fail(Errc::io_failure, "to_chars failed");
  return std::string(buf, ptr);
}

std::string format_uint(std::uint64_t v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) fail(Errc::io_failure, "to_chars failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view s, const std::string& context) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    fail(Errc::corrupt_file, context + ": bad number '" + std::string(s) + "'");
  return v;
}

std::uint64_t parse_uint(std::string_view s, const std::string& context) {
  s = trim(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    fail(Errc::corrupt_file, context + ": bad integer '" + std::string(s) + "'");
  return v;
}

std::int64_t parse_int(std::string_view s, const std::string& context) {
  s = trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    fail(Errc::corrupt_file, context + ": bad integer '" + std::string(s) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

} // namespace ocdr::text
