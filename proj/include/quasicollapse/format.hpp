#ifndef QUASICOLLAPSE_FORMAT_HPP
#define QUASICOLLAPSE_FORMAT_HPP

#include <charconv>
#include <string>
#include <system_error>

namespace quasicollapse {

/// Shortest round-trip decimal form, locale independent.
inline std::string format_double(double value)
{
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (result.ec != std::errc()) return "nan";
  return std::string(buffer, result.ptr);
}

}  // namespace quasicollapse

#endif  // QUASICOLLAPSE_FORMAT_HPP
