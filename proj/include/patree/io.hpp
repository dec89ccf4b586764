#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace patree {

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_real(double x);

/// Parses a full decimal real or throws Errc::parse_error.
double parse_real(std::string_view text);

std::uint64_t parse_u64(std::string_view text);

/// "# generated <UTC time>" unless suppressed.
std::string timestamp_line();

/// Opens `path` for writing or throws Errc::io_error.
void write_file(const std::string& path, std::string_view contents);

}  // namespace patree
