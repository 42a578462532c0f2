// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace unitone::csv {

using Row = std::vector<std::string>;

/// RFC 4180 field quoting: fields containing a comma, quote, CR or LF are
/// wrapped in quotes with embedded quotes doubled.
std::string quote(std::string_view field);

/// Appends one CRLF-terminated record.
void append_row(std::string& out, const Row& fields);

struct Table {
  Row header;
  std::vector<Row> rows;

  /// Column index by name, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
};

/// Parses RFC 4180 text (CRLF or LF line endings). The first record is the
/// header. Throws InvalidArgument on an unterminated quote.
Table parse(std::string_view text);

Table read_file(const std::filesystem::path& path);

/// Fixed-point with `digits` decimals; NaN becomes an empty field.
std::string fixed(double value, int digits = 6);
/// Shortest round-trippable representation.
std::string exact(double value);
/// Scientific notation with `digits` decimals; NaN becomes an empty field.
std::string scientific(double value, int digits = 6);

}  // namespace unitone::csv
