#pragma once

// Report emission: deterministic JSON text, atomic file writes and CSV
// plot data (RFC 4180, CRLF line ends).
//
// A report may carry a "plots" object whose members are either
//   {"kind":"table","columns":[..],"rows":[[..],..]}
// or
//   {"kind":"histogram","values":[..],"bins":n}
// and emit_plotdata writes one CSV per member.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qstates/json_io.hpp"

namespace qstates {

/// Two-space indented JSON with a trailing newline. Doubles are written in
/// shortest round-trip form, so equal reports give equal bytes.
std::string dump_report(const json& report);

/// Writes to a temporary sibling and renames it over `path`; on failure no
/// file is left behind. Creates missing parent directories.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Shortest round-trip decimal form of a double.
std::string format_number(double x);

/// RFC 4180 field: quoted when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view field);

std::string csv_table(const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows);

/// Builders for the "plots" members.
json plot_table(std::vector<std::string> columns, const std::vector<std::vector<double>>& rows);
json plot_histogram(const std::vector<double>& values, int bins = 20);

/// (bin lower edge, count) rows of a histogram over [min, max] of the
/// values; a degenerate range puts everything in one bin.
std::vector<std::pair<double, std::size_t>> histogram(const std::vector<double>& values, int bins);

/// Writes <dir>/<stem>_<plot>.csv for every member of report["plots"] and
/// returns the paths in member order.
std::vector<std::filesystem::path> emit_plotdata(const json& report, const std::filesystem::path& dir,
                                                 std::string_view stem);

}  // namespace qstates
