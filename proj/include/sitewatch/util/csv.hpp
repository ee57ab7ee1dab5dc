#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sitewatch::csv {

using Row = std::vector<std::string>;

// RFC 4180 reader: quoted fields may contain commas, quotes ("") and newlines.
// Blank lines are skipped.
std::vector<Row> read(std::istream& in);
std::vector<Row> read_file(const std::string& path);

std::string escape(std::string_view field);
void write_row(std::ostream& out, const Row& row);

// Column lookup for a header row; throws if a required column is missing.
std::size_t column(const Row& header, std::string_view name);

}  // namespace sitewatch::csv
