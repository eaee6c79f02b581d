#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cclf::csv {

using Row = std::vector<std::string>;

// RFC 4180 reader: comma-delimited, double-quote escaping, quoted fields may
// span lines. Accepts LF or CRLF record terminators and a leading UTF-8 BOM.
// Throws Error(kMalformedCsv) on an unterminated quote.
std::vector<Row> parse(std::string_view text);
std::vector<Row> read_file(const std::filesystem::path& path);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);
void write_row(std::ostream& out, const Row& row);

}  // namespace cclf::csv
