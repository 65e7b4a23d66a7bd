#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace emosent::csv {

struct Record {
    std::size_t line = 0;  ///< 1-based line on which the record starts
    std::vector<std::string> fields;
};

/// RFC 4180 reader: quoted fields may contain commas, newlines and doubled
/// quotes. Accepts LF or CRLF line endings; blank lines are skipped.
/// Throws InputError on an unterminated quoted field.
std::vector<Record> parse(std::string_view text);

/// Quotes a field only when it needs it.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest text that round-trips to the same double. Used for files meant
/// to be edited by hand (the lexicon).
std::string shortest(double v);

/// `%.17g`: the fixed-width form used for every numeric CLI output.
std::string fixed17(double v);

/// Reads a whole file; throws InputError if it cannot be opened.
std::string read_file(const std::string& path);

/// Writes `content` to `path`, replacing it. Throws InputError on failure.
void write_file(const std::string& path, std::string_view content);

}  // namespace emosent::csv
