#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace geosom {

// Small CSV layer, RFC 4180 flavoured: quoted fields, doubled-quote escapes,
// CRLF or LF line endings. Every parse error carries file and line context.

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // excludes the header

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);

// Parses CSV text already in memory; `name` labels error messages.
CsvTable parse_csv(const std::string& text, const std::string& name);

// Writes rows verbatim, quoting fields only when they contain a comma,
// quote or newline. Lines end with '\n'.
void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// Same serialization, returned as a string.
std::string csv_string(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows);

// Shortest decimal string that round-trips the exact double value
// (std::to_chars). Used for every floating-point number we serialise so
// that re-running a pipeline yields byte-identical artifacts.
std::string format_double(double v);

// Strict numeric parsing; `context` is prepended to error messages
// (e.g. "census.csv line 14, column T1_1AGE0M").
double parse_double(const std::string& s, const std::string& context);
long long parse_int(const std::string& s, const std::string& context);

}  // namespace geosom
