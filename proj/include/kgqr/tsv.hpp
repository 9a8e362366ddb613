#pragma once

#include <cstddef>
#include <functional>
#include <istream>
#include <string>
#include <vector>

namespace kgqr {

// Calls `row(columns, line_number)` for every non-blank line of a
// tab-separated stream. Lines whose column count falls outside
// [min_cols, max_cols] raise ParseError("<name>:<line>: ...").
void for_each_tsv_row(std::istream& in, const std::string& name, std::size_t min_cols,
                      std::size_t max_cols,
                      const std::function<void(const std::vector<std::string>&, std::size_t)>& row);

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

// Writes `contents` to a sibling temp file, then renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace kgqr
