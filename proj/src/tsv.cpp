#include "kgqr/tsv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "kgqr/error.hpp"

namespace kgqr {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void for_each_tsv_row(std::istream& in, const std::string& name, std::size_t min_cols,
                      std::size_t max_cols,
                      const std::function<void(const std::vector<std::string>&, std::size_t)>& row) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() < min_cols || cols.size() > max_cols) {
      throw ParseError(name + ":" + std::to_string(number) + ": expected " +
                       std::to_string(min_cols) +
                       (max_cols != min_cols ? "-" + std::to_string(max_cols) : "") +
                       " tab-separated columns, got " + std::to_string(cols.size()));
    }
    row(cols, number);
  }
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << contents;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace kgqr
