#pragma once
// Tiny CSV table writer. Every emitted file starts with a '#' comment line
// embedding the scenario name, seed and budget so rows are reproducible from
// the header alone.

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccf/linalg.hpp"

namespace ccf {

struct Table {
  std::vector<std::string> columns;
  std::vector<Vec> rows;
  std::map<std::string, std::string> meta;  // embedded in the '#' header line

  void add_row(const Vec& r) {
    if (r.size() != columns.size()) throw std::invalid_argument("Table: row width mismatch");
    rows.push_back(r);
  }
};

inline std::string table_to_csv(const Table& t) {
  std::ostringstream os;
  os.precision(12);
  if (!t.meta.empty()) {
    os << "#";
    for (const auto& [k, v] : t.meta) os << " " << k << "=" << v;
    os << "\n";
  }
  for (size_t c = 0; c < t.columns.size(); ++c) os << t.columns[c] << (c + 1 < t.columns.size() ? "," : "");
  os << "\n";
  for (const auto& r : t.rows) {
    for (size_t c = 0; c < r.size(); ++c) os << r[c] << (c + 1 < r.size() ? "," : "");
    os << "\n";
  }
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

inline void write_csv(const std::string& path, const Table& t) { write_text_file(path, table_to_csv(t)); }

}  // namespace ccf
