#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "augmi/table.hpp"

namespace augmi::csv {

// Shortest representation that round-trips the exact double.
std::string format_double(double v);

// RFC-4180 quoting: fields containing comma, quote or newline are quoted,
// embedded quotes doubled.
void write_row(std::ostream& os, std::span<const std::string> fields);
std::vector<std::vector<std::string>> read_rows(std::istream& is);
std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path);

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::continuous;
  std::vector<std::string> levels;  // categorical only; empty = collect from data
};

// Header row of column names; MISSING encoded as the empty field; categorical
// cells written as their level labels.
void write_dataset(const Dataset& ds, std::ostream& os);
void write_dataset(const Dataset& ds, const std::filesystem::path& path);
std::string to_csv_string(const Dataset& ds);

// With a schema the declared kinds and level lists are used; without one,
// columns whose non-empty cells all parse as numbers become continuous and
// the rest categorical with levels in order of first appearance.
Dataset read_dataset(std::istream& is);
Dataset read_dataset(const std::filesystem::path& path);
Dataset read_dataset(std::istream& is, const std::vector<ColumnSchema>& schema);
Dataset read_dataset(const std::filesystem::path& path, const std::vector<ColumnSchema>& schema);

}  // namespace augmi::csv
