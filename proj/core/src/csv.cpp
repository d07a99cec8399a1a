#include "augmi/csv.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <unordered_map>

namespace augmi::csv {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

namespace {

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

void write_field(std::ostream& os, const std::string& field) {
  if (!needs_quoting(field)) {
    os << field;
    return;
  }
  os << '"';
  for (char ch : field) {
    if (ch == '"') os << '"';
    os << ch;
  }
  os << '"';
}

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

void write_row(std::ostream& os, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    write_field(os, fields[i]);
  }
  os << '\n';
}

std::vector<std::vector<std::string>> read_rows(std::istream& is) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  char ch;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };
  while (is.get(ch)) {
    if (in_quotes) {
      if (ch == '"') {
        if (is.peek() == '"') {
          is.get(ch);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        field_started = true;  // next field exists even if empty
        break;
      case '\r':
        break;
      case '\n':
        if (!row.empty() || field_started || !field.empty()) end_row();
        break;
      default:
        field.push_back(ch);
        field_started = true;
        break;
    }
  }
  if (in_quotes) throw std::runtime_error("csv: unterminated quoted field");
  if (!row.empty() || field_started || !field.empty()) end_row();
  return rows;
}

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_rows(is);
}

void write_dataset(const Dataset& ds, std::ostream& os) {
  std::vector<std::string> fields;
  fields.reserve(ds.column_count());
  for (const Column& c : ds.columns()) fields.push_back(c.name);
  write_row(os, fields);
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    fields.clear();
    for (const Column& c : ds.columns()) {
      if (c.is_missing(r)) {
        fields.emplace_back();
      } else if (c.kind == ColumnKind::categorical) {
        fields.push_back(c.level_label(r));
      } else {
        fields.push_back(format_double(c.values[r]));
      }
    }
    write_row(os, fields);
  }
}

void write_dataset(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  write_dataset(ds, os);
}

std::string to_csv_string(const Dataset& ds) {
  std::ostringstream os;
  write_dataset(ds, os);
  return os.str();
}

namespace {

Dataset from_cells(const std::vector<std::vector<std::string>>& rows,
                   const std::vector<ColumnSchema>* schema) {
  if (rows.empty()) throw std::runtime_error("csv: missing header row");
  const auto& header = rows.front();
  const std::size_t n_cols = header.size();
  const std::size_t n_rows = rows.size() - 1;
  for (std::size_t r = 1; r < rows.size(); ++r)
    if (rows[r].size() != n_cols)
      throw std::runtime_error("csv: row " + std::to_string(r) + " has " +
                               std::to_string(rows[r].size()) + " fields, expected " +
                               std::to_string(n_cols));

  std::vector<Column> cols(n_cols);
  for (std::size_t j = 0; j < n_cols; ++j) {
    Column& c = cols[j];
    c.name = header[j];
    c.values.assign(n_rows, 0.0);
    c.missing.assign(n_rows, 0);
    const ColumnSchema* sc = nullptr;
    if (schema) {
      for (const auto& s : *schema)
        if (s.name == c.name) { sc = &s; break; }
      if (!sc) throw std::runtime_error("csv: no schema for column " + c.name);
      c.kind = sc->kind;
      c.levels = sc->levels;
    } else {
      bool numeric = true;
      for (std::size_t r = 1; r < rows.size() && numeric; ++r) {
        const std::string& cell = rows[r][j];
        double v;
        if (!cell.empty() && !parse_double(cell, v)) numeric = false;
      }
      c.kind = numeric ? ColumnKind::continuous : ColumnKind::categorical;
    }
    const bool cat = c.kind == ColumnKind::categorical;
    std::unordered_map<std::string, std::size_t> level_of;
    for (std::size_t i = 0; i < c.levels.size(); ++i) level_of[c.levels[i]] = i;
    for (std::size_t r = 0; r < n_rows; ++r) {
      const std::string& cell = rows[r + 1][j];
      if (cell.empty()) {
        c.missing[r] = 1;
        continue;
      }
      if (cat) {
        auto it = level_of.find(cell);
        if (it == level_of.end()) {
          if (sc && !sc->levels.empty())
            throw std::runtime_error("csv: column " + c.name + ": unknown level '" +
                                     cell + "'");
          level_of.emplace(cell, c.levels.size());
          c.levels.push_back(cell);
          c.values[r] = static_cast<double>(c.levels.size() - 1);
        } else {
          c.values[r] = static_cast<double>(it->second);
        }
      } else {
        double v;
        if (!parse_double(cell, v))
          throw std::runtime_error("csv: column " + c.name + ": bad number '" + cell + "'");
        c.values[r] = v;
      }
    }
  }
  return Dataset(std::move(cols));
}

}  // namespace

Dataset read_dataset(std::istream& is) { return from_cells(read_rows(is), nullptr); }

Dataset read_dataset(const std::filesystem::path& path) {
  return from_cells(read_rows(path), nullptr);
}

Dataset read_dataset(std::istream& is, const std::vector<ColumnSchema>& schema) {
  return from_cells(read_rows(is), &schema);
}

Dataset read_dataset(const std::filesystem::path& path,
                     const std::vector<ColumnSchema>& schema) {
  return from_cells(read_rows(path), &schema);
}

}  // namespace augmi::csv
