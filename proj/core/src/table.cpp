#include "augmi/table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace augmi {

std::string_view to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::continuous: return "continuous";
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::event_time: return "event-time";
    case ColumnKind::event_indicator: return "event-indicator";
    case ColumnKind::entry_time: return "entry-time";
  }
  return "?";
}

std::size_t Column::missing_count() const {
  std::size_t n = 0;
  for (auto m : missing) n += m != 0;
  return n;
}

Column make_continuous(std::string name, std::vector<double> values, ColumnKind kind) {
  Column c;
  c.name = std::move(name);
  c.kind = kind;
  c.missing.assign(values.size(), 0);
  c.values = std::move(values);
  return c;
}

Column make_categorical(std::string name, std::vector<std::string> levels,
                        std::vector<double> level_indices) {
  Column c;
  c.name = std::move(name);
  c.kind = ColumnKind::categorical;
  c.levels = std::move(levels);
  c.missing.assign(level_indices.size(), 0);
  c.values = std::move(level_indices);
  return c;
}

Dataset::Dataset(std::vector<Column> columns) : columns_(std::move(columns)) {
  rows_ = columns_.empty() ? 0 : columns_.front().size();
  validate(*this);
}

bool Dataset::has_column(std::string_view name) const {
  return std::any_of(columns_.begin(), columns_.end(),
                     [&](const Column& c) { return c.name == name; });
}

std::size_t Dataset::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == name) return i;
  throw std::invalid_argument("unknown column: " + std::string(name));
}

const Column& Dataset::column(std::string_view name) const {
  return columns_[column_index(name)];
}

Column& Dataset::column_mut(std::string_view name) {
  return columns_[column_index(name)];
}

void Dataset::add_column(Column column) {
  if (has_column(column.name))
    throw std::invalid_argument("duplicate column: " + column.name);
  if (!columns_.empty() && column.size() != rows_)
    throw std::invalid_argument("column " + column.name + " has " +
                                std::to_string(column.size()) + " rows, expected " +
                                std::to_string(rows_));
  if (columns_.empty()) rows_ = column.size();
  columns_.push_back(std::move(column));
}

Dataset Dataset::subset_rows(const std::vector<std::size_t>& rows) const {
  std::vector<Column> out;
  out.reserve(columns_.size());
  for (const Column& c : columns_) {
    Column s;
    s.name = c.name;
    s.kind = c.kind;
    s.levels = c.levels;
    s.values.reserve(rows.size());
    s.missing.reserve(rows.size());
    for (std::size_t r : rows) {
      s.values.push_back(c.values[r]);
      s.missing.push_back(c.missing[r]);
    }
    out.push_back(std::move(s));
  }
  Dataset ds;
  ds.columns_ = std::move(out);
  ds.rows_ = rows.size();
  return ds;
}

void validate(const Dataset& ds) {
  std::unordered_set<std::string_view> names;
  const Column* entry_col = nullptr;
  const Column* event_col = nullptr;
  int n_entry = 0, n_event = 0;
  for (const Column& c : ds.columns()) {
    if (!names.insert(c.name).second)
      throw std::invalid_argument("duplicate column: " + c.name);
    if (c.size() != ds.row_count() || c.missing.size() != c.size())
      throw std::invalid_argument("column " + c.name + " size mismatch");
    for (std::size_t r = 0; r < c.size(); ++r) {
      if (c.is_missing(r)) continue;
      const double v = c.values[r];
      switch (c.kind) {
        case ColumnKind::continuous:
          break;
        case ColumnKind::categorical:
          if (!(v >= 0) || v != std::floor(v) ||
              static_cast<std::size_t>(v) >= c.levels.size())
            throw std::invalid_argument("column " + c.name +
                                        ": categorical cell outside level list");
          break;
        case ColumnKind::event_indicator:
          if (v != 0.0 && v != 1.0)
            throw std::invalid_argument("column " + c.name + ": indicator not in {0,1}");
          break;
        case ColumnKind::event_time:
        case ColumnKind::entry_time:
          if (!(v >= 0.0))
            throw std::invalid_argument("column " + c.name + ": negative time");
          break;
      }
    }
    if (c.kind == ColumnKind::entry_time) { entry_col = &c; ++n_entry; }
    if (c.kind == ColumnKind::event_time) { event_col = &c; ++n_event; }
  }
  if (n_entry == 1 && n_event == 1) {
    for (std::size_t r = 0; r < ds.row_count(); ++r) {
      if (entry_col->is_missing(r) || event_col->is_missing(r)) continue;
      if (!(entry_col->values[r] < event_col->values[r]))
        throw std::invalid_argument("entry time must precede event time (row " +
                                    std::to_string(r) + ")");
    }
  }
}

Dataset mask_cells(const Dataset& ds, const std::vector<std::string>& targets,
                   double p_observed, RngStream& rng, MaskMode mode) {
  if (!(p_observed > 0.0) || p_observed > 1.0)
    throw std::invalid_argument("p_observed must be in (0,1]");
  std::vector<std::size_t> idx;
  idx.reserve(targets.size());
  for (const auto& t : targets) idx.push_back(ds.column_index(t));
  if (p_observed == 1.0) return ds;

  Dataset out = ds;
  const std::size_t n = ds.row_count();
  if (mode == MaskMode::row_joint) {
    for (std::size_t r = 0; r < n; ++r) {
      if (rng.uniform01() <= p_observed) continue;
      for (std::size_t j : idx) out.column_mut(j).missing[r] = 1;
    }
  } else {
    for (std::size_t j : idx)
      for (std::size_t r = 0; r < n; ++r)
        if (!(rng.uniform01() <= p_observed)) out.column_mut(j).missing[r] = 1;
  }
  return out;
}

Dataset complete_rows(const Dataset& ds) {
  std::vector<std::size_t> keep;
  keep.reserve(ds.row_count());
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    bool complete = true;
    for (const Column& c : ds.columns()) {
      if (c.is_missing(r)) {
        complete = false;
        break;
      }
    }
    if (complete) keep.push_back(r);
  }
  return ds.subset_rows(keep);
}

}  // namespace augmi
