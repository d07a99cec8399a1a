#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "augmi/rng.hpp"

namespace augmi {

enum class ColumnKind {
  continuous,
  categorical,
  event_time,
  event_indicator,
  entry_time,
};

std::string_view to_string(ColumnKind kind);

// One typed column with an explicit per-cell missingness mask.  Categorical
// cells store the 0-based index into `levels`; every other kind stores the
// value itself.  Missingness lives in the mask, never in a sentinel value.
struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::continuous;
  std::vector<std::string> levels;  // categorical only
  std::vector<double> values;
  std::vector<std::uint8_t> missing;  // 1 = MISSING

  std::size_t size() const { return values.size(); }
  bool is_missing(std::size_t row) const { return missing[row] != 0; }
  std::size_t missing_count() const;
  int level_index(std::size_t row) const { return static_cast<int>(values[row]); }
  const std::string& level_label(std::size_t row) const {
    return levels[static_cast<std::size_t>(values[row])];
  }
};

Column make_continuous(std::string name, std::vector<double> values,
                       ColumnKind kind = ColumnKind::continuous);
Column make_categorical(std::string name, std::vector<std::string> levels,
                        std::vector<double> level_indices);

// Rectangular table of equally long, uniquely named columns.  Values are
// treated as immutable after construction; transformations build new tables.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Column> columns);

  std::size_t row_count() const { return rows_; }
  std::size_t column_count() const { return columns_.size(); }

  bool has_column(std::string_view name) const;
  std::size_t column_index(std::string_view name) const;
  const Column& column(std::string_view name) const;
  const Column& column(std::size_t index) const { return columns_[index]; }
  Column& column_mut(std::size_t index) { return columns_[index]; }
  Column& column_mut(std::string_view name);
  const std::vector<Column>& columns() const { return columns_; }

  void add_column(Column column);
  Dataset subset_rows(const std::vector<std::size_t>& rows) const;

 private:
  std::vector<Column> columns_;
  std::size_t rows_ = 0;
};

// Throws std::invalid_argument when a declared invariant is broken: ragged
// columns, duplicate names, categorical cells outside the level list,
// indicators outside {0,1}, negative times, or entry >= event time rowwise
// (checked when the table has exactly one entry-time and one event-time
// column).
void validate(const Dataset& ds);

enum class MaskMode {
  row_joint,  // a row keeps either all target columns or none
  per_cell,   // each (row, target) cell masked independently
};

// MCAR masking: each row (or cell) is kept observed with probability
// p_observed; non-observed target cells are set MISSING.  Non-target columns
// and observed values are never touched.  p_observed = 1 returns the input
// unchanged.
Dataset mask_cells(const Dataset& ds, const std::vector<std::string>& targets,
                   double p_observed, RngStream& rng,
                   MaskMode mode = MaskMode::row_joint);

// Rows with no MISSING cell in any column, original order preserved.
Dataset complete_rows(const Dataset& ds);

}  // namespace augmi
