#include "augmi/design.hpp"

#include <stdexcept>

namespace augmi {

DesignMatrix DesignMatrix::build(const Dataset& ds, const std::vector<std::string>& columns,
                                 bool intercept) {
  std::vector<std::size_t> rows(ds.row_count());
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
  return build(ds, columns, intercept, rows);
}

DesignMatrix DesignMatrix::build(const Dataset& ds, const std::vector<std::string>& columns,
                                 bool intercept, const std::vector<std::size_t>& rows) {
  DesignMatrix dm;
  std::size_t p = intercept ? 1 : 0;
  std::vector<const Column*> cols;
  cols.reserve(columns.size());
  for (const auto& name : columns) {
    const Column& c = ds.column(name);
    cols.push_back(&c);
    p += c.kind == ColumnKind::categorical ? c.levels.size() - 1 : 1;
  }
  dm.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
  dm.labels.reserve(p);
  std::size_t j = 0;
  if (intercept) {
    dm.X.col(0).setOnes();
    dm.labels.emplace_back("intercept");
    j = 1;
  }
  for (const Column* c : cols) {
    if (c->kind == ColumnKind::categorical) {
      const std::size_t n_dummies = c->levels.size() - 1;
      for (std::size_t d = 0; d < n_dummies; ++d)
        dm.labels.push_back(c->name + "." + c->levels[d + 1]);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = rows[i];
        if (c->is_missing(r))
          throw std::invalid_argument("design: missing cell in column " + c->name);
        const int lev = c->level_index(r);
        for (std::size_t d = 0; d < n_dummies; ++d)
          dm.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + d)) =
              lev == static_cast<int>(d) + 1 ? 1.0 : 0.0;
      }
      j += n_dummies;
    } else {
      dm.labels.push_back(c->name);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = rows[i];
        if (c->is_missing(r))
          throw std::invalid_argument("design: missing cell in column " + c->name);
        dm.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c->values[r];
      }
      ++j;
    }
  }
  return dm;
}

}  // namespace augmi
