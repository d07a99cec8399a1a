#include <doctest.h>

#include <cmath>

#include "augmi/rng.hpp"
#include "augmi/table.hpp"

using namespace augmi;

namespace {

Dataset small_dataset() {
  Dataset ds;
  ds.add_column(make_continuous("a", {1.0, 2.0, 3.0, 4.0}));
  ds.add_column(make_continuous("b", {0.5, -0.5, 1.5, -1.5}));
  ds.add_column(make_categorical("g", {"lo", "hi"}, {0, 1, 1, 0}));
  return ds;
}

bool same_cells(const Dataset& x, const Dataset& y) {
  if (x.column_count() != y.column_count() || x.row_count() != y.row_count()) return false;
  for (std::size_t j = 0; j < x.column_count(); ++j) {
    const Column& cx = x.column(j);
    const Column& cy = y.column(j);
    if (cx.name != cy.name || cx.missing != cy.missing) return false;
    for (std::size_t r = 0; r < cx.size(); ++r)
      if (!cx.is_missing(r) && cx.values[r] != cy.values[r]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("dataset invariants") {
  Dataset ds = small_dataset();
  CHECK(ds.row_count() == 4);
  CHECK(ds.column_count() == 3);
  CHECK_THROWS_AS(ds.add_column(make_continuous("a", {0, 0, 0, 0})), std::invalid_argument);
  CHECK_THROWS_AS(ds.add_column(make_continuous("c", {0, 0})), std::invalid_argument);
  CHECK_THROWS_AS(ds.column("missing-name"), std::invalid_argument);

  Dataset bad;
  CHECK_THROWS_AS(bad.add_column(make_categorical("g", {"x"}, {0, 1})), std::invalid_argument);

  Dataset ind;
  CHECK_THROWS_AS(
      ind.add_column(make_continuous("d", {0, 2}, ColumnKind::event_indicator)),
      std::invalid_argument);
}

TEST_CASE("entry must precede event time") {
  Dataset ds;
  ds.add_column(make_continuous("entry", {0.0, 5.0}, ColumnKind::entry_time));
  CHECK_THROWS_AS(ds.add_column(make_continuous("time", {3.0, 5.0}, ColumnKind::event_time)),
                  std::invalid_argument);
  Dataset ok;
  ok.add_column(make_continuous("entry", {0.0, 4.0}, ColumnKind::entry_time));
  ok.add_column(make_continuous("time", {3.0, 5.0}, ColumnKind::event_time));
  CHECK(ok.row_count() == 2);
}

TEST_CASE("mask_cells with p=1 is the identity") {
  Dataset ds = small_dataset();
  RngStream rng(5, 0);
  const Dataset out = mask_cells(ds, {"a", "g"}, 1.0, rng);
  CHECK(same_cells(ds, out));
  std::size_t missing = 0;
  for (const Column& c : out.columns()) missing += c.missing_count();
  CHECK(missing == 0);
}

TEST_CASE("mask_cells validates arguments") {
  Dataset ds = small_dataset();
  RngStream rng(5, 0);
  CHECK_THROWS_AS(mask_cells(ds, {"nope"}, 0.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(mask_cells(ds, {"a"}, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(mask_cells(ds, {"a"}, 1.5, rng), std::invalid_argument);
}

TEST_CASE("row-joint masking hits all targets together and nothing else") {
  Dataset ds = small_dataset();
  RngStream rng(7, 3);
  const Dataset out = mask_cells(ds, {"a", "g"}, 0.5, rng);
  const Column& a = out.column("a");
  const Column& b = out.column("b");
  const Column& g = out.column("g");
  CHECK(b.missing_count() == 0);
  for (std::size_t r = 0; r < out.row_count(); ++r) {
    CHECK(a.is_missing(r) == g.is_missing(r));
    if (!a.is_missing(r)) CHECK(a.values[r] == ds.column("a").values[r]);
    CHECK(b.values[r] == ds.column("b").values[r]);
  }
}

TEST_CASE("masking is deterministic in the stream") {
  Dataset ds;
  std::vector<double> v(10);
  for (int i = 0; i < 10; ++i) v[static_cast<std::size_t>(i)] = i;
  ds.add_column(make_continuous("a", v));
  RngStream r1(123, 9), r2(123, 9);
  const Dataset m1 = mask_cells(ds, {"a"}, 0.5, r1);
  const Dataset m2 = mask_cells(ds, {"a"}, 0.5, r2);
  CHECK(m1.column("a").missing == m2.column("a").missing);
}

TEST_CASE("observed-row count concentrates around n * p") {
  const std::size_t n = 100000;
  std::vector<double> v(n, 1.0);
  Dataset ds;
  ds.add_column(make_continuous("a", std::move(v)));
  RngStream rng(2024, 0);
  const Dataset out = mask_cells(ds, {"a"}, 0.05, rng);
  const double observed = static_cast<double>(n - out.column("a").missing_count());
  const double sd = std::sqrt(100000 * 0.05 * 0.95);  // ~69
  CHECK(std::abs(observed - 5000.0) < 4.0 * sd);
}

TEST_CASE("per-cell masking is independent across targets") {
  const std::size_t n = 20000;
  std::vector<double> v(n, 1.0);
  Dataset ds;
  ds.add_column(make_continuous("a", v));
  ds.add_column(make_continuous("b", v));
  RngStream rng(77, 0);
  const Dataset out = mask_cells(ds, {"a", "b"}, 0.5, rng, MaskMode::per_cell);
  std::size_t joint = 0, a_missing = 0;
  for (std::size_t r = 0; r < n; ++r) {
    joint += out.column("a").is_missing(r) && out.column("b").is_missing(r);
    a_missing += out.column("a").is_missing(r);
  }
  CHECK(std::abs(static_cast<double>(a_missing) / n - 0.5) < 0.02);
  CHECK(std::abs(static_cast<double>(joint) / n - 0.25) < 0.02);
}

TEST_CASE("complete_rows identity and direct definition") {
  Dataset ds = small_dataset();
  CHECK(same_cells(complete_rows(ds), ds));

  Dataset holes;
  std::vector<double> v(10);
  for (int i = 0; i < 10; ++i) v[static_cast<std::size_t>(i)] = i;
  Column c = make_continuous("a", v);
  c.missing[2] = 1;
  holes.add_column(c);
  Column d = make_continuous("b", v);
  d.missing[7] = 1;
  holes.add_column(d);
  const Dataset kept = complete_rows(holes);
  CHECK(kept.row_count() == 8);
  for (std::size_t r = 0; r < kept.row_count(); ++r) {
    CHECK(kept.column("a").values[r] != 2.0);
    CHECK(kept.column("a").values[r] != 7.0);
  }
  CHECK(same_cells(complete_rows(kept), kept));  // idempotent
}

TEST_CASE("complete_rows count equals the observed rows of the mask") {
  const std::size_t n = 100000;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i);
  Dataset ds;
  ds.add_column(make_continuous("a", v));
  ds.add_column(make_continuous("b", v));
  RngStream rng(31, 1);
  const Dataset masked = mask_cells(ds, {"a", "b"}, 0.2, rng);
  const std::size_t observed = n - masked.column("a").missing_count();
  CHECK(complete_rows(masked).row_count() == observed);
}
