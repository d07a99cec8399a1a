#include <doctest.h>

#include <charconv>
#include <sstream>

#include "augmi/csv.hpp"

using namespace augmi;

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.0, 1.0, -1.0, 0.1, 1.0 / 3.0, 1.6094379124341003, 1e-300, 8.4e1}) {
    const std::string s = csv::format_double(v);
    double back = 0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
  CHECK(csv::format_double(1.0) == "1");
  CHECK(csv::format_double(0.5) == "0.5");
}

TEST_CASE("rfc-4180 quoting") {
  std::ostringstream os;
  std::vector<std::string> fields{"plain", "with,comma", "with\"quote", "with\nnewline", ""};
  csv::write_row(os, fields);
  std::istringstream is(os.str());
  const auto rows = csv::read_rows(is);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == fields);
}

TEST_CASE("dataset csv round trip with schema") {
  Dataset ds;
  Column a = make_continuous("value", {1.5, -2.25, 0.0});
  a.missing[1] = 1;
  ds.add_column(a);
  ds.add_column(make_categorical("group", {"aa", "b,b"}, {0, 1, 1}));

  const std::string text = csv::to_csv_string(ds);
  std::istringstream is(text);
  const std::vector<csv::ColumnSchema> schema{
      {"value", ColumnKind::continuous, {}},
      {"group", ColumnKind::categorical, {"aa", "b,b"}},
  };
  const Dataset back = csv::read_dataset(is, schema);
  REQUIRE(back.row_count() == 3);
  CHECK(back.column("value").values[0] == 1.5);
  CHECK(back.column("value").is_missing(1));
  CHECK(back.column("value").values[2] == 0.0);
  CHECK(back.column("group").level_label(1) == "b,b");
  CHECK(back.column("group").kind == ColumnKind::categorical);
}

TEST_CASE("missing is the empty field") {
  Dataset ds;
  Column a = make_continuous("x", {7.0, 8.0});
  a.missing[0] = 1;
  ds.add_column(a);
  CHECK(csv::to_csv_string(ds) == "x\n\n8\n");
}

TEST_CASE("kind inference without a schema") {
  std::istringstream is("num,label\n1.5,red\n2.5,blue\n,red\n");
  const Dataset ds = csv::read_dataset(is);
  CHECK(ds.column("num").kind == ColumnKind::continuous);
  CHECK(ds.column("label").kind == ColumnKind::categorical);
  CHECK(ds.column("label").levels == std::vector<std::string>{"red", "blue"});
  CHECK(ds.column("num").is_missing(2));
}

TEST_CASE("ragged rows are rejected") {
  std::istringstream is("a,b\n1\n");
  CHECK_THROWS(csv::read_dataset(is));
}
