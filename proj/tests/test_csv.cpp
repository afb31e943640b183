#include <doctest.h>

#include <cstdlib>
#include <string>

#include "twist/csv.hpp"

using namespace twist;

TEST_CASE("RFC 4180 quoting") {
  CHECK(csv_quote("plain") == "plain");
  CHECK(csv_quote("a,b") == "\"a,b\"");
  CHECK(csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_quote("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("numbers round-trip") {
  for (double v : {0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, 0.0}) CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
  CHECK(format_number(42LL) == "42");
}

TEST_CASE("table layout") {
  CsvTable t({"z [m]", "label"});
  t.add(0.5, "x,y");
  t.add(2, true);
  CHECK(t.rows() == 2);
  CHECK(t.str() == "z [m],label\r\n0.5,\"x,y\"\r\n2,true\r\n");
  CHECK_THROWS(t.add_row({"only one"}));
}
