#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "energykg/error.hpp"
#include "energykg/table.hpp"

using namespace energykg;

TEST_CASE("energy table reads headings, cells and notices") {
  std::istringstream in(
      "utc_timestamp,cet_cest_timestamp,DE_KN_residential1_pv,interpolated,DE_KN_residential1_"
      "dishwasher\n"
      "2016-05-01T00:00:00Z,x,1.5,0,\n"
      "2016-05-01T01:00:00Z,x,,0,2.25\n");
  const EnergyTable table = read_energy_table(in, "mem.csv");
  REQUIRE(table.headings.size() == 2);
  CHECK(table.headings[0] == "DE_KN_residential1_pv");
  CHECK(table.headings[1] == "DE_KN_residential1_dishwasher");
  CHECK(table.notices.size() == 2);
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].timestamp == parse_instant("2016-05-01T00:00:00Z"));
  CHECK(table.rows[0].readings[0] == 1.5);
  CHECK_FALSE(table.rows[0].readings[1].has_value());
  CHECK_FALSE(table.rows[1].readings[0].has_value());
  CHECK(table.rows[1].readings[1] == 2.25);
  CHECK(table.rows[1].line == 3);
}

TEST_CASE("energy table rejects malformed input with locators") {
  const auto expect_throw = [](const std::string& text, const char* needle) {
    std::istringstream in(text);
    CHECK_THROWS_WITH_AS((void)read_energy_table(in, "mem.csv"), doctest::Contains(needle),
                         Error);
  };
  expect_throw("timestamp,x\n", "utc_timestamp");
  expect_throw("utc_timestamp,a\n2016-05-01T00:00:00Z,1\n2016-05-01T00:00:00Z,2\n",
               "strictly increasing");
  expect_throw("utc_timestamp,a\n2016-05-02T00:00:00Z,2\n2016-05-01T00:00:00Z,1\n",
               "strictly increasing");
  expect_throw("utc_timestamp,a\n2016-05-01 00:00:00,1\n", "mem.csv:2");
  expect_throw("utc_timestamp,a\n2016-05-01T00:00:00+02:00,1\n", "mem.csv:2");
  expect_throw("utc_timestamp,a\n2016-05-01T00:00:00Z,-1\n", "negative");
  expect_throw("utc_timestamp,a\n2016-05-01T00:00:00Z,abc\n", "not a decimal");
  expect_throw("utc_timestamp,a\n2016-05-01T00:00:00Z,1,2\n", "expected 2 fields");
  expect_throw("utc_timestamp,a,a\n", "duplicate column");
}

TEST_CASE("header-only table gives zero rows") {
  std::istringstream in("utc_timestamp,DE_KN_residential1_pv\n");
  const EnergyTable table = read_energy_table(in, "mem.csv");
  CHECK(table.headings.size() == 1);
  CHECK(table.rows.empty());
}

TEST_CASE("climate records parse and dedup") {
  std::istringstream in(
      "station,date,datatype,value,unit\n"
      "GHCND:GME00121926,2016-05-01,TMAX,215,tenths_degC\n"
      "GHCND:GME00121926,2016-05-01,PRCP,0,tenths_mm\n"
      "GHCND:GME00121926,2016-05-01,TMAX,215,tenths_degC\n");
  const auto records = read_climate_records(in, "mem.csv");
  REQUIRE(records.size() == 2);  // exact duplicate collapsed
  CHECK(records[0].station_id == "GHCND:GME00121926");
  CHECK(records[0].date == parse_day("2016-05-01"));
  CHECK(records[0].datatype == "TMAX");
  CHECK(records[0].value == 215);
}

TEST_CASE("climate conflicts and malformed rows are errors") {
  {
    std::istringstream in(
        "station,date,datatype,value,unit\n"
        "S,2016-05-01,TMAX,215,u\n"
        "S,2016-05-01,TMAX,300,u\n");
    CHECK_THROWS_WITH_AS((void)read_climate_records(in, "mem.csv"),
                         doctest::Contains("conflicting"), Error);
  }
  {
    std::istringstream in("station,date,type,value,unit\n");
    CHECK_THROWS_AS((void)read_climate_records(in, "mem.csv"), Error);
  }
  {
    std::istringstream in("station,date,datatype,value,unit\nS,2016-13-01,TMAX,1,u\n");
    CHECK_THROWS_WITH_AS((void)read_climate_records(in, "mem.csv"), doctest::Contains("mem.csv:2"),
                         Error);
  }
}

TEST_CASE("csv splitting handles quotes") {
  const auto fields = split_csv("a,\"b,c\",\"d\"\"e\",", "mem.csv", 1);
  REQUIRE(fields.size() == 4);
  CHECK(fields[0] == "a");
  CHECK(fields[1] == "b,c");
  CHECK(fields[2] == "d\"e");
  CHECK(fields[3] == "");
  CHECK_THROWS_AS((void)split_csv("\"unterminated", "mem.csv", 1), Error);
}
