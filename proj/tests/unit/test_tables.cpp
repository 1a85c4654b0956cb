#include "berezin/error.hpp"
#include "berezin/tables.hpp"
#include "support.hpp"
#include "table_fidelity.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace berezin;
using namespace berezin::tables;
using testing::code_of;

TEST_CASE("complementary series lookups") {
  CHECK(complementary_series_R("C I", {4, 0, 0}) == 2.0);
  CHECK(complementary_series_R("C I", {5, 0, 0}) == 0.0);
  CHECK(complementary_series_R("E VII", {}) == 3.0);
  CHECK(complementary_series_R("C II", {3, 0, 0}) == 9.0);
  CHECK(complementary_series_R("A I", {0, 3, 3}) == 3.0);
  CHECK(complementary_series_R("A I", {0, 2, 3}) == 0.0);
  CHECK(complementary_series_R("A", {0, 2, 2}) == 4.0);
  CHECK(complementary_series_R("E$_7$", {}) == 6.0);
  CHECK(complementary_series_R("BD Ib", {0, 5, 1}) == 2.0);
  CHECK(complementary_series_R("BD Ib", {0, 4, 1}) == 1.0);
  CHECK(complementary_series_R("BD Ib", {0, 3, 1}) == 0.0);
  CHECK(complementary_series_R("A III", {3, 0, 0}) == 3.0);
  CHECK(complementary_series_R("A III", {2, 0, 0}) == 0.0);
}

TEST_CASE("lookup errors") {
  CHECK(code_of([] { complementary_series_R("BD Ic", {2, 0, 0}); }) == ErrorCode::CorruptedEntry);
  CHECK(code_of([] { table_row("F II"); }) == ErrorCode::UnknownKey);
  CHECK(code_of([] { complementary_series_R("nonsense", {}); }) == ErrorCode::UnknownKey);
  CHECK(table_row("BD Ic").corrupted);
  CHECK(table_row("BD Ic").complementary_series.cells.at(1) == "$\\mathfrak{so} (n+1,1)$");
}

TEST_CASE("key normalisation") {
  CHECK(normalize_key("E$_7$") == "E7");
  CHECK(normalize_key("  C  I ") == "C I");
  CHECK(table_row("E$_6$").key == "E6");
  CHECK(table_row("E7").label == "E$_7$");
  CHECK(all_rows().size() == 19);
}

TEST_CASE("rank column") {
  CHECK(table_row("C I").classification.cells.back() == "$n$");
  CHECK(table_row("A I").classification.cells.back() == "$\\min\\{p,q\\}$");
  CHECK(table_row("BD Ic").classification.cells.back() == "$1$");
}

TEST_CASE("rows reproduce the transcription byte for byte") {
  const fidelity::Report r = fidelity::compare(BEREZIN_TRANSCRIPTION_PATH);
  for (const std::string& m : r.mismatches) INFO(m);
  CHECK(r.mismatches.empty());
  CHECK(r.classification_rows == 19);
  CHECK(r.series_rows == 19);
}

TEST_CASE("embedded data equals the shipped data file") {
  std::ifstream in(BEREZIN_TABLES_JSON_PATH, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == embedded_json());
}
