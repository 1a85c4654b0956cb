#pragma once

// Classification and complementary-series tables for symmetric R-spaces,
// shipped as a data file and embedded at build time. Cells are kept as the
// original LaTeX source.

#include <optional>
#include <string>
#include <vector>

namespace berezin::tables {

struct TabularRow {
  std::string row;                 // the source line including the trailing \\ .
  std::vector<std::string> cells;  // split at top-level '&'
};

struct TableRecord {
  std::string key;    // normalised label, e.g. "E7", "BD Ic"
  std::string label;  // label cell as written, e.g. "E$_7$"
  std::string classification_table;  // "classification_complex" or "classification_real"
  TabularRow classification;
  TabularRow complementary_series;
  bool corrupted = false;
};

/// Parameters a complementary-series rule may depend on.
struct RowParams {
  int n = 1;
  int p = 1;
  int q = 1;
};

/// Raw record for a row key. Throws UnknownKey.
const TableRecord& table_row(const std::string& key);

/// All records in file order.
const std::vector<TableRecord>& all_rows();

/// The endpoint R of the complementary series interval (-R, R).
/// Throws UnknownKey, or CorruptedEntry for rows whose cell holds no number.
double complementary_series_R(const std::string& key, const RowParams& params);

/// Accepts "E7", "E$_7$" and surrounding whitespace.
std::string normalize_key(const std::string& key);

/// Splits a tabular row into cells at '&' outside math mode and strips the
/// row terminator.
TabularRow parse_tabular_row(const std::string& line);

/// The embedded JSON document.
const std::string& embedded_json();

}  // namespace berezin::tables
