#include "berezin/tables.hpp"

#include "berezin/error.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <map>

namespace berezin::tables {

namespace detail {
extern const char* const kTablesJson;
}

namespace {

using nlohmann::json;

struct Store {
  std::vector<TableRecord> rows;
  std::map<std::string, std::size_t> index;
  std::map<std::string, json> rules;
};

TabularRow row_from_json(const json& j) {
  TabularRow r;
  r.row = j.at("row").get<std::string>();
  r.cells = j.at("cells").get<std::vector<std::string>>();
  return r;
}

const Store& store() {
  static const Store s = [] {
    Store out;
    const json doc = json::parse(detail::kTablesJson);
    for (const auto& j : doc.at("rows")) {
      TableRecord rec;
      rec.key = j.at("key").get<std::string>();
      rec.label = j.at("label").get<std::string>();
      rec.classification_table = j.at("classification").at("table").get<std::string>();
      rec.classification = row_from_json(j.at("classification"));
      const json& cs = j.at("complementary_series");
      rec.complementary_series = row_from_json(cs);
      rec.corrupted = cs.at("corrupted").get<bool>();
      if (!rec.corrupted) out.rules[rec.key] = cs.at("rule");
      out.index[rec.key] = out.rows.size();
      out.rows.push_back(std::move(rec));
    }
    return out;
  }();
  return s;
}

int mod4(int v) { return ((v % 4) + 4) % 4; }

bool holds(const std::string& when, const RowParams& pr) {
  if (when == "always" || when == "otherwise") return true;
  if (when == "p_eq_q") return pr.p == pr.q;
  if (when == "n_even") return pr.n % 2 == 0;
  if (when == "n_odd") return pr.n % 2 != 0;
  if (when == "p_minus_q_mod4_eq_0") return mod4(pr.p - pr.q) == 0;
  if (when == "p_minus_q_mod4_eq_2") return mod4(pr.p - pr.q) == 2;
  if (when == "p_minus_q_mod4_odd") return mod4(pr.p - pr.q) % 2 == 1;
  throw Error(ErrorCode::CorruptedEntry, "unknown rule condition '" + when + "'");
}

double value_of(const json& v, const RowParams& pr) {
  const double coef = v.at("coef").get<double>();
  const std::string var = v.at("var").get<std::string>();
  if (var == "one") return coef;
  if (var == "n") return coef * pr.n;
  if (var == "p") return coef * pr.p;
  throw Error(ErrorCode::CorruptedEntry, "unknown rule variable '" + var + "'");
}

}  // namespace

const std::string& embedded_json() {
  static const std::string s(detail::kTablesJson);
  return s;
}

std::string normalize_key(const std::string& key) {
  // Drops math-mode markup and collapses whitespace runs to one space.
  std::string out;
  for (char c : key) {
    if (c == '$' || c == '_') continue;
    const bool space = c == ' ' || c == '\t';
    if (space && (out.empty() || out.back() == ' ')) continue;
    out.push_back(space ? ' ' : c);
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

const TableRecord& table_row(const std::string& key) {
  const Store& s = store();
  const auto it = s.index.find(normalize_key(key));
  if (it == s.index.end()) throw Error(ErrorCode::UnknownKey, "no table row '" + key + "'");
  return s.rows[it->second];
}

const std::vector<TableRecord>& all_rows() { return store().rows; }

double complementary_series_R(const std::string& key, const RowParams& params) {
  const TableRecord& rec = table_row(key);
  if (rec.corrupted) {
    throw Error(ErrorCode::CorruptedEntry,
                "row '" + rec.key + "' has no numeric R: cell reads " +
                    rec.complementary_series.cells.back());
  }
  for (const auto& c : store().rules.at(rec.key)) {
    if (holds(c.at("when").get<std::string>(), params)) return value_of(c.at("value"), params);
  }
  throw Error(ErrorCode::CorruptedEntry, "no rule case applies for row '" + rec.key + "'");
}

TabularRow parse_tabular_row(const std::string& line) {
  TabularRow r;
  r.row = line;
  std::string body = line;
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.pop_back();
  if (body.size() >= 2 && body.compare(body.size() - 2, 2, "\\\\") == 0) body.resize(body.size() - 2);
  std::string cur;
  bool math = false;
  auto flush = [&] {
    const auto a = cur.find_first_not_of(" \t");
    const auto b = cur.find_last_not_of(" \t");
    r.cells.push_back(a == std::string::npos ? std::string{} : cur.substr(a, b - a + 1));
    cur.clear();
  };
  for (char c : body) {
    if (c == '$') math = !math;
    if (c == '&' && !math) {
      flush();
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return r;
}

}  // namespace berezin::tables
