#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cli {

namespace {

Field integer(std::string name, json def, std::string help, std::optional<double> lo = std::nullopt,
              std::optional<double> hi = std::nullopt) {
  return {std::move(name), Kind::Integer, std::move(def), std::move(help), {}, lo, hi};
}

Field number(std::string name, json def, std::string help, std::optional<double> lo = std::nullopt,
             std::optional<double> hi = std::nullopt) {
  return {std::move(name), Kind::Number, std::move(def), std::move(help), {}, lo, hi};
}

Field text(std::string name, json def, std::string help, std::vector<std::string> choices = {}) {
  return {std::move(name), Kind::String, std::move(def), std::move(help), std::move(choices), std::nullopt, std::nullopt};
}

Field required(Field f) {
  f.required = true;
  return f;
}

std::vector<Field> with_common(std::vector<Field> fields) {
  fields.push_back(text("output", "", "report path (default: standard output)"));
  fields.push_back(text("format", "json", "report format", {"json", "csv"}));
  fields.push_back(integer("seed", 1, "random seed, recorded in the report", 0.0));
  return fields;
}

const Field kFamily = text("family", "ball", "family of the R-space", {"ball", "siegel", "sphere", "grassmann"});
const Field kN = integer("n", 2, "family dimension for ball / siegel / sphere", 1.0, 8.0);
const Field kP = integer("p", 1, "grassmann p", 1.0, 6.0);
const Field kQ = integer("q", 2, "grassmann q", 1.0, 6.0);
const Field kOrbit = integer("orbit", 0, "open H-orbit label j", 0.0, 8.0);
const Field kMargin = number("margin", 1e-3, "distance kept from orbit boundaries", 0.0, 0.5);

std::vector<Command> build() {
  std::vector<Command> out;
  out.push_back({"spectrum", "measured against analytic eigenvalues of the cos^lambda transform",
                 with_common({integer("sphere", 1, "sphere dimension", 1.0, 2.0),
                              number("e", nullptr, "lambda - rho (alternative to --lambda)"),
                              number("lambda", nullptr, "lambda (alternative to --e)"),
                              integer("m-max", 4, "largest K-type 2m", 0.0, 40.0),
                              integer("nodes", 4096, "circle nodes", 8.0, 1 << 16),
                              integer("n-theta", 128, "Gauss-Legendre nodes in cos(theta) on S^2", 2.0, 1024.0),
                              integer("n-phi", 256, "azimuthal nodes on S^2", 2.0, 2048.0),
                              number("margin", 0.1, "singular-zone margin in lambda - rho", 0.0, 1.0),
                              number("tol", nullptr, "absolute tolerance (default 1e-6 on S^1, 1e-5 on S^2)", 0.0)})});
  out.push_back({"gram", "Gram matrix of the Berezin kernel on an open orbit",
                 with_common({kFamily, kN, kP, kQ, required(number("e", nullptr, "lambda - rho")), kOrbit,
                              integer("points", 64, "sample size", 1.0, 4000.0),
                              number("tol", 1e-8, "relative psd tolerance", 0.0), kMargin})});
  out.push_back({"wallach-scan", "bisection for the positivity threshold",
                 with_common({kFamily, kN, kP, kQ, kOrbit, integer("samples", 128, "sample size", 2.0, 4000.0),
                              number("scan-lo", -3.0, "left end of the scan"),
                              number("scan-hi", 1.0, "right end of the scan"),
                              integer("steps", 41, "coarse scan points", 2.0, 10000.0),
                              number("width", 1e-3, "bisection stops at this bracket width", 1e-12),
                              number("tol", 1e-8, "relative psd tolerance", 0.0), kMargin})});
  out.push_back({"witness", "explicit negative two-point form on a non-Riemannian orbit",
                 with_common({text("family", "ball", "family", {"ball", "siegel"}), kN,
                              required(number("e", nullptr, "lambda - rho"))})});
  out.push_back({"orbits", "census of open H-orbits on a real Grassmannian",
                 with_common({kP, kQ, integer("samples", 4000, "random planes", 1.0, 1e7),
                              integer("moves", 1000, "random H moves for the invariance check", 0.0, 1e7),
                              integer("stabilizers", 20, "stabilizer elements per base point", 0.0, 1e6)})});
  out.push_back({"quotient", "GNS quotient of a positive Gram matrix and its H-invariance",
                 with_common({kFamily, kN, kP, kQ, required(number("e", nullptr, "lambda - rho")), kOrbit,
                              integer("points", 32, "sample size", 1.0, 2000.0),
                              integer("h-samples", 20, "random h for the invariance defect", 0.0, 1e5),
                              number("tol", 1e-12, "relative eigenvalue cutoff", 0.0), kMargin})});
  out.push_back({"hls", "Hardy-Littlewood-Sobolev checks",
                 with_common({integer("n", 1, "dimension", 1.0, 2.0), number("lambda", 0.5, "Riesz exponent"),
                              number("half-width", 100.0, "box half width for the optimizer", 1.0),
                              {"spacings", Kind::NumberList, json::array({0.4, 0.2, 0.1}),
                               "grid spacings for the Rayleigh quotient", {}, 0.0, std::nullopt},
                              integer("reflection-checks", 300, "random reflection-positivity checks", 0.0, 1e5),
                              integer("even-checks", 100, "random even-average checks", 0.0, 1e5),
                              integer("cells", 80, "cells per axis for the random functions", 4.0, 400.0)})});
  out.push_back({"decomp-check", "group invariants of the Nbar M A N decomposition",
                 with_common({text("group", "sl", "group family", {"sl", "sp"}), kP, kQ, kN,
                              integer("samples", 10000, "random group elements", 1.0, 1e7)})});
  out.push_back({"tables",
                 "classification and complementary-series rows",
                 with_common({text("row", nullptr, "row label, e.g. \"BD Ic\""),
                              {"all", Kind::Flag, false, "every row", {}, std::nullopt, std::nullopt}})});
  out.push_back({"plot-data", "flat CSV from a saved report",
                 {required(text("input", nullptr, "report JSON written by another subcommand")),
                  text("kind", nullptr, "report kind when the file has no subcommand field",
                       {"spectrum", "gram", "wallach-scan", "witness", "orbits", "quotient", "hls", "decomp-check", "tables"}),
                  text("output", "", "CSV path (default: standard output)")}});
  return out;
}

std::string describe(const Field& f) {
  switch (f.kind) {
    case Kind::Integer: return "an integer";
    case Kind::Number: return "a number";
    case Kind::String: return "a string";
    case Kind::Flag: return "true or false";
    case Kind::NumberList: return "a list of numbers";
  }
  return "a value";
}

std::optional<std::string> check_range(const Field& f, double x) {
  std::ostringstream os;
  os.precision(17);
  if (f.min && x < *f.min) {
    os << "must be >= " << *f.min << ", got " << x;
    return os.str();
  }
  if (f.max && x > *f.max) {
    os << "must be <= " << *f.max << ", got " << x;
    return os.str();
  }
  return std::nullopt;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string at_line(const std::string& path, int line) {
  return line > 0 ? path + ":" + std::to_string(line) : path;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> table = build();
  return table;
}

const Command& command(const std::string& name) {
  for (const Command& c : commands()) {
    if (c.name == name) return c;
  }
  throw UsageError("unknown subcommand '" + name + "'");
}

std::optional<std::string> check_value(const Field& f, const json& v) {
  switch (f.kind) {
    case Kind::Integer:
      if (!v.is_number_integer()) {
        if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) break;
        return "expected " + describe(f);
      }
      return check_range(f, v.get<double>());
    case Kind::Number:
      if (!v.is_number()) return "expected " + describe(f);
      if (!std::isfinite(v.get<double>())) return "must be finite";
      return check_range(f, v.get<double>());
    case Kind::String:
      if (!v.is_string()) return "expected " + describe(f);
      if (!f.choices.empty()) {
        for (const std::string& c : f.choices) {
          if (c == v.get<std::string>()) return std::nullopt;
        }
        std::string all;
        for (const std::string& c : f.choices) all += (all.empty() ? "" : ", ") + c;
        return "must be one of " + all + ", got '" + v.get<std::string>() + "'";
      }
      return std::nullopt;
    case Kind::Flag:
      if (!v.is_boolean()) return "expected " + describe(f);
      return std::nullopt;
    case Kind::NumberList:
      if (!v.is_array() || v.empty()) return "expected a non-empty list of numbers";
      for (const json& x : v) {
        if (!x.is_number()) return "expected a non-empty list of numbers";
        if (f.min && !(x.get<double>() > *f.min)) return "entries must be > " + std::to_string(*f.min);
      }
      return std::nullopt;
  }
  return std::nullopt;
}

json from_text(const Field& f, const std::string& s) {
  const std::string where = "--" + f.name + ": ";
  auto parse_double = [&](const std::string& t) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
      throw UsageError(where + "expected a number, got '" + t + "'");
    }
    return x;
  };
  json v;
  switch (f.kind) {
    case Kind::Integer: {
      errno = 0;
      char* end = nullptr;
      const long long x = std::strtoll(s.c_str(), &end, 10);
      if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw UsageError(where + "expected an integer, got '" + s + "'");
      }
      v = x;
      break;
    }
    case Kind::Number: v = parse_double(s); break;
    case Kind::String: v = s; break;
    case Kind::Flag: v = true; break;
    case Kind::NumberList: {
      v = json::array();
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) v.push_back(parse_double(item));
      break;
    }
  }
  if (auto err = check_value(f, v)) throw UsageError(where + *err);
  return v;
}

Settings::Settings(const Command& cmd) : cmd_(&cmd) {}

void Settings::set(const std::string& name, json v) {
  for (const Field& f : cmd_->fields) {
    if (f.name == name) {
      if (f.kind == Kind::Integer && v.is_number_float()) v = static_cast<long long>(v.get<double>());
      values_[name] = std::move(v);
      return;
    }
  }
  throw UsageError("'" + name + "' is not an option of " + cmd_->name);
}

bool Settings::given(const std::string& name) const { return values_.contains(name); }

const json& Settings::raw(const std::string& name) const {
  if (auto it = values_.find(name); it != values_.end()) return *it;
  for (const Field& f : cmd_->fields) {
    if (f.name == name) {
      if (f.fallback.is_null()) throw UsageError(cmd_->name + ": --" + name + " is required");
      return f.fallback;
    }
  }
  throw std::logic_error("no field " + name);
}

json Settings::resolved() const {
  json out = json::object();
  for (const Field& f : cmd_->fields) {
    if (f.name == "output" || f.name == "format" || f.name == "seed") continue;
    auto it = values_.find(f.name);
    out[f.name] = it != values_.end() ? *it : f.fallback;
  }
  return out;
}

json config_schema() {
  json variants = json::array();
  for (const Command& c : commands()) {
    json props = json::object();
    props["subcommand"] = {{"const", c.name}};
    json required = json::array({"subcommand"});
    for (const Field& f : c.fields) {
      json p = {{"description", f.help}};
      switch (f.kind) {
        case Kind::Integer: p["type"] = "integer"; break;
        case Kind::Number: p["type"] = "number"; break;
        case Kind::String: p["type"] = "string"; break;
        case Kind::Flag: p["type"] = "boolean"; break;
        case Kind::NumberList:
          p["type"] = "array";
          p["items"] = {{"type", "number"}, {"exclusiveMinimum", *f.min}};
          p["minItems"] = 1;
          break;
      }
      if (f.kind == Kind::Integer || f.kind == Kind::Number) {
        if (f.min) p["minimum"] = *f.min;
        if (f.max) p["maximum"] = *f.max;
      }
      if (!f.choices.empty()) p["enum"] = f.choices;
      if (!f.fallback.is_null()) p["default"] = f.fallback;
      props[f.name] = std::move(p);
      if (f.required) required.push_back(f.name);
    }
    variants.push_back({{"type", "object"},
                        {"properties", std::move(props)},
                        {"required", std::move(required)},
                        {"additionalProperties", false}});
  }
  return {{"$schema", "https://json-schema.org/draft/2020-12/schema"},
          {"$id", "berezin/config.schema.json"},
          {"title", "berezin run configuration"},
          {"oneOf", std::move(variants)}};
}

int key_line(const std::string& text, const std::string& key) {
  const std::string quoted = "\"" + key + "\"";
  std::size_t pos = 0;
  while ((pos = text.find(quoted, pos)) != std::string::npos) {
    std::size_t k = pos + quoted.size();
    while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
    if (k < text.size() && text[k] == ':') {
      return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
    }
    pos = k;
  }
  return 0;
}

ConfigFile load_config(const std::string& path) {
  const std::string body = read_file(path);
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, body.size());
    const int line = 1 + static_cast<int>(std::count(body.begin(), body.begin() + static_cast<long>(byte ? byte - 1 : 0), '\n'));
    throw UsageError(at_line(path, line) + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) throw UsageError(path + ":1: config must be a JSON object");
  ConfigFile cfg;
  if (!doc.contains("subcommand")) throw UsageError(path + ":1: missing key \"subcommand\"");
  if (!doc["subcommand"].is_string()) {
    throw UsageError(at_line(path, key_line(body, "subcommand")) + ": \"subcommand\" must be a string");
  }
  cfg.subcommand = doc["subcommand"].get<std::string>();
  const Command* cmd = nullptr;
  try {
    cmd = &command(cfg.subcommand);
  } catch (const UsageError& e) {
    throw UsageError(at_line(path, key_line(body, "subcommand")) + ": " + e.what());
  }
  cfg.values = json::object();
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() == "subcommand") continue;
    const int line = key_line(body, it.key());
    const Field* field = nullptr;
    for (const Field& f : cmd->fields) {
      if (f.name == it.key()) field = &f;
    }
    if (!field) {
      throw UsageError(at_line(path, line) + ": unknown key \"" + it.key() + "\" for subcommand " + cmd->name);
    }
    if (it->is_null()) continue;
    if (auto err = check_value(*field, *it)) {
      throw UsageError(at_line(path, line) + ": \"" + it.key() + "\" " + *err);
    }
    cfg.values[it.key()] = *it;
    cfg.keys.push_back(it.key());
  }
  return cfg;
}

}  // namespace cli
