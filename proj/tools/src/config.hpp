#pragma once

// Run configuration shared by the command line and --config files. Every
// subcommand is described by a field table; both entry points validate
// against the same table.

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

using json = nlohmann::ordered_json;

/// Bad flags, bad config files, unsupported requests: exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Kind { Integer, Number, String, Flag, NumberList };

struct Field {
  std::string name;
  Kind kind = Kind::Number;
  json fallback;  // null means "no default"
  std::string help;
  std::vector<std::string> choices;
  std::optional<double> min;
  std::optional<double> max;
  bool required = false;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<Field> fields;  // includes the common output/format/seed fields
};

const std::vector<Command>& commands();
const Command& command(const std::string& name);

/// Checks one value; returns an error message or nothing.
std::optional<std::string> check_value(const Field& f, const json& v);

/// Converts a command-line string to the field's JSON type (throws UsageError).
json from_text(const Field& f, const std::string& text);

class Settings {
 public:
  explicit Settings(const Command& cmd);

  const Command& cmd() const { return *cmd_; }
  void set(const std::string& name, json v);
  bool given(const std::string& name) const;
  const json& raw(const std::string& name) const;

  double number(const std::string& name) const { return raw(name).get<double>(); }
  long long integer(const std::string& name) const { return raw(name).get<long long>(); }
  int integer32(const std::string& name) const { return static_cast<int>(integer(name)); }
  std::string text(const std::string& name) const { return raw(name).get<std::string>(); }
  bool flag(const std::string& name) const { return raw(name).get<bool>(); }
  std::vector<double> numbers(const std::string& name) const { return raw(name).get<std::vector<double>>(); }

  /// All values, defaults filled in, in field-table order.
  json resolved() const;

 private:
  const Command* cmd_;
  json values_ = json::object();
};

struct ConfigFile {
  std::string subcommand;
  json values;                 // key -> value, already validated
  std::vector<std::string> keys;
};

/// Parses and validates a JSON config. Errors name the file and line.
ConfigFile load_config(const std::string& path);

/// JSON schema for config files, derived from the field tables.
json config_schema();

/// 1-based line of the first occurrence of "key": in text, or 0.
int key_line(const std::string& text, const std::string& key);

}  // namespace cli
