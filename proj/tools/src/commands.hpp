#pragma once

#include "config.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cli {

struct Outcome {
  json fields = json::object();  // subcommand-specific part of the report
  std::vector<std::pair<std::string, bool>> contracts;
};

/// Runs one subcommand other than plot-data.
Outcome run(const Settings& s);

/// Full report: subcommand, seed, config, fields, contracts, status.
json assemble(const Settings& s, const Outcome& o);

bool contracts_held(const Outcome& o);

/// Flat CSV of a report; kind overrides the report's subcommand field.
std::string report_csv(const json& report, const std::string& kind);

}  // namespace cli
