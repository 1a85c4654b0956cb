// berezin: batch front end over the core library. Exit status 0 when every
// asserted property held, 1 when one failed, 2 on usage or config errors,
// 3 on unexpected internal errors.

#include "commands.hpp"
#include "config.hpp"

#include "berezin/error.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#if defined(BEREZIN_HAVE_OPENMP)
#include <omp.h>
#endif

namespace {

using cli::json;

void apply_thread_env() {
  const char* env = std::getenv("BEREZIN_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) {
    throw cli::UsageError(std::string("BEREZIN_THREADS must be a positive integer, got '") + env + "'");
  }
#if defined(BEREZIN_HAVE_OPENMP)
  omp_set_num_threads(static_cast<int>(n));
#endif
}

void write_out(const std::string& path, const std::string& body) {
  if (path.empty()) {
    std::cout << body;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cli::UsageError("cannot write '" + path + "'");
  out << body;
}

json read_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cli::UsageError("cannot read report '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  const std::string body = os.str();
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    const auto upto = body.begin() + static_cast<long>(std::min<std::size_t>(e.byte ? e.byte - 1 : 0, body.size()));
    const int line = 1 + static_cast<int>(std::count(body.begin(), upto, '\n'));
    throw cli::UsageError(path + ":" + std::to_string(line) + ": invalid JSON: " + e.what());
  }
}

int plot_data(const cli::Settings& s) {
  const json report = read_report(s.text("input"));
  if (!report.is_object()) throw cli::UsageError(s.text("input") + ": a report must be a JSON object");
  std::string kind;
  if (s.given("kind")) {
    kind = s.text("kind");
  } else if (report.contains("subcommand") && report["subcommand"].is_string()) {
    kind = report["subcommand"].get<std::string>();
  } else {
    throw cli::UsageError(s.text("input") + ": report has no subcommand field; pass --kind");
  }
  write_out(s.text("output"), cli::report_csv(report, kind));
  return 0;
}

int execute(const cli::Settings& s) {
  if (s.cmd().name == "plot-data") return plot_data(s);
  const cli::Outcome o = cli::run(s);
  const json report = cli::assemble(s, o);
  const std::string body = s.text("format") == "csv" ? cli::report_csv(report, s.cmd().name) : report.dump(2) + "\n";
  write_out(s.text("output"), body);
  if (cli::contracts_held(o)) return 0;
  std::cerr << "\n*** PROPERTY FAILED (" << s.cmd().name << ") ***\n";
  for (const auto& [what, held] : o.contracts) {
    if (!held) std::cerr << "***   " << what << "\n";
  }
  std::cerr << "*** see the report for the measured values ***\n";
  return 1;
}

int main_impl(int argc, char** argv) {
  CLI::App app{"Numerical checks for Berezin forms on symmetric R-spaces"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration (keys as the long flags, plus \"subcommand\")");
  bool print_schema = false;
  app.add_flag("--print-config-schema", print_schema, "print the JSON schema for --config files and exit");

  std::map<std::string, std::map<std::string, std::string>> texts;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, CLI::App*> subs;
  for (const cli::Command& c : cli::commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    subs[c.name] = sub;
    for (const cli::Field& f : c.fields) {
      std::string help = f.help;
      if (!f.fallback.is_null() && f.kind != cli::Kind::Flag) help += " [default: " + f.fallback.dump() + "]";
      if (f.kind == cli::Kind::Flag) {
        sub->add_flag("--" + f.name, flags[c.name][f.name], help);
      } else {
        sub->add_option("--" + f.name, texts[c.name][f.name], help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (print_schema) {
    std::cout << cli::config_schema().dump(2) << "\n";
    return 0;
  }
  try {
    apply_thread_env();
    const CLI::App* chosen = nullptr;
    for (const auto& [name, sub] : subs) {
      if (sub->parsed()) chosen = sub;
    }
    std::optional<cli::ConfigFile> cfg;
    if (!config_path.empty()) cfg = cli::load_config(config_path);
    std::string name;
    if (chosen) name = chosen->get_name();
    if (cfg) {
      if (!name.empty() && name != cfg->subcommand) {
        throw cli::UsageError("config file is for '" + cfg->subcommand + "' but the command line asks for '" + name + "'");
      }
      name = cfg->subcommand;
    }
    if (name.empty()) {
      std::cerr << app.help();
      return 2;
    }
    const cli::Command& cmd = cli::command(name);
    cli::Settings s(cmd);
    if (cfg) {
      for (const std::string& k : cfg->keys) s.set(k, cfg->values[k]);
    }
    const CLI::App* sub = subs.at(name);
    for (const cli::Field& f : cmd.fields) {
      if (sub->count("--" + f.name) == 0) continue;
      s.set(f.name, f.kind == cli::Kind::Flag ? json(flags[name][f.name]) : cli::from_text(f, texts[name][f.name]));
    }
    for (const cli::Field& f : cmd.fields) {
      if (f.required && !s.given(f.name)) throw cli::UsageError(name + ": --" + f.name + " is required");
    }
    return execute(s);
  } catch (const cli::UsageError& e) {
    std::cerr << "berezin: error: " << e.what() << "\n";
    return 2;
  } catch (const berezin::Error& e) {
    std::cerr << "berezin: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "berezin: internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) { return main_impl(argc, argv); }
