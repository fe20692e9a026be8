#include "soliton/commands.hpp"
#include "soliton/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <utility>

int main(int argc, char** argv) {
  CLI::App app{"Translating soliton Dirichlet solver and verification battery"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir = ".";
  bool deterministic = false;
  const std::pair<const char*, const char*> commands[] = {
      {"profile", "integrate the planar grim-reaper profile"},
      {"halfwidth", "sweep d(alpha) over an alpha range"},
      {"bowl", "integrate the radial bowl profile"},
      {"solve", "Dirichlet solve on a strip or disk with basic checks"},
      {"perron", "disk-lifting iteration, cross-checked against the direct solve"},
      {"verify", "solve and run the full property battery"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "flat key = value config file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--deterministic", deterministic, "sequential, byte-reproducible run");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : soliton::kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  soliton::Config cfg;
  try {
    if (config_path.empty()) {
      std::istringstream none;
      cfg = soliton::Config::parse(none, "<defaults>");
    } else {
      cfg = soliton::Config::load(config_path);
    }
  } catch (const soliton::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return soliton::kConfigError;
  }

  soliton::CommandOptions opt;
  opt.out_dir = out_dir;
  opt.deterministic = deterministic;
  return soliton::run_command(command, cfg, opt, std::cout, std::cerr);
}
