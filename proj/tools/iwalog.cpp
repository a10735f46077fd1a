#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "iwalog/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"p-adic log-matrix engine and verification harness"};
  app.set_version_flag("--version", std::string(iwalog::kToolVersion));
  std::string command;
  std::string config;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> precision;

  std::vector<std::string> choices = iwalog::command_names();
  choices.push_back("all");
  app.add_option("command", command, "check to run")->required()->check(CLI::IsMember(choices));
  app.add_option("--config", config, "JSON scenario file")->required();
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--precision", precision, "absolute precision N (p-adic digits)");
  app.add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const iwalog::RunConfig cfg = iwalog::load_config(config, seed, precision);
    const int code = iwalog::run_and_write(cfg, command, out_dir);
    std::cout << command << ": " << (code == 0 ? "pass" : code == 3 ? "upper-bound-only" : "fail") << " (see "
              << out_dir << "/summary.json)\n";
    return code;
  } catch (const iwalog::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const iwalog::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
