// Batch front-end: solve / scan / oracle / audit over a key=value run config.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fmwave/io.hpp"

namespace {

fmwave::RunConfig load_config(const std::string& config_path,
                              const std::vector<std::string>& overrides) {
  fmwave::RunConfig cfg;
  if (!config_path.empty()) cfg = fmwave::parse_config_file(config_path);
  for (const auto& kv : overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw fmwave::Error("--set expects key=value, got '" + kv + "'");
    fmwave::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traveling-wave front solver for unbalanced reaction-diffusion potentials"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  app.add_option("-c,--config", config_path, "Run configuration file (key=value lines)");
  app.add_option("-s,--set", overrides, "Override a config key, e.g. --set beta=0.3");
  app.add_option("-o,--out", out_dir, "Output directory (overrides out_dir)");

  auto* solve = app.add_subcommand("solve", "Audit, locate the speed, verify, write artifacts");
  auto* scan = app.add_subcommand("scan", "Tabulate the constrained minimum over a speed range");
  auto* oracle = app.add_subcommand("oracle", "Run the shooting and/or parabolic oracles");
  auto* auditc = app.add_subcommand("audit", "Audit the potential's structural assumptions");

  CLI11_PARSE(app, argc, argv);

  try {
    fmwave::RunConfig cfg = load_config(config_path, overrides);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (solve->parsed()) return fmwave::cmd_solve(cfg);
    if (scan->parsed()) return fmwave::cmd_scan(cfg);
    if (oracle->parsed()) return fmwave::cmd_oracle(cfg);
    if (auditc->parsed()) return fmwave::cmd_audit(cfg);
  } catch (const fmwave::Error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
