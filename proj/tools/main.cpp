#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "tcsde/cli_runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Simulation and validation toolkit for SDEs on a stable random clock"};
  app.require_subcommand(1);

  tcsde::CliOptions opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "configuration file (key = value lines)");
    sub->add_option("--seed", opts.seed, "master seed");
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--workers", opts.workers, "worker threads (0 = all processors)");
    sub->add_option("--set", opts.overrides,
                    "override a configuration key, key=value (repeatable)");
  };

  add_common(app.add_subcommand("sample", "write one clock path and its inverse as CSV"));
  add_common(app.add_subcommand("validate",
                                "check moment formulas and bounds, exit 1 on failure"));
  add_common(app.add_subcommand("converge", "estimate the strong convergence order"));
  add_common(app.add_subcommand("audit", "sample-test a model's declared constants"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (CLI::App* sub : app.get_subcommands()) {
    opts.command = sub->get_name();
    opts.seed_set = sub->count("--seed") > 0;
    opts.out_set = sub->count("--out") > 0;
    opts.workers_set = sub->count("--workers") > 0;
  }

  try {
    return tcsde::run_command(opts);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
