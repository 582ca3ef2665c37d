#include "cli/app.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

namespace modred::cli {

namespace {

void add_common_options(CLI::App& cmd, FlagValues& f) {
  cmd.add_option("--config", f.config, "JSON config file (flags override its values)");
  cmd.add_option("--model", f.model, "oscillator | coupled");
  cmd.add_option("--gamma", f.gamma, "oscillator friction");
  cmd.add_option("--omega", f.omega, "oscillator frequency");
  cmd.add_option("--beta", f.beta, "inverse temperature (inf for zero noise)");
  cmd.add_option("--x0", f.x0, "oscillator initial position");
  cmd.add_option("--v0", f.v0, "oscillator initial velocity");
  cmd.add_option("--a", f.a, "coupled: rate of oscillator 1 (< 0)");
  cmd.add_option("--d", f.d, "coupled: rate of oscillator 2 (defaults to a)");
  cmd.add_option("--k", f.k, "coupled: coupling strength (> 0)");
  cmd.add_option("--x1", f.x1, "coupled: initial x1");
  cmd.add_option("--x2", f.x2, "coupled: initial x2");
  cmd.add_option("--sigma1", f.sigma1, "coupled: diffusion of x1");
  cmd.add_option("--sigma2", f.sigma2, "coupled: diffusion of x2");
  cmd.add_option("--k-max", f.k_max, "coupled: largest admissible k for the small-k bound");
  cmd.add_option("--t-start", f.t_start, "grid start");
  cmd.add_option("--t-end", f.t_end, "grid end");
  cmd.add_option("--t-count", f.t_count, "grid size");
  cmd.add_option("--t-spacing", f.t_spacing, "linear | geometric | composite");
  cmd.add_option("--sweep", f.sweep, "name=v1,v2,...");
  cmd.add_option("--seed", f.seed, "simulation seed");
  cmd.add_option("--dt", f.dt, "simulation time step");
  cmd.add_option("--paths", f.paths, "simulated paths");
  cmd.add_option("--steps", f.steps, "simulated steps (default: up to the last record time)");
  cmd.add_option("--out", f.out, "output file (default stdout)");
  cmd.add_option("--format", f.format, "csv | json");
}

void write_table(std::ostream& os, const Table& table, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    write_csv(os, table);
  } else {
    write_json(os, table);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariant-manifold model reduction: exact laws, W2 error bounds, Monte-Carlo checks", "modred"};
  app.require_subcommand(1);
  FlagValues flags;
  auto* law = app.add_subcommand("law", "tabulate exact laws and W2 of original vs reduced dynamics");
  auto* bounds = app.add_subcommand("bounds", "check every explicit bound on the time grid");
  auto* sweep = app.add_subcommand("sweep", "sup-over-grid W2^2 against its bound for each sweep value");
  auto* simulate = app.add_subcommand("simulate", "Euler-Maruyama cross-check of the exact laws");
  for (auto* cmd : {law, bounds, sweep, simulate}) add_common_options(*cmd, flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const RunConfig cfg = resolve_config(flags, load_config_file(flags));
    CommandResult result;
    if (law->parsed()) {
      result = cmd_law(cfg);
    } else if (bounds->parsed()) {
      result = cmd_bounds(cfg);
    } else if (sweep->parsed()) {
      result = cmd_sweep(cfg);
    } else {
      result = cmd_simulate(cfg);
    }

    if (cfg.out.empty()) {
      write_table(out, result.table, cfg.format);
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) {
        err << "error: cannot write '" << cfg.out << "'\n";
        return kConfigError;
      }
      write_table(file, result.table, cfg.format);
      std::ofstream sidecar(cfg.out + ".config.json", std::ios::binary);
      sidecar << to_json(cfg).dump(2) << '\n';
    }
    if (result.exit_code == kBoundViolation) {
      err << "bound violation detected\n";
    }
    return result.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace modred::cli
