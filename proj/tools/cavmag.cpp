#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cavmag/errors.hpp"
#include "cavmag/parameters.hpp"
#include "cavmag/steady_state.hpp"
#include "cavmag/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Options {
  std::string config;
  std::string out;
  unsigned jobs = 1;
  std::optional<std::string> mode;
  std::uint64_t seed = 0;
  std::optional<std::size_t> branch;
  std::string preset;
  std::size_t points = 41;
};

cavmag::Mode resolve_mode(const Options& o, const std::optional<cavmag::Mode>& from_file) {
  if (o.mode) return cavmag::parse_mode(*o.mode);
  return from_file.value_or(cavmag::Mode::effective);
}

void emit_csv(const Options& o, const cavmag::SweepGrid& grid, const std::vector<cavmag::SweepRecord>& records) {
  if (o.out.empty() || o.out == "-") {
    cavmag::write_csv(std::cout, grid, records);
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw cavmag::ConfigError("cannot open output file '" + o.out + "'");
  cavmag::write_csv(f, grid, records);
  std::size_t stable = 0;
  for (const auto& r : records) stable += r.stable ? 1 : 0;
  std::cerr << "wrote " << records.size() << " records (" << stable << " stable) to " << o.out << "\n";
}

int cmd_point(const Options& o) {
  cavmag::ParameterSet params;
  std::optional<cavmag::Mode> file_mode;
  if (!o.preset.empty()) {
    params = cavmag::preset(o.preset).fixed;
    file_mode = cavmag::Mode::effective;
  }
  if (!o.config.empty()) {
    const cavmag::ConfigFile cfg = cavmag::load_config(o.config);
    for (const auto& [k, v] : cfg.params.values()) params.set(k, v);
    if (cfg.mode) file_mode = cfg.mode;
  }
  if (o.config.empty() && o.preset.empty()) throw cavmag::ConfigError("point: --config or --preset required");

  const cavmag::PointOptions opts{.mode = resolve_mode(o, file_mode), .seed = o.seed, .branch = o.branch};
  const cavmag::PointResult r = cavmag::run_point(params, opts);
  std::cout << cavmag::format_report(r);
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  if (o.config.empty()) throw cavmag::ConfigError("sweep: --config required");
  const cavmag::ConfigFile cfg = cavmag::load_config(o.config);
  cavmag::SweepGrid grid;
  grid.name = o.config;
  grid.mode = resolve_mode(o, cfg.mode);
  grid.fixed = cfg.params;
  grid.axes = cfg.axes;
  cavmag::validate(grid);
  emit_csv(o, grid, cavmag::run_sweep(grid, o.jobs, o.seed));
  return kExitOk;
}

int cmd_preset(const Options& o) {
  cavmag::SweepGrid grid;
  try {
    grid = cavmag::preset(o.preset);
  } catch (const cavmag::InvalidArgument& e) {
    throw cavmag::ConfigError(e.what());
  }
  if (o.mode && cavmag::parse_mode(*o.mode) != cavmag::Mode::effective) {
    throw cavmag::ConfigError("presets are defined in effective mode only");
  }
  if (!o.config.empty()) {
    // Overrides of the preset baseline; axes in the file replace the preset's.
    const cavmag::ConfigFile cfg = cavmag::load_config(o.config);
    for (const auto& [k, v] : cfg.params.values()) grid.fixed.set(k, v);
    if (!cfg.axes.empty()) grid.axes = cfg.axes;
  }
  emit_csv(o, grid, cavmag::run_sweep(grid, o.jobs, o.seed));
  return kExitOk;
}

int cmd_check(const Options& o) {
  const auto results = cavmag::run_invariant_checks(o.jobs, o.points);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  [" << r.detail << "]\n";
    failed += r.passed ? 0 : 1;
  }
  std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state entanglement of a driven cavity-magnon system"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "Parameter file (key = value)");
    sub->add_option("--mode", o.mode, "effective | microscopic")
        ->check(CLI::IsMember({"effective", "microscopic"}));
    sub->add_option("--seed", o.seed, "Seed for the microscopic-mode multistart");
  };

  CLI::App* point = app.add_subcommand("point", "Evaluate one parameter point and print a report");
  add_common(point);
  point->add_option("--preset", o.preset, "Start from a preset's baseline parameters");
  point->add_option("--branch", o.branch, "Mean-field branch index (microscopic mode)");

  CLI::App* sweep = app.add_subcommand("sweep", "Run the grid described in a config file");
  add_common(sweep);
  sweep->add_option("--out", o.out, "CSV output path (default stdout)");
  sweep->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

  CLI::App* preset = app.add_subcommand("preset", "Run a built-in grid: fig2, fig3, fig4");
  add_common(preset);
  preset->add_option("name", o.preset, "Preset name")->required();
  preset->add_option("--out", o.out, "CSV output path (default stdout)");
  preset->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

  CLI::App* check = app.add_subcommand("check", "Run the invariant suite");
  check->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  check->add_option("--points", o.points, "Points per preset axis")->check(CLI::Range(2, 1001));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (point->parsed()) return cmd_point(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (preset->parsed()) return cmd_preset(o);
    if (check->parsed()) return cmd_check(o);
  } catch (const cavmag::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cavmag::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cavmag::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const cavmag::NumericalError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const cavmag::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
