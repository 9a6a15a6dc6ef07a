#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cavmag/dynamics.hpp"
#include "cavmag/gaussian.hpp"
#include "cavmag/parameters.hpp"
#include "cavmag/steady_state.hpp"

namespace cavmag {

/// Sweep over one or two axes around a fixed parameter set.
struct SweepGrid {
  std::string name;
  Mode mode = Mode::effective;
  ParameterSet fixed;
  std::vector<AxisSpec> axes;  // 1 or 2

  std::size_t size() const;
  /// Parameters at grid point (i1, i2); i2 is ignored for 1-D grids.
  ParameterSet at(std::size_t i1, std::size_t i2 = 0) const;
};

/// Throws ConfigError on an invalid grid (missing axes, < 2 points,
/// non-finite range, axis parameter not used by the grid's mode).
void validate(const SweepGrid& grid);

struct PointOptions {
  Mode mode = Mode::effective;
  std::uint64_t seed = 0;                // microscopic-mode multistart
  std::optional<std::size_t> branch;     // explicit branch index
  int n_seeds = 16;
};

/// Result of one evaluation of the pipeline
/// (mean field ->) drift/diffusion -> Lyapunov -> Gaussian measures.
struct PointResult {
  EntanglementReport report;
  StabilityReport stability;
  EffectiveConfig effective;
  std::optional<MeanFieldState> mean_field;  // microscopic mode only
  std::optional<CovarianceMatrix> covariance;  // stable points only
  std::string diagnostics;
};

PointResult run_point(const EffectiveConfig& cfg);
PointResult run_point(const ParameterSet& params, const PointOptions& options = {});

struct SweepRecord {
  std::size_t i1 = 0, i2 = 0;
  std::vector<double> axis_values;  // one per axis target, internal units
  bool stable = false;
  std::optional<EntanglementMeasures> measures;
  std::string diagnostics;
};

/// Evaluates every grid point on `workers` threads. Records come back in
/// row-major (i1, i2) order and do not depend on the worker count; per-point
/// errors end up in `diagnostics`.
std::vector<SweepRecord> run_sweep(const SweepGrid& grid, unsigned workers = 1,
                                   std::uint64_t seed = 0);

/// Built-in grids reproducing the three figure families: "fig2", "fig3", "fig4".
/// Throws InvalidArgument for an unknown name.
SweepGrid preset(std::string_view name);
std::vector<std::string_view> preset_names();

/// Per-point seed for microscopic-mode multistart.
std::uint64_t point_seed(std::uint64_t global_seed, std::size_t index);

/// First line of every sweep CSV.
inline constexpr std::string_view kCsvSchemaLine = "# cavmag-sweep v1";

std::vector<std::string> csv_header(const SweepGrid& grid);
void write_csv(std::ostream& out, const SweepGrid& grid, const std::vector<SweepRecord>& records);

/// Shortest decimal representation that round-trips.
std::string format_double(double v);

/// Human-readable summary of one point.
std::string format_report(const PointResult& r);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Invariant suite behind `cavmag check`: preset sweeps (at `points` per
/// axis), monogamy, PPT consistency, Routh-Hurwitz cross-check and the
/// transient Lyapunov oracle.
std::vector<CheckResult> run_invariant_checks(unsigned workers, std::size_t points = 41);

}  // namespace cavmag
