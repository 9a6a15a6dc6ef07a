#include "cavmag/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "cavmag/errors.hpp"
#include "cavmag/units.hpp"

namespace cavmag {

namespace {

constexpr std::array<std::string_view, 14> kEffectiveKeys{
    "omega_a", "omega_b",   "omega_c", "Delta_a", "Delta_b_tilde", "Delta_c_tilde", "K_b_tilde",
    "K_c_tilde", "G_tilde", "g_ab",    "gamma_a", "gamma_b",       "gamma_c",       "T_e"};
constexpr std::array<std::string_view, 17> kBareKeys{
    "omega_a", "omega_b", "omega_c", "omega_d", "Delta_a", "Delta_b", "Delta_c", "K_b", "K_c",
    "G",       "g_ab",    "gamma_a", "gamma_b", "gamma_c", "Omega_b", "Omega_c", "T_e"};

bool used_by(Mode mode, std::string_view key) {
  if (mode == Mode::effective) {
    return std::find(kEffectiveKeys.begin(), kEffectiveKeys.end(), key) != kEffectiveKeys.end();
  }
  return std::find(kBareKeys.begin(), kBareKeys.end(), key) != kBareKeys.end();
}

std::string join(const std::vector<Violation>& v) {
  std::string out;
  for (const auto& x : v) {
    if (!out.empty()) out += "; ";
    out += x.message();
  }
  return out;
}

PointResult evaluate_effective(const EffectiveConfig& cfg, PointResult r) {
  if (auto v = validate(cfg); !v.empty()) throw ConfigError("invalid effective parameters: " + join(v));
  r.effective = cfg;
  const DriftMatrix A = build_drift(cfg);
  r.stability = is_stable(A);
  r.report.stable = r.stability.stable;
  if (!r.stability.note.empty()) {
    if (!r.diagnostics.empty()) r.diagnostics += "; ";
    r.diagnostics += r.stability.note;
  }
  if (!r.stability.stable) return r;
  const CovarianceMatrix V = solve_lyapunov(A, build_diffusion(cfg));
  r.report.measures = entanglement_measures(V);
  r.covariance = V;
  return r;
}

void append_joined(std::string& out, const std::vector<std::string>& parts) {
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
}

}  // namespace

std::size_t SweepGrid::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.points;
  return n;
}

ParameterSet SweepGrid::at(std::size_t i1, std::size_t i2) const {
  ParameterSet p = fixed;
  const std::array<std::size_t, 2> idx{i1, i2};
  for (std::size_t k = 0; k < axes.size() && k < 2; ++k) {
    for (std::size_t t = 0; t < axes[k].targets.size(); ++t) {
      p.set(axes[k].targets[t].name, axes[k].value(t, idx[k]));
    }
  }
  return p;
}

void validate(const SweepGrid& grid) {
  if (grid.axes.empty() || grid.axes.size() > 2) throw ConfigError("sweep grid needs one or two axes");
  for (std::size_t k = 0; k < grid.axes.size(); ++k) {
    const AxisSpec& a = grid.axes[k];
    const std::string where = "axis" + std::to_string(k + 1);
    if (a.points < 2) throw ConfigError(where + ": at least 2 points required");
    if (a.targets.empty()) throw ConfigError(where + ": no parameter");
    for (const auto& t : a.targets) {
      if (!find_parameter(t.name)) throw ConfigError(where + ": unknown parameter '" + t.name + "'");
      if (!std::isfinite(t.min) || !std::isfinite(t.max)) throw ConfigError(where + ": range must be finite");
      if (!used_by(grid.mode, t.name)) {
        throw ConfigError(where + ": parameter '" + t.name + "' is not used in " +
                          std::string(to_string(grid.mode)) + " mode");
      }
    }
  }
}

PointResult run_point(const EffectiveConfig& cfg) { return evaluate_effective(cfg, {}); }

PointResult run_point(const ParameterSet& params, const PointOptions& options) {
  if (options.mode == Mode::effective) return evaluate_effective(to_effective(params), {});

  const BareConfig bare = to_bare(params);
  if (auto v = validate(bare); !v.empty()) throw ConfigError("invalid bare parameters: " + join(v));

  std::mt19937_64 rng(options.seed);
  const BranchScan scan = branch_scan(bare, options.n_seeds, rng);
  PointResult r;
  append_joined(r.diagnostics, scan.diagnostics);
  if (scan.branches.empty()) throw SolverFailure("run_point: no mean-field fixed point found", {});

  MeanFieldState state;
  try {
    state = select_branch(scan, options.branch);
  } catch (const SolverFailure&) {
    if (options.branch) throw;
    // Fixed points exist but none is stable: report the continuation branch
    // (or the smallest one) as unstable.
    state = scan.branches[scan.continuation_branch.value_or(0)];
  }
  r.mean_field = state;
  if (!r.diagnostics.empty()) r.diagnostics += "; ";
  r.diagnostics += std::to_string(scan.branches.size()) + " branch(es)";
  return evaluate_effective(effective_from_state(bare, state), std::move(r));
}

std::uint64_t point_seed(std::uint64_t global_seed, std::size_t index) {
  // splitmix64 of the combined key
  std::uint64_t z = global_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<SweepRecord> run_sweep(const SweepGrid& grid, unsigned workers, std::uint64_t seed) {
  validate(grid);
  const std::size_t n1 = grid.axes[0].points;
  const std::size_t n2 = grid.axes.size() > 1 ? grid.axes[1].points : 1;
  std::vector<SweepRecord> records(n1 * n2);

  auto evaluate = [&](std::size_t index) {
    SweepRecord& rec = records[index];
    rec.i1 = index / n2;
    rec.i2 = index % n2;
    for (std::size_t k = 0; k < grid.axes.size(); ++k) {
      const std::size_t i = k == 0 ? rec.i1 : rec.i2;
      for (std::size_t t = 0; t < grid.axes[k].targets.size(); ++t) {
        rec.axis_values.push_back(grid.axes[k].value(t, i));
      }
    }
    try {
      const PointResult r = run_point(grid.at(rec.i1, rec.i2),
                                      {.mode = grid.mode, .seed = point_seed(seed, index), .branch = std::nullopt});
      rec.stable = r.report.stable;
      rec.measures = r.report.measures;
      rec.diagnostics = r.diagnostics;
    } catch (const std::exception& e) {
      rec.stable = false;
      rec.measures.reset();
      rec.diagnostics = std::string("error: ") + e.what();
    }
  };

  workers = std::max(1u, workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < records.size(); ++i) evaluate(i);
    return records;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < records.size(); i = next.fetch_add(1)) evaluate(i);
      });
    }
  }
  return records;
}

namespace {

ParameterSet table1_common() {
  ParameterSet p;
  p.set("omega_a", units::from_MHz(10070.0));
  p.set("omega_b", units::from_MHz(9860.0));
  p.set("omega_c", units::from_MHz(9784.5));
  p.set("Delta_c_tilde", units::from_MHz(-100.0));
  p.set("G_tilde", units::from_MHz(19.4));
  p.set("T_e", 0.0);
  return p;
}

ParameterSet fig34_common() {
  ParameterSet p = table1_common();
  p.set("g_ab", units::from_MHz(30.0));
  p.set("gamma_a", units::from_MHz(18.6));
  p.set("gamma_b", units::from_MHz(6.7));
  p.set("gamma_c", units::from_MHz(6.7));
  p.set("Delta_b_tilde", units::from_MHz(-70.0));
  p.set("Delta_a", units::from_MHz(100.0));
  return p;
}

AxisSpec mhz_axis(std::string name, double lo, double hi, std::size_t points) {
  return {{{std::move(name), units::from_MHz(lo), units::from_MHz(hi)}}, points};
}

}  // namespace

std::vector<std::string_view> preset_names() { return {"fig2", "fig3", "fig4"}; }

SweepGrid preset(std::string_view name) {
  SweepGrid g;
  g.name = std::string(name);
  g.mode = Mode::effective;
  if (name == "fig2") {
    g.fixed = table1_common();
    g.fixed.set("g_ab", units::from_MHz(35.0));
    g.fixed.set("gamma_a", units::from_MHz(5.5));
    g.fixed.set("gamma_b", units::from_MHz(12.0));
    g.fixed.set("gamma_c", units::from_MHz(12.0));
    g.fixed.set("K_b_tilde", 0.0);
    g.fixed.set("K_c_tilde", 0.0);
    g.fixed.set("Delta_b_tilde", units::from_MHz(-100.0));
    g.fixed.set("Delta_a", units::from_MHz(100.0));
    g.axes.push_back(mhz_axis("Delta_b_tilde", -200.0, 0.0, 101));
    g.axes.push_back(mhz_axis("Delta_a", -200.0, 200.0, 101));
  } else if (name == "fig3") {
    g.fixed = fig34_common();
    g.fixed.set("K_b_tilde", 0.0);
    g.fixed.set("K_c_tilde", 0.0);
    g.axes.push_back(mhz_axis("Delta_a", 0.0, 200.0, 101));
    // (K_b, K_c) / 2pi = (0, 0), (7.5, 12), (15, 24) MHz
    g.axes.push_back({{{"K_b_tilde", 0.0, units::from_MHz(15.0)}, {"K_c_tilde", 0.0, units::from_MHz(24.0)}}, 3});
  } else if (name == "fig4") {
    g.fixed = fig34_common();
    g.fixed.set("K_b_tilde", units::from_MHz(15.0));
    g.fixed.set("K_c_tilde", units::from_MHz(24.0));
    g.axes.push_back({{{"T_e", 0.0, 0.3}}, 61});
  } else {
    throw InvalidArgument("unknown preset '" + std::string(name) + "' (expected fig2|fig3|fig4)");
  }
  return g;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::vector<std::string> csv_header(const SweepGrid& grid) {
  std::vector<std::string> cols{"i1"};
  if (grid.axes.size() > 1) cols.emplace_back("i2");
  for (const auto& axis : grid.axes) {
    for (const auto& t : axis.targets) {
      const ParameterInfo* info = find_parameter(t.name);
      cols.push_back(t.name + "_" + std::string(suffix(info ? info->unit : Unit::MHz)));
    }
  }
  for (const char* c : {"E_ab", "E_bc", "E_ac", "E_a_bc", "E_b_ac", "E_c_ab", "R_a_bc", "R_b_ac", "R_c_ab",
                        "R_min", "N_a", "N_b", "N_c", "stable", "min_symplectic_eigenvalue", "diagnostics"}) {
    cols.emplace_back(c);
  }
  return cols;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const SweepGrid& grid, const std::vector<SweepRecord>& records) {
  out << kCsvSchemaLine << '\n';
  const auto header = csv_header(grid);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';

  std::vector<Unit> axis_units;
  for (const auto& axis : grid.axes) {
    for (const auto& t : axis.targets) {
      const ParameterInfo* info = find_parameter(t.name);
      axis_units.push_back(info ? info->unit : Unit::MHz);
    }
  }

  for (const SweepRecord& r : records) {
    std::string line = std::to_string(r.i1);
    if (grid.axes.size() > 1) line += "," + std::to_string(r.i2);
    for (std::size_t k = 0; k < r.axis_values.size(); ++k) {
      line += "," + format_double(to_file(axis_units[k], r.axis_values[k]));
    }
    if (r.measures) {
      const EntanglementMeasures& m = *r.measures;
      for (double v : {m.E_ab, m.E_bc, m.E_ac, m.E_a_bc, m.E_b_ac, m.E_c_ab, m.R.a_bc, m.R.b_ac, m.R.c_ab,
                       m.R.min, m.N.a, m.N.b, m.N.c}) {
        line += "," + format_double(v);
      }
    } else {
      line += std::string(13, ',');
    }
    line += r.stable ? ",1" : ",0";
    line += "," + (r.measures ? format_double(r.measures->min_symplectic_eigenvalue) : std::string());
    line += "," + csv_escape(r.diagnostics);
    out << line << '\n';
  }
}

std::string format_report(const PointResult& r) {
  std::ostringstream os;
  auto fmt = [](double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 10);
    return std::string(buf.data(), res.ptr);
  };
  const EffectiveConfig& e = r.effective;
  auto mhz = [&fmt](double v) { return fmt(units::to_MHz(v)); };
  os << "effective parameters (MHz, 2pi convention):\n"
     << "  Delta_a = " << mhz(e.Delta_a) << ", Delta_b_tilde = " << mhz(e.Delta_b_tilde)
     << ", Delta_c_tilde = " << mhz(e.Delta_c_tilde) << "\n"
     << "  K_b_tilde = " << mhz(e.K_b_tilde) << ", K_c_tilde = " << mhz(e.K_c_tilde)
     << ", G_tilde = " << mhz(e.G_tilde) << ", g_ab = " << mhz(e.g_ab) << "\n"
     << "  gamma = (" << mhz(e.gamma_a) << ", " << mhz(e.gamma_b) << ", " << mhz(e.gamma_c) << ")"
     << ", n = (" << fmt(e.n_a) << ", " << fmt(e.n_b) << ", " << fmt(e.n_c)
     << ")\n";
  if (r.mean_field) {
    const MeanFieldState& s = *r.mean_field;
    os << "mean field: |<a>|^2 = " << fmt(std::norm(s.a_amp))
       << ", |<b>|^2 = " << fmt(std::norm(s.b_amp))
       << ", |<c>|^2 = " << fmt(std::norm(s.c_amp))
       << ", residual = " << fmt(s.residual_norm) << "\n";
  }
  os << "stable: " << (r.report.stable ? "yes" : "no")
     << " (max Re(lambda) = " << mhz(r.stability.margin) << " MHz)\n";
  if (r.report.measures) {
    const EntanglementMeasures& m = *r.report.measures;
    os << "E_ab = " << fmt(m.E_ab) << "\n"
       << "E_bc = " << fmt(m.E_bc) << "\n"
       << "E_ac = " << fmt(m.E_ac) << "\n"
       << "E_a|bc = " << fmt(m.E_a_bc) << ", E_b|ac = " << fmt(m.E_b_ac)
       << ", E_c|ab = " << fmt(m.E_c_ab) << "\n"
       << "R_a|bc = " << fmt(m.R.a_bc) << ", R_b|ac = " << fmt(m.R.b_ac)
       << ", R_c|ab = " << fmt(m.R.c_ab) << "\n"
       << "R_min = " << fmt(m.R.min) << "\n"
       << "N_a = " << fmt(m.N.a) << ", N_b = " << fmt(m.N.b)
       << ", N_c = " << fmt(m.N.c) << "\n"
       << "min symplectic eigenvalue = " << fmt(m.min_symplectic_eigenvalue) << "\n";
  }
  if (!r.diagnostics.empty()) os << "diagnostics: " << r.diagnostics << "\n";
  return os.str();
}

namespace {

EffectiveConfig random_effective(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> det(-200.0, 200.0), rate(3.0, 20.0), coupling(0.0, 40.0),
      kerr(-30.0, 30.0), gt(0.0, 25.0);
  EffectiveConfig c;
  c.Delta_a = units::from_MHz(det(rng));
  c.Delta_b_tilde = units::from_MHz(det(rng));
  c.Delta_c_tilde = units::from_MHz(det(rng));
  c.K_b_tilde = units::from_MHz(kerr(rng));
  c.K_c_tilde = units::from_MHz(kerr(rng));
  c.G_tilde = units::from_MHz(gt(rng));
  c.g_ab = units::from_MHz(coupling(rng));
  c.gamma_a = units::from_MHz(rate(rng));
  c.gamma_b = units::from_MHz(rate(rng));
  c.gamma_c = units::from_MHz(rate(rng));
  return c;
}

}  // namespace

std::vector<CheckResult> run_invariant_checks(unsigned workers, std::size_t points) {
  std::vector<CheckResult> out;

  for (std::string_view name : preset_names()) {
    SweepGrid g = preset(name);
    for (auto& axis : g.axes) {
      if (axis.points > 3) axis.points = std::max<std::size_t>(points, 2);
    }
    const auto records = run_sweep(g, workers);
    std::size_t stable = 0, errors = 0, monogamy = 0, negative = 0, ppt = 0;
    for (const auto& r : records) {
      if (r.diagnostics.starts_with("error:")) ++errors;
      if (!r.measures) continue;
      ++stable;
      const auto& m = *r.measures;
      if (m.R.a_bc < -1e-9 || m.R.b_ac < -1e-9 || m.R.c_ab < -1e-9) ++monogamy;
      for (double e : {m.E_ab, m.E_bc, m.E_ac, m.E_a_bc, m.E_b_ac, m.E_c_ab}) {
        if (e < 0.0) ++negative;
      }
      if (m.N.a < -1e-9 || m.N.b < -1e-9 || m.N.c < -1e-9) ++negative;
      // A bipartite split cannot be entangled while a coarser split containing it is not.
      if ((m.E_ab > 0.0 || m.E_ac > 0.0) && m.E_a_bc == 0.0) ++ppt;
    }
    const std::string label = std::string(name) + " (" + std::to_string(records.size()) + " points)";
    out.push_back({label + ": no evaluation errors", errors == 0,
                   std::to_string(errors) + " errors, " + std::to_string(stable) + " stable"});
    out.push_back({label + ": monogamy R >= -1e-9", monogamy == 0, std::to_string(monogamy) + " violations"});
    out.push_back({label + ": non-negative measures", negative == 0, std::to_string(negative) + " violations"});
    out.push_back({label + ": a|bc split consistent with pairs", ppt == 0, std::to_string(ppt) + " violations"});
  }

  {
    std::mt19937_64 rng(20240611);
    int disagreements = 0, marginal = 0;
    const int n = 2000;
    for (int i = 0; i < n; ++i) {
      const StabilityReport s = is_stable(build_drift(random_effective(rng)));
      if (s.marginal) {
        ++marginal;
      } else if (s.routh_hurwitz != s.eigenvalue_test) {
        ++disagreements;
      }
    }
    out.push_back({"Routh-Hurwitz vs eigenvalues (" + std::to_string(n) + " random drift matrices)",
                   disagreements == 0,
                   std::to_string(disagreements) + " disagreements, " + std::to_string(marginal) + " marginal"});
  }

  {
    std::mt19937_64 rng(7);
    double worst = 0.0;
    int done = 0;
    while (done < 5) {
      const EffectiveConfig c = random_effective(rng);
      const DriftMatrix A = build_drift(c);
      const StabilityReport s = is_stable(A);
      if (!s.stable) continue;
      const DiffusionMatrix D = build_diffusion(c);
      const CovarianceMatrix V = solve_lyapunov(A, D);
      const CovarianceMatrix Vt =
          integrate_transient(A, D, CovarianceMatrix::vacuum(), 30.0 / std::abs(s.margin), default_transient_step(A));
      worst = std::max(worst, (V.entries() - Vt.entries()).cwiseAbs().maxCoeff() / V.entries().cwiseAbs().maxCoeff());
      ++done;
    }
    out.push_back({"Lyapunov solve vs transient integration (5 random configurations)", worst < 1e-8,
                   "max relative deviation " + format_double(worst)});
  }
  return out;
}

}  // namespace cavmag
