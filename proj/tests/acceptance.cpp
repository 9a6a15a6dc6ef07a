// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "cavmag/dynamics.hpp"
#include "cavmag/gaussian.hpp"
#include "cavmag/model.hpp"
#include "cavmag/steady_state.hpp"
#include "cavmag/sweep.hpp"
#include "cavmag/units.hpp"
#include "oracles.hpp"

using namespace cavmag;
using units::from_MHz;
using units::from_nHz;
using units::to_MHz;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_s;  // <= 0: none
  std::function<Outcome()> run;
};

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Preset sweeps are shared between the location criteria and the monogamy suite.
std::map<std::string, std::vector<SweepRecord>> g_preset_records;

const std::vector<SweepRecord>& preset_records(const std::string& name) {
  auto it = g_preset_records.find(name);
  if (it == g_preset_records.end()) it = g_preset_records.emplace(name, run_sweep(preset(name), workers())).first;
  return it->second;
}

const SweepRecord* argmax(const std::vector<SweepRecord>& recs, double EntanglementMeasures::*field) {
  const SweepRecord* best = nullptr;
  for (const auto& r : recs) {
    if (r.measures && (!best || (*r.measures).*field > (*best->measures).*field)) best = &r;
  }
  return best;
}

Outcome fig2_structure() {
  const SweepGrid g = preset("fig2");
  const auto& recs = preset_records("fig2");
  const EffectiveConfig base = to_effective(g.fixed);
  const double step_b = (g.axes[0].targets[0].max - g.axes[0].targets[0].min) / (g.axes[0].points - 1);
  const double step_a = (g.axes[1].targets[0].max - g.axes[1].targets[0].min) / (g.axes[1].points - 1);
  const double slack = 1e-9 * from_MHz(1.0);

  const SweepRecord* bc = argmax(recs, &EntanglementMeasures::E_bc);
  const SweepRecord* ab = argmax(recs, &EntanglementMeasures::E_ab);
  const SweepRecord* ac = argmax(recs, &EntanglementMeasures::E_ac);
  if (!bc || !ab || !ac) return {false, "no stable points"};
  const bool bc_ok = std::abs(bc->axis_values[0] - base.Delta_c_tilde) <= step_b + slack;
  const bool ab_ok = std::abs(ab->axis_values[1] + base.Delta_c_tilde) <= step_a + slack;
  const bool ac_ok = std::abs(ac->axis_values[1] + base.Delta_c_tilde) <= step_a + slack;

  // Matching line Delta_a = -Delta_c_tilde.
  bool tripartite = false;
  for (const auto& r : recs) {
    if (std::abs(r.axis_values[1] + base.Delta_c_tilde) <= 0.5 * step_a && r.measures && r.measures->R.min > 0.0) {
      tripartite = true;
    }
  }
  std::string d = "argmax E_bc at (Db~, Da) = (" + fmt("%.0f", to_MHz(bc->axis_values[0])) + ", " +
                  fmt("%.0f", to_MHz(bc->axis_values[1])) + ") MHz [want Db~ = " +
                  fmt("%.0f", to_MHz(base.Delta_c_tilde)) + "]" + (bc_ok ? "" : " X") + "; argmax E_ab at Da = " +
                  fmt("%.0f", to_MHz(ab->axis_values[1])) + (ab_ok ? "" : " X") + "; argmax E_ac at Da = " +
                  fmt("%.0f", to_MHz(ac->axis_values[1])) + (ac_ok ? "" : " X") + " [want " +
                  fmt("%.0f", -to_MHz(base.Delta_c_tilde)) + "]; R_min > 0 on matching line: " +
                  (tripartite ? "yes" : "no X");
  return {bc_ok && ab_ok && ac_ok && tripartite, d};
}

Outcome fig3_trends() {
  const SweepGrid g = preset("fig3");
  const auto& recs = preset_records("fig3");
  const double target = -to_effective(g.fixed).Delta_c_tilde;
  const std::size_t n2 = g.axes[1].points;
  std::size_t i1 = 0;
  for (std::size_t i = 0; i < g.axes[0].points; ++i) {
    if (std::abs(g.axes[0].value(0, i) - target) < std::abs(g.axes[0].value(0, i1) - target)) i1 = i;
  }
  std::vector<EntanglementMeasures> seq;
  for (std::size_t k = 0; k < n2; ++k) {
    const SweepRecord& r = recs[i1 * n2 + k];
    if (!r.measures) return {false, "unstable point at Kerr index " + std::to_string(k)};
    seq.push_back(*r.measures);
  }
  auto trend = [&](const char* name, auto get, bool increasing, bool& ok) {
    std::string s = std::string(name) + " ";
    bool mono = true;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      s += (k ? " -> " : "") + fmt("%.4g", get(seq[k]));
      if (k > 0) mono = mono && (increasing ? get(seq[k]) > get(seq[k - 1]) : get(seq[k]) < get(seq[k - 1]));
    }
    ok = ok && mono;
    return s + (mono ? "" : (increasing ? " (want increasing) X" : " (want decreasing) X"));
  };
  bool ok = true;
  std::string d = "at Da = " + fmt("%.0f", to_MHz(g.axes[0].value(0, i1))) + " MHz: ";
  d += trend("E_bc", [](const auto& m) { return m.E_bc; }, false, ok) + "; ";
  d += trend("E_ab", [](const auto& m) { return m.E_ab; }, true, ok) + "; ";
  d += trend("E_ac", [](const auto& m) { return m.E_ac; }, true, ok) + "; ";
  d += trend("R_min", [](const auto& m) { return m.R.min; }, true, ok);
  return {ok, d};
}

Outcome fig4_mst() {
  const auto& recs = preset_records("fig4");
  bool ok = true;
  std::string d;
  for (auto [name, field] : {std::pair{"E_ab", &EntanglementMeasures::E_ab}, {"E_bc", &EntanglementMeasures::E_bc},
                             {"E_ac", &EntanglementMeasures::E_ac}}) {
    bool mono = true;
    std::optional<double> t_star;
    for (std::size_t k = 0; k < recs.size(); ++k) {
      if (!recs[k].measures) {
        mono = false;
        continue;
      }
      const double e = (*recs[k].measures).*field;
      if (k > 0 && recs[k - 1].measures && e > (*recs[k - 1].measures).*field) mono = false;
      if (!t_star && e == 0.0) t_star = recs[k].axis_values[0];
    }
    const bool window = t_star && *t_star >= 0.10 && *t_star <= 0.25;
    ok = ok && mono && window;
    d += std::string(d.empty() ? "" : "; ") + name + (mono ? " monotone" : " non-monotone X") + ", T* = " +
         (t_star ? fmt("%.3f K", *t_star) : std::string("none")) + (window ? "" : " X");
  }
  return {ok, d};
}

Outcome energy_bookkeeping() {
  SweepGrid g = preset("fig2");
  const auto& ax = g.axes[0].targets[0];
  // Matching line Delta_a = -Delta_b_tilde across the fig2 range.
  g.axes = {{{{"Delta_b_tilde", ax.min, ax.max}, {"Delta_a", -ax.min, -ax.max}}, g.axes[0].points}};
  const auto recs = run_sweep(g, workers());
  double worst = 0.0, worst_at = 0.0;
  int checked = 0, bad = 0;
  for (const auto& r : recs) {
    if (!r.measures) continue;
    const ExcitationNumbers& n = r.measures->N;
    const double mag = n.b + n.c;
    if (mag <= 0.01) continue;
    ++checked;
    const double rel = std::abs(n.a - mag) / mag;
    if (rel > 0.25) ++bad;
    if (rel > worst) {
      worst = rel;
      worst_at = r.axis_values[0];
    }
  }
  return {checked > 0 && bad == 0,
          std::to_string(checked) + " points with N_b + N_c > 0.01, " + std::to_string(bad) +
              " outside 25%; worst |N_a - (N_b+N_c)|/(N_b+N_c) = " + fmt("%.3f", worst) + " at Db~ = " +
              fmt("%.0f MHz", to_MHz(worst_at))};
}

Outcome lyapunov_oracle() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  int done = 0, failures = 0;
  while (done < 100) {
    const EffectiveConfig c = oracle::random_effective(rng);
    const DriftMatrix A = build_drift(c);
    const StabilityReport s = is_stable(A);
    if (!s.stable) continue;
    const DiffusionMatrix D = build_diffusion(c);
    const Mat6 V = solve_lyapunov(A, D).entries();
    const Mat6 Vt =
        integrate_transient(A, D, CovarianceMatrix(), 30.0 / std::abs(s.margin), default_transient_step(A)).entries();
    const double err = (V - Vt).cwiseAbs().maxCoeff() / V.cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
    if (!(err < 1e-8)) ++failures;
    ++done;
  }
  return {failures == 0, "100 random stable configurations, worst relative deviation " + fmt("%.2e", worst)};
}

Outcome symplectic_oracle() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Mat4 V = oracle::random_physical_cm(2, rng);
    const double closed = min_pt_symplectic_eigenvalue_closed_form(V);
    const double generic = symplectic_eigenvalues(flip_momenta(V, {1}))[0];
    worst = std::max(worst, std::abs(closed - generic));
  }
  Mat6 v = 0.5 * Mat6::Identity();
  v.topLeftCorner<4, 4>() = oracle::two_mode_squeezed(0.5);
  const double e = log_negativity_pair(CovarianceMatrix(v), ModeLabel::a, ModeLabel::b);
  const bool ok = worst < 1e-10 && std::abs(e - 1.0) <= 1e-10;
  return {ok, "1000 random 4x4: max |nu_closed - nu_eig| = " + fmt("%.2e", worst) + "; TMSV r = 0.5: E_N - 1 = " +
                  fmt("%.2e", e - 1.0)};
}

Outcome monogamy() {
  std::size_t stable = 0, violations = 0;
  double worst = INFINITY;
  for (auto name : preset_names()) {
    for (const auto& r : preset_records(std::string(name))) {
      if (!r.measures) continue;
      ++stable;
      const ResidualContangle& R = r.measures->R;
      for (double x : {R.a_bc, R.b_ac, R.c_ab}) {
        worst = std::min(worst, x);
        if (x < -1e-9) ++violations;
      }
    }
  }
  return {stable > 0 && violations == 0, std::to_string(stable) + " stable points over fig2/fig3/fig4, " +
                                             std::to_string(violations) + " violations, min R = " +
                                             fmt("%.3e", worst)};
}

Outcome stability_cross_check() {
  std::mt19937_64 rng(4242);
  int disagree = 0, marginal = 0, stable = 0, unstable = 0;
  for (int t = 0; t < 10000; ++t) {
    const DriftMatrix A = t % 2 ? DriftMatrix{oracle::random_drift_pattern(rng)}
                                : build_drift(oracle::random_effective(rng));
    const StabilityReport s = is_stable(A);
    if (s.marginal) {
      ++marginal;
      continue;
    }
    if (s.routh_hurwitz != s.eigenvalue_test) ++disagree;
    (s.eigenvalue_test ? stable : unstable)++;
  }
  return {disagree == 0 && stable > 0 && unstable > 0,
          "10000 matrices: " + std::to_string(stable) + " stable, " + std::to_string(unstable) + " unstable, " +
              std::to_string(marginal) + " marginal, " + std::to_string(disagree) + " disagreements"};
}

Outcome mean_field_solver() {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> det(-200.0, -20.0), gam(2.0, 20.0), kerr(0.1, 1.0), frac(0.05, 2.0);
  double worst_cubic = 0.0;
  int mismatched = 0, multi = 0;
  for (int t = 0; t < 50; ++t) {
    BareConfig b;
    b.Delta_a = from_MHz(100.0);
    b.Delta_b = from_MHz(-100.0);
    b.gamma_a = b.gamma_b = from_MHz(5.0);
    b.Delta_c = from_MHz(det(rng));
    b.gamma_c = from_MHz(gam(rng));
    b.K_c = from_nHz(kerr(rng));
    b.K_b = from_nHz(0.1);
    const double n_star = frac(rng) * std::abs(b.Delta_c) / (2.0 * b.K_c);
    b.Omega_c = std::sqrt(oracle::kerr_cubic(n_star, b.Delta_c, b.K_c, b.gamma_c, 0.0));
    const auto roots = oracle::kerr_cubic_roots(b.Delta_c, b.K_c, b.gamma_c, b.Omega_c);
    std::mt19937_64 seeds(1000 + t);
    const BranchScan scan = branch_scan(b, 16, seeds);
    if (roots.size() > 1) ++multi;
    if (scan.branches.size() != roots.size()) {
      ++mismatched;
      continue;
    }
    for (std::size_t k = 0; k < roots.size(); ++k) {
      worst_cubic = std::max(worst_cubic, std::abs(std::norm(scan.branches[k].c_amp) - roots[k]) / roots[k]);
    }
  }

  std::uniform_real_distribution<double> d(-200.0, 200.0), r(2.0, 20.0), gc(0.0, 40.0), om(1e15, 1e17);
  double worst_linear = 0.0;
  const std::complex<double> I{0.0, 1.0};
  for (int t = 0; t < 50; ++t) {
    BareConfig b;
    b.Delta_a = from_MHz(d(rng));
    b.Delta_b = from_MHz(d(rng));
    b.Delta_c = from_MHz(d(rng));
    b.g_ab = from_MHz(gc(rng));
    b.gamma_a = from_MHz(r(rng));
    b.gamma_b = from_MHz(r(rng));
    b.gamma_c = from_MHz(r(rng));
    b.Omega_b = om(rng);
    b.Omega_c = om(rng);
    const MeanFieldState s = solve_mean_field(b);
    const auto want_b = -I * b.Omega_b / (I * b.Delta_b + b.gamma_b + b.g_ab * b.g_ab / (I * b.Delta_a + b.gamma_a));
    const auto want_c = -I * b.Omega_c / (I * b.Delta_c + b.gamma_c);
    worst_linear = std::max({worst_linear, std::abs(s.b_amp - want_b) / std::abs(want_b),
                             std::abs(s.c_amp - want_c) / std::abs(want_c)});
  }
  const bool ok = mismatched == 0 && worst_cubic < 1e-8 && worst_linear < 1e-12;
  return {ok, "50 Kerr cubics (" + std::to_string(multi) + " multistable, " + std::to_string(mismatched) +
                  " branch-count mismatches): worst rel. error " + fmt("%.2e", worst_cubic) +
                  "; 50 linear draws: worst rel. error " + fmt("%.2e", worst_linear)};
}

Outcome table1_consistency() {
  BareConfig b;
  b.Delta_a = from_MHz(100.0);
  b.Delta_b = from_MHz(-110.0);
  b.Delta_c = from_MHz(-185.5);
  b.K_b = from_nHz(0.1);
  b.K_c = from_nHz(0.6);
  b.G = from_nHz(0.5);
  b.g_ab = from_MHz(30.0);
  b.gamma_a = from_MHz(18.6);
  b.gamma_b = b.gamma_c = from_MHz(6.7);
  const EffectiveConfig e = derive_effective(b, 7.5e16, 2e16);
  const double eb = std::abs(to_MHz(e.Delta_b_tilde) + 70.0) / 70.0;
  const double ec = std::abs(to_MHz(e.Delta_c_tilde) + 100.0) / 100.0;
  const double eg = std::abs(to_MHz(e.G_tilde) - 19.4) / 19.4;
  return {eb < 0.005 && ec < 0.005 && eg < 0.005,
          "Db~ = " + fmt("%.3f", to_MHz(e.Delta_b_tilde)) + ", Dc~ = " + fmt("%.3f", to_MHz(e.Delta_c_tilde)) +
              ", G~ = " + fmt("%.3f", to_MHz(e.G_tilde)) + " MHz; worst rel. error " +
              fmt("%.2e", std::max({eb, ec, eg}))};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"fig2_structure", 60.0, fig2_structure},
      {"fig3_trends", 5.0, fig3_trends},
      {"fig4_mst", 5.0, fig4_mst},
      {"energy_bookkeeping", 10.0, energy_bookkeeping},
      {"lyapunov_oracle", 0.0, lyapunov_oracle},
      {"symplectic_oracle", 0.0, symplectic_oracle},
      {"monogamy", 0.0, monogamy},
      {"stability_cross_check", 0.0, stability_cross_check},
      {"mean_field_solver", 0.0, mean_field_solver},
      {"table1_consistency", 0.0, table1_consistency},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0.0 && secs > c.time_limit_s) {
      o.passed = false;
      o.detail += "; runtime limit " + fmt("%.0f s", c.time_limit_s) + " exceeded";
    }
    std::printf("%s  %-22s %7.2f s  %s\n", o.passed ? "PASS" : "FAIL", c.name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
    failed += o.passed ? 0 : 1;
  }
  std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
