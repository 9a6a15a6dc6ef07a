#include "cavmag/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

namespace cavmag {

namespace {

using cplx = std::complex<double>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Jac4 = Eigen::Matrix<double, 4, 4>;
constexpr cplx I{0.0, 1.0};

struct Amplitudes {
  cplx b, c;
};

Amplitudes unpack(const Vec4& x) { return {{x(0), x(1)}, {x(2), x(3)}}; }
Vec4 pack(cplx b, cplx c) { return {b.real(), b.imag(), c.real(), c.imag()}; }

cplx cavity_factor(const BareConfig& bare) {
  return bare.g_ab * bare.g_ab / (I * bare.Delta_a + bare.gamma_a);
}

Vec4 residual(const Vec4& x, const BareConfig& p) {
  const auto [b, c] = unpack(x);
  const double nb = std::norm(b), nc = std::norm(c);
  const cplx fb = -(I * p.Delta_b + p.gamma_b) * b - 2.0 * I * p.K_b * nb * b - I * p.G * nc * b -
                  I * p.Omega_b - cavity_factor(p) * b;
  const cplx fc = -(I * p.Delta_c + p.gamma_c) * c - 2.0 * I * p.K_c * nc * c - I * p.G * nb * c -
                  I * p.Omega_c;
  return pack(fb, fc);
}

Jac4 jacobian(const Vec4& x, const BareConfig& p) {
  const auto [b, c] = unpack(x);
  const double nb = std::norm(b), nc = std::norm(c);

  // Wirtinger derivatives d/dz and d/dz* of each residual.
  const cplx fb_b = -(I * p.Delta_b + p.gamma_b) - 4.0 * I * p.K_b * nb - I * p.G * nc - cavity_factor(p);
  const cplx fb_bc = -2.0 * I * p.K_b * b * b;
  const cplx fb_c = -I * p.G * b * std::conj(c);
  const cplx fb_cc = -I * p.G * b * c;
  const cplx fc_c = -(I * p.Delta_c + p.gamma_c) - 4.0 * I * p.K_c * nc - I * p.G * nb;
  const cplx fc_cc = -2.0 * I * p.K_c * c * c;
  const cplx fc_b = -I * p.G * c * std::conj(b);
  const cplx fc_bc = -I * p.G * c * b;

  Jac4 j;
  auto fill = [&j](int row, cplx dz, cplx dzc, int col) {
    const cplx dx = dz + dzc;
    const cplx dy = I * (dz - dzc);
    j(row, col) = dx.real();
    j(row + 1, col) = dx.imag();
    j(row, col + 1) = dy.real();
    j(row + 1, col + 1) = dy.imag();
  };
  fill(0, fb_b, fb_bc, 0);
  fill(0, fb_c, fb_cc, 2);
  fill(2, fc_b, fc_bc, 0);
  fill(2, fc_c, fc_cc, 2);
  return j;
}

MeanFieldState make_state(const Vec4& x, const BareConfig& bare, double rel_residual, int iterations) {
  MeanFieldState s;
  const auto [b, c] = unpack(x);
  s.b_amp = b;
  s.c_amp = c;
  s.a_amp = eliminate_cavity(b, bare);
  s.residual_norm = rel_residual;
  s.iterations = iterations;
  return s;
}

double distance(const MeanFieldState& u, const MeanFieldState& v) {
  return std::sqrt(std::norm(u.b_amp - v.b_amp) + std::norm(u.c_amp - v.c_amp));
}

double magnitude(const MeanFieldState& u) { return std::sqrt(std::norm(u.b_amp) + std::norm(u.c_amp)); }

// Polar sample in the complex plane with the given occupation |z|^2.
cplx polar_seed(double occupation, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  return std::polar(std::sqrt(occupation), phase(rng));
}

// Newton on the deflated system M(x) F(x) with
// M(x) = prod_i (s_i^2 / |x - r_i|^2 + 1), s_i = max(1, |r_i|),
// which removes the known roots r_i from the basin structure.
std::optional<Vec4> deflated_newton(const BareConfig& bare, Vec4 x, const std::vector<Vec4>& roots,
                                    const MeanFieldTolerances& tol) {
  const double scale = residual_scale(bare);
  auto merit = [&](const Vec4& y, const Vec4& fy) {
    double m = 1.0;
    for (const Vec4& r : roots) {
      const double s2 = std::max(1.0, r.squaredNorm());
      m *= s2 / std::max((y - r).squaredNorm(), 1e-300) + 1.0;
    }
    return m * fy.norm();
  };
  Vec4 f = residual(x, bare);
  for (int it = 0; it < tol.max_iterations; ++it) {
    if (!f.allFinite()) return std::nullopt;
    if (f.norm() <= tol.convergence * scale) return x;
    const Eigen::FullPivLU<Jac4> lu(jacobian(x, bare));
    if (!lu.isInvertible()) return std::nullopt;
    const Vec4 delta = lu.solve(-f);
    // Sherman-Morrison form of the deflated Newton step.
    double gd = 0.0;
    for (const Vec4& r : roots) {
      const Vec4 e = x - r;
      const double d2 = std::max(e.squaredNorm(), 1e-300);
      const double s2 = std::max(1.0, r.squaredNorm());
      const double term = s2 / d2;
      gd += -2.0 * term / d2 * e.dot(delta) / (term + 1.0);
    }
    const double denom = 1.0 - gd;
    const Vec4 step = std::abs(denom) > 1e-12 ? Vec4(delta / denom) : delta;
    const double m0 = merit(x, f);
    double lambda = 1.0;
    Vec4 trial = x + step;
    Vec4 ft = residual(trial, bare);
    while (!(merit(trial, ft) < (1.0 - 1e-4 * lambda) * m0) && lambda > 1.0 / 1024.0) {
      lambda *= 0.5;
      trial = x + lambda * step;
      ft = residual(trial, bare);
    }
    x = trial;
    f = ft;
  }
  return std::nullopt;
}

}  // namespace

std::complex<double> eliminate_cavity(std::complex<double> b_amp, const BareConfig& bare) {
  return -I * bare.g_ab * b_amp / (I * bare.Delta_a + bare.gamma_a);
}

std::array<double, 4> mean_field_residual(const MeanFieldState& state, const BareConfig& bare) {
  const Vec4 f = residual(pack(state.b_amp, state.c_amp), bare);
  return {f(0), f(1), f(2), f(3)};
}

double residual_scale(const BareConfig& bare) {
  return std::max({1.0, std::abs(bare.Omega_b), std::abs(bare.Omega_c)});
}

StabilityReport state_stability(const MeanFieldState& state, const BareConfig& bare) {
  return is_stable(build_drift(effective_from_state(bare, state)));
}

MeanFieldState solve_mean_field(const BareConfig& bare, std::optional<MeanFieldState> seed,
                                const MeanFieldTolerances& tol) {
  const double scale = residual_scale(bare);
  Vec4 x = seed ? pack(seed->b_amp, seed->c_amp) : Vec4::Zero();
  Vec4 f = residual(x, bare);
  double fnorm = f.norm();
  Vec4 best = x;
  double best_norm = fnorm;

  for (int it = 0; it <= tol.max_iterations; ++it) {
    if (!std::isfinite(fnorm)) break;
    if (fnorm <= tol.convergence * scale) {
      MeanFieldState s = make_state(x, bare, fnorm / scale, it);
      s.converged = true;
      const StabilityReport stab = state_stability(s, bare);
      s.stable = stab.stable;
      s.stability_margin = stab.margin;
      return s;
    }
    if (it == tol.max_iterations) break;

    const Jac4 jac = jacobian(x, bare);
    const Eigen::FullPivLU<Jac4> lu(jac);
    if (!lu.isInvertible()) break;
    const Vec4 step = lu.solve(-f);

    // Backtracking on ||F||; accept the shortest step if nothing decreases.
    double lambda = 1.0;
    Vec4 trial = x + step;
    Vec4 ftrial = residual(trial, bare);
    while (!(ftrial.norm() < (1.0 - 1e-4 * lambda) * fnorm) && lambda > 1.0 / 1024.0) {
      lambda *= 0.5;
      trial = x + lambda * step;
      ftrial = residual(trial, bare);
    }
    x = trial;
    f = ftrial;
    fnorm = f.norm();
    if (fnorm < best_norm) {
      best_norm = fnorm;
      best = x;
    }
  }

  MeanFieldState b = make_state(best, bare, best_norm / scale, tol.max_iterations);
  throw SolverFailure("solve_mean_field: no convergence after " + std::to_string(tol.max_iterations) +
                          " iterations (relative residual " + std::to_string(best_norm / scale) + ")",
                      b);
}

BranchScan branch_scan(const BareConfig& bare, int n_seeds, std::mt19937_64& rng,
                       const MeanFieldTolerances& tol) {
  if (n_seeds < 1) throw InvalidArgument("branch_scan: n_seeds must be >= 1");
  BranchScan scan;

  auto add = [&](const MeanFieldState& s) -> std::size_t {
    for (std::size_t i = 0; i < scan.branches.size(); ++i) {
      const double ref = std::max({1.0, magnitude(s), magnitude(scan.branches[i])});
      if (distance(s, scan.branches[i]) <= tol.dedup * ref) return i;
    }
    scan.branches.push_back(s);
    return scan.branches.size() - 1;
  };

  // Continuation in the drive amplitude from the undriven origin.
  std::optional<MeanFieldState> previous = MeanFieldState{};
  double s_prev = 0.0;
  bool continuation_ok = true;
  for (int k = 1; k <= kContinuationSteps && continuation_ok; ++k) {
    const double s_target = std::pow(1e-6, static_cast<double>(kContinuationSteps - k) /
                                               static_cast<double>(kContinuationSteps - 1));
    // Bisect the step when Newton fails (near folds).
    double s_lo = s_prev;
    double s_hi = s_target;
    int depth = 0;
    while (s_lo < s_target) {
      BareConfig scaled = bare;
      scaled.Omega_b *= s_hi;
      scaled.Omega_c *= s_hi;
      try {
        previous = solve_mean_field(scaled, previous, tol);
        s_lo = s_hi;
        s_hi = s_target;
        depth = 0;
      } catch (const SolverFailure&) {
        if (++depth > 8) {
          continuation_ok = false;
          scan.diagnostics.push_back("continuation stalled at drive scale " + std::to_string(s_lo));
          break;
        }
        s_hi = 0.5 * (s_lo + s_hi);
      }
    }
    s_prev = s_target;
  }
  // The last continuation step is the unscaled problem.
  if (continuation_ok && previous) scan.continuation_branch = add(*previous);

  // Random seeds: half uniform over the disk |amp|^2 <= limit, half with
  // log-uniform occupation so small-amplitude branches are also sampled.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_lo = -2.0;
  const double log_hi = std::log10(kSeedOccupationLimit);
  std::vector<MeanFieldState> starts{MeanFieldState{}};
  for (int k = 0; k < n_seeds; ++k) {
    MeanFieldState seed;
    for (cplx* z : {&seed.b_amp, &seed.c_amp}) {
      const double occ = (k % 2 == 0) ? kSeedOccupationLimit * unit(rng)
                                      : std::pow(10.0, log_lo + (log_hi - log_lo) * unit(rng));
      *z = polar_seed(occ, rng);
    }
    starts.push_back(seed);
  }
  int failures = 0;
  for (std::size_t k = 1; k < starts.size(); ++k) {
    try {
      add(solve_mean_field(bare, starts[k], tol));
    } catch (const SolverFailure&) {
      ++failures;
    }
  }
  if (failures > 0) {
    scan.diagnostics.push_back(std::to_string(failures) + " of " + std::to_string(n_seeds) +
                               " random seeds did not converge");
  }

  // Deflation: restart from every start point with the known branches
  // removed, until no new fixed point turns up.
  for (const MeanFieldState& start : starts) {
    for (int round = 0; round < kMaxDeflationRounds; ++round) {
      std::vector<Vec4> known;
      for (const auto& b : scan.branches) known.push_back(pack(b.b_amp, b.c_amp));
      const auto x = deflated_newton(bare, pack(start.b_amp, start.c_amp), known, tol);
      if (!x) break;
      const auto [bx, cx] = unpack(*x);
      MeanFieldState polish;
      polish.b_amp = bx;
      polish.c_amp = cx;
      const std::size_t before = scan.branches.size();
      try {
        add(solve_mean_field(bare, polish, tol));
      } catch (const SolverFailure&) {
        break;
      }
      if (scan.branches.size() == before) break;
    }
  }

  // Deterministic order; keep track of the continuation branch.
  std::optional<MeanFieldState> cont;
  if (scan.continuation_branch) cont = scan.branches[*scan.continuation_branch];
  std::stable_sort(scan.branches.begin(), scan.branches.end(),
                   [](const MeanFieldState& u, const MeanFieldState& v) { return magnitude(u) < magnitude(v); });
  if (cont) {
    for (std::size_t i = 0; i < scan.branches.size(); ++i) {
      if (distance(scan.branches[i], *cont) == 0.0) scan.continuation_branch = i;
    }
  }
  if (scan.branches.empty()) scan.diagnostics.push_back("no fixed point found");
  return scan;
}

MeanFieldState select_branch(const BranchScan& scan, std::optional<std::size_t> index) {
  if (index) {
    if (*index >= scan.branches.size()) {
      throw SolverFailure("select_branch: branch " + std::to_string(*index) + " requested but only " +
                              std::to_string(scan.branches.size()) + " found",
                          {});
    }
    return scan.branches[*index];
  }
  if (scan.continuation_branch && scan.branches[*scan.continuation_branch].stable) {
    return scan.branches[*scan.continuation_branch];
  }
  for (const auto& s : scan.branches) {
    if (s.stable) return s;
  }
  throw SolverFailure("select_branch: no stable fixed point found", {});
}

}  // namespace cavmag
