#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cavmag/dynamics.hpp"
#include "cavmag/errors.hpp"
#include "cavmag/model.hpp"

namespace cavmag {

/// Classical steady-state amplitudes <a>, <b>, <c> (|<o>|^2 is the mean
/// excitation number) plus solver diagnostics.
struct MeanFieldState {
  std::complex<double> a_amp{};
  std::complex<double> b_amp{};
  std::complex<double> c_amp{};
  bool stable = false;
  bool converged = false;
  double residual_norm = 0.0;  // ||F|| / max(1, |Omega_b|, |Omega_c|)
  int iterations = 0;
  double stability_margin = 0.0;  // rad/s
};

struct MeanFieldTolerances {
  double convergence = 1e-10;  // relative residual
  double dedup = 1e-6;         // relative branch distance
  int max_iterations = 200;
};

/// Thrown when Newton does not converge; carries the best iterate.
class SolverFailure : public NumericalError {
 public:
  SolverFailure(const std::string& what, MeanFieldState best)
      : NumericalError(what), best_(best) {}
  const MeanFieldState& best_iterate() const { return best_; }

 private:
  MeanFieldState best_;
};

/// <a> = -i g_ab <b> / (i Delta_a + gamma_a).
std::complex<double> eliminate_cavity(std::complex<double> b_amp, const BareConfig& bare);

/// Re/Im of the b and c steady-state equations with <a> eliminated:
/// (Re F_b, Im F_b, Re F_c, Im F_c). Only b_amp and c_amp of `state` are read.
std::array<double, 4> mean_field_residual(const MeanFieldState& state, const BareConfig& bare);

/// Residual norm scale max(1, |Omega_b|, |Omega_c|).
double residual_scale(const BareConfig& bare);

/// Linear stability of the fluctuations around `state`.
StabilityReport state_stability(const MeanFieldState& state, const BareConfig& bare);

/// Damped Newton on (Re b, Im b, Re c, Im c) with the analytic Jacobian.
/// Starts from `seed` or from the origin. Throws SolverFailure on
/// non-convergence; an unstable fixed point is returned with stable = false.
MeanFieldState solve_mean_field(const BareConfig& bare, std::optional<MeanFieldState> seed = {},
                                const MeanFieldTolerances& tol = {});

struct BranchScan {
  std::vector<MeanFieldState> branches;  // distinct fixed points, ascending |b|^2 + |c|^2
  std::optional<std::size_t> continuation_branch;  // reached from Omega = 0
  std::vector<std::string> diagnostics;
};

/// Number of geometric continuation steps in the drive amplitude.
inline constexpr int kContinuationSteps = 32;
/// Upper bound of |amp|^2 for random seeds.
inline constexpr double kSeedOccupationLimit = 4e17;
/// Deflated restarts per start point.
inline constexpr int kMaxDeflationRounds = 4;

/// All fixed points found by drive continuation from Omega = 0, `n_seeds`
/// random seeds drawn from `rng`, and deflated Newton restarts from the
/// origin and every seed.
BranchScan branch_scan(const BareConfig& bare, int n_seeds, std::mt19937_64& rng,
                       const MeanFieldTolerances& tol = {});

/// Default operating point: the stable branch reached by continuation, else
/// the stable branch with the smallest excitation. `index` picks a branch of
/// the scan explicitly. Throws SolverFailure when nothing suitable exists.
MeanFieldState select_branch(const BranchScan& scan, std::optional<std::size_t> index = {});

/// Mean excitation numbers of a state, used to build the effective model.
inline EffectiveConfig effective_from_state(const BareConfig& bare, const MeanFieldState& s) {
  return derive_effective(bare, std::norm(s.b_amp), std::norm(s.c_amp));
}

}  // namespace cavmag
