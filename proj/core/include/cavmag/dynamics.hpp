#pragma once

#include <string>

#include "cavmag/covariance.hpp"
#include "cavmag/linalg.hpp"
#include "cavmag/model.hpp"

namespace cavmag {

/// Drift matrix of du/dt = A u + v with u = (X_a, Y_a, X_b, Y_b, X_c, Y_c).
struct DriftMatrix {
  Mat6 entries = Mat6::Zero();
};

/// Diagonal noise matrix gamma_o (2 n_o + 1) of the Markovian baths.
struct DiffusionMatrix {
  Mat6 entries = Mat6::Zero();
};

DriftMatrix build_drift(const EffectiveConfig& cfg);
DiffusionMatrix build_diffusion(const EffectiveConfig& cfg);

struct StabilityReport {
  bool stable = false;
  double margin = 0.0;         // max Re(lambda), rad/s
  bool marginal = false;       // |margin| within the degeneracy band
  bool routh_hurwitz = false;  // verdict of the Routh array alone
  bool eigenvalue_test = false;  // verdict of the QR eigenvalues alone
  std::string note;
};

/// Relative width of the band around Re(lambda) = 0 treated as marginal.
inline constexpr double kMarginalTolerance = 1e-9;

/// Stability of the linearised dynamics. The Routh-Hurwitz test runs on the
/// Faddeev-LeVerrier characteristic polynomial of A / ||A||_inf; the margin
/// comes from the Hessenberg QR eigenvalues. Both must agree for `stable`.
StabilityReport is_stable(const DriftMatrix& A);

/// max |A V + V A^T + D|.
double lyapunov_residual(const DriftMatrix& A, const Mat6& V, const DiffusionMatrix& D);

/// Steady state of dV/dt = A V + V A^T + D through the vectorised 36x36
/// Kronecker-sum system, dense LU with partial pivoting and one refinement
/// sweep. Throws PreconditionError for unstable A and NumericalError when
/// the operator is numerically singular.
CovarianceMatrix solve_lyapunov(const DriftMatrix& A, const DiffusionMatrix& D);

/// Classical RK4 step size used by the transient oracle: 0.01 / max|A_ij|.
double default_transient_step(const DriftMatrix& A);

/// V(t_final) from V0 by classical RK4 on dV/dt = A V + V A^T + D. Used as
/// an independent check of solve_lyapunov. Throws NumericalError when the
/// iteration blows up.
CovarianceMatrix integrate_transient(const DriftMatrix& A, const DiffusionMatrix& D,
                                     const CovarianceMatrix& V0, double t_final, double dt);

}  // namespace cavmag
