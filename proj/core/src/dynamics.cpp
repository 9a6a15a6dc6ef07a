#include "cavmag/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "cavmag/errors.hpp"

namespace cavmag {

DriftMatrix build_drift(const EffectiveConfig& cfg) {
  const double ga = cfg.gamma_a, gb = cfg.gamma_b, gc = cfg.gamma_c;
  const double da = cfg.Delta_a, db = cfg.Delta_b_tilde, dc = cfg.Delta_c_tilde;
  const double kb = cfg.K_b_tilde, kc = cfg.K_c_tilde;
  const double g = cfg.g_ab, G2 = 2.0 * cfg.G_tilde;

  DriftMatrix A;
  // clang-format off
  A.entries <<
      -ga,   da,         0.0,   g,          0.0,        0.0,
      -da,  -ga,        -g,     0.0,        0.0,        0.0,
       0.0,  g,         -gb,    db - kb,    0.0,        0.0,
      -g,    0.0,  -(db + kb), -gb,        -G2,         0.0,
       0.0,  0.0,        0.0,   0.0,       -gc,         dc - kc,
       0.0,  0.0,       -G2,    0.0,  -(dc + kc),      -gc;
  // clang-format on
  return A;
}

DiffusionMatrix build_diffusion(const EffectiveConfig& cfg) {
  DiffusionMatrix D;
  const double da = cfg.gamma_a * (2.0 * cfg.n_a + 1.0);
  const double db = cfg.gamma_b * (2.0 * cfg.n_b + 1.0);
  const double dc = cfg.gamma_c * (2.0 * cfg.n_c + 1.0);
  D.entries.diagonal() << da, da, db, db, dc, dc;
  return D;
}

StabilityReport is_stable(const DriftMatrix& A) {
  StabilityReport rep;
  const double scale = linalg::norm_inf(A.entries);
  if (!std::isfinite(scale)) throw NumericalError("is_stable: drift matrix has non-finite entries");
  if (scale == 0.0) {
    rep.marginal = true;
    rep.note = "marginal: zero drift matrix";
    return rep;
  }

  const Mat6 normalized = A.entries / scale;
  const auto poly = linalg::characteristic_polynomial(normalized);
  const auto routh = linalg::routh_hurwitz(poly);
  rep.routh_hurwitz = routh.all_in_left_half_plane && !routh.degenerate;

  const auto eig = linalg::eigenvalues(normalized);
  double max_re = -std::numeric_limits<double>::infinity();
  for (const auto& l : eig) max_re = std::max(max_re, l.real());
  rep.margin = max_re * scale;
  rep.eigenvalue_test = max_re < 0.0;
  rep.marginal = std::abs(max_re) <= kMarginalTolerance;

  if (rep.marginal) {
    rep.note = "marginal: max Re(lambda) within tolerance of zero";
  } else if (rep.routh_hurwitz != rep.eigenvalue_test) {
    rep.note = "routh-hurwitz and eigenvalue verdicts disagree";
  }
  rep.stable = rep.routh_hurwitz && rep.eigenvalue_test && !rep.marginal;
  return rep;
}

double lyapunov_residual(const DriftMatrix& A, const Mat6& V, const DiffusionMatrix& D) {
  const Mat6 r = A.entries * V + V * A.entries.transpose() + D.entries;
  return r.cwiseAbs().maxCoeff();
}

CovarianceMatrix solve_lyapunov(const DriftMatrix& A, const DiffusionMatrix& D) {
  const StabilityReport stab = is_stable(A);
  if (!stab.stable) {
    throw PreconditionError("solve_lyapunov: drift matrix is not stable (max Re(lambda) = " +
                            std::to_string(stab.margin) + " rad/s)");
  }

  // Work in units of the largest rate so the operator is O(1).
  const double scale = linalg::max_abs(A.entries);
  const Mat6 a = A.entries / scale;
  const Mat6 d = D.entries / scale;

  using Mat36 = Eigen::Matrix<double, 36, 36>;
  using Vec36 = Eigen::Matrix<double, 36, 1>;
  Mat36 op = Mat36::Zero();
  // Column-major vec: vec(aV) = (I (x) a) vec V, vec(V a^T) = (a (x) I) vec V.
  for (int blk = 0; blk < 6; ++blk) op.block<6, 6>(6 * blk, 6 * blk) += a;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) op.block<6, 6>(6 * i, 6 * j).diagonal().array() += a(i, j);
  }

  const Eigen::PartialPivLU<Mat36> lu(op);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    throw NumericalError("solve_lyapunov: Lyapunov operator is numerically singular (rcond = " +
                         std::to_string(rcond) + ")");
  }
  const Vec36 rhs = -Eigen::Map<const Vec36>(d.data());
  Vec36 x = lu.solve(rhs);
  x += lu.solve(rhs - op * x);

  Mat6 v = Eigen::Map<const Mat6>(x.data());
  v = 0.5 * (v + v.transpose()).eval();

  const double residual = lyapunov_residual(A, v, D);
  const double bound = 1e-10 * D.entries.cwiseAbs().maxCoeff();
  if (!(residual <= bound)) {
    throw NumericalError("solve_lyapunov: residual " + std::to_string(residual) +
                         " exceeds tolerance " + std::to_string(bound));
  }
  return CovarianceMatrix(v);
}

double default_transient_step(const DriftMatrix& A) {
  const double m = linalg::max_abs(A.entries);
  if (!(m > 0.0)) throw InvalidArgument("default_transient_step: zero drift matrix");
  return 0.01 / m;
}

CovarianceMatrix integrate_transient(const DriftMatrix& A, const DiffusionMatrix& D,
                                     const CovarianceMatrix& V0, double t_final, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("integrate_transient: dt must be positive");
  if (!(t_final > 0.0)) throw InvalidArgument("integrate_transient: t_final must be positive");

  const Mat6& a = A.entries;
  const Mat6& d = D.entries;
  auto rhs = [&](const Mat6& v) -> Mat6 {
    const Mat6 av = a * v;
    return av + av.transpose() + d;
  };

  const auto steps = static_cast<long long>(std::ceil(t_final / dt));
  const double h = t_final / static_cast<double>(steps);
  Mat6 v = V0.entries();
  for (long long s = 0; s < steps; ++s) {
    const Mat6 k1 = rhs(v);
    const Mat6 k2 = rhs(v + 0.5 * h * k1);
    const Mat6 k3 = rhs(v + 0.5 * h * k2);
    const Mat6 k4 = rhs(v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((s & 1023) == 0 && !(v.cwiseAbs().maxCoeff() < 1e150)) {
      throw NumericalError("integrate_transient: solution diverged (step size too large?)");
    }
  }
  if (!v.allFinite()) throw NumericalError("integrate_transient: solution diverged");
  return CovarianceMatrix(v);
}

}  // namespace cavmag
