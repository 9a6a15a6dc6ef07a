#pragma once

#include <initializer_list>
#include <optional>
#include <vector>

#include "cavmag/covariance.hpp"
#include "cavmag/linalg.hpp"

namespace cavmag {

/// Tolerance below 1/2 still accepted as physical for symplectic eigenvalues.
inline constexpr double kPhysicalityTolerance = 1e-9;

/// P V P with P = diag(1, -1) on each listed mode (Y -> -Y), the covariance
/// level partial transposition. The mode set must be non-empty and proper.
Mat6 partial_transpose(const CovarianceMatrix& V, std::initializer_list<ModeLabel> modes);

/// Same sign flip on an arbitrary 2n x 2n matrix, modes given by index.
Eigen::MatrixXd flip_momenta(const Eigen::MatrixXd& m, std::initializer_list<int> modes);

/// The n symplectic eigenvalues of a symmetric 2n x 2n matrix, ascending:
/// moduli of the eigenvalues of Omega M, which come in +/- pairs.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& m);

/// Smallest symplectic eigenvalue of the partial transpose of a two-mode
/// covariance matrix [[A, C], [C^T, B]] from its invariants:
/// nu^2 = (S - sqrt(S^2 - 4 det V)) / 2 with S = det A + det B - 2 det C.
double min_pt_symplectic_eigenvalue_closed_form(const Mat4& v4);

/// max(0, -ln(2 nu)), with exactly 0 once 2 nu >= 1 - 1e-12.
double negativity_from_symplectic(double nu_min);

struct PhysicalityReport {
  bool physical = false;
  double min_symplectic_eigenvalue = 0.0;
  double defect = 0.0;  // max(0, 1/2 - nu_min)
};

PhysicalityReport physicality_check(const Eigen::MatrixXd& m);
inline PhysicalityReport physicality_check(const CovarianceMatrix& V) {
  return physicality_check(Eigen::MatrixXd(V.entries()));
}

struct PairNegativity {
  double value = 0.0;
  double nu_min = 0.0;          // generic eigensolver route
  double nu_min_closed = 0.0;   // invariant route
};

/// Logarithmic negativity of the reduced state of two modes. Evaluates both
/// routes and throws NumericalError if they disagree beyond 1e-8.
/// Throws PreconditionError for an unphysical V.
PairNegativity log_negativity_pair_detail(const CovarianceMatrix& V, ModeLabel first,
                                          ModeLabel second);
double log_negativity_pair(const CovarianceMatrix& V, ModeLabel first, ModeLabel second);

/// E_{i|jk}: negativity of one mode against the other two.
double log_negativity_one_vs_two(const CovarianceMatrix& V, ModeLabel single);

struct ResidualContangle {
  double a_bc = 0.0, b_ac = 0.0, c_ab = 0.0;
  double min = 0.0;
};

/// R_{i|jk} = E_{i|jk}^2 - E_{i|j}^2 - E_{i|k}^2 and their minimum.
ResidualContangle residual_contangle(const CovarianceMatrix& V);

struct ExcitationNumbers {
  double a = 0.0, b = 0.0, c = 0.0;
};

/// N_o = (<X_o^2> + <Y_o^2> - 1) / 2.
ExcitationNumbers excitation_numbers(const CovarianceMatrix& V);

struct EntanglementMeasures {
  double E_ab = 0.0, E_bc = 0.0, E_ac = 0.0;
  double E_a_bc = 0.0, E_b_ac = 0.0, E_c_ab = 0.0;
  ResidualContangle R;
  ExcitationNumbers N;
  double min_symplectic_eigenvalue = 0.0;
};

/// Everything computed at one operating point. `measures` is empty when the
/// linearised dynamics is unstable and no steady state exists.
struct EntanglementReport {
  bool stable = false;
  std::optional<EntanglementMeasures> measures;
};

/// All measures of a physical steady-state covariance matrix.
EntanglementMeasures entanglement_measures(const CovarianceMatrix& V);

}  // namespace cavmag
