#include "cavmag/gaussian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/LU>

#include "cavmag/errors.hpp"

namespace cavmag {

std::string_view name_of(ModeLabel m) {
  switch (m) {
    case ModeLabel::a: return "a";
    case ModeLabel::b: return "b";
    case ModeLabel::c: return "c";
  }
  return "?";
}

CovarianceMatrix::CovarianceMatrix() : v_(0.5 * Mat6::Identity()) {}

CovarianceMatrix::CovarianceMatrix(const Mat6& m) {
  if (!m.allFinite()) throw InvalidArgument("CovarianceMatrix: non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw InvalidArgument("CovarianceMatrix: matrix is not symmetric (max |V - V^T| = " +
                          std::to_string(asym) + ")");
  }
  v_ = 0.5 * (m + m.transpose());
}

CovarianceMatrix CovarianceMatrix::thermal(double n_a, double n_b, double n_c) {
  Mat6 m = Mat6::Zero();
  m.diagonal() << n_a + 0.5, n_a + 0.5, n_b + 0.5, n_b + 0.5, n_c + 0.5, n_c + 0.5;
  return CovarianceMatrix(m);
}

Mat4 CovarianceMatrix::pair(ModeLabel first, ModeLabel second) const {
  const std::array<int, 4> idx{2 * index_of(first), 2 * index_of(first) + 1, 2 * index_of(second),
                               2 * index_of(second) + 1};
  Mat4 out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out(i, j) = v_(idx[i], idx[j]);
  }
  return out;
}

Eigen::MatrixXd flip_momenta(const Eigen::MatrixXd& m, std::initializer_list<int> modes) {
  const Eigen::Index n_modes = m.rows() / 2;
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw InvalidArgument("flip_momenta: matrix must be 2n x 2n");
  }
  Eigen::VectorXd p = Eigen::VectorXd::Ones(m.rows());
  for (int k : modes) {
    if (k < 0 || k >= n_modes) throw InvalidArgument("flip_momenta: mode index out of range");
    p(2 * k + 1) = -1.0;
  }
  return p.asDiagonal() * m * p.asDiagonal();
}

Mat6 partial_transpose(const CovarianceMatrix& V, std::initializer_list<ModeLabel> modes) {
  std::array<bool, 3> chosen{};
  for (ModeLabel m : modes) chosen[static_cast<std::size_t>(index_of(m))] = true;
  const auto count = std::count(chosen.begin(), chosen.end(), true);
  if (count == 0 || count == 3) {
    throw InvalidArgument("partial_transpose: mode set must be non-empty and proper");
  }
  Mat6 out = V.entries();
  for (int k = 0; k < 3; ++k) {
    if (!chosen[static_cast<std::size_t>(k)]) continue;
    out.row(2 * k + 1) *= -1.0;
    out.col(2 * k + 1) *= -1.0;
  }
  return out;
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw InvalidArgument("symplectic_eigenvalues: matrix must be 2n x 2n");
  }
  const Eigen::Index n = m.rows() / 2;
  Eigen::MatrixXd omega_m(m.rows(), m.cols());
  // Omega = (+) [[0, 1], [-1, 0]]
  for (Eigen::Index k = 0; k < n; ++k) {
    omega_m.row(2 * k) = m.row(2 * k + 1);
    omega_m.row(2 * k + 1) = -m.row(2 * k);
  }
  const auto eig = linalg::eigenvalues(omega_m);
  std::vector<double> moduli;
  moduli.reserve(eig.size());
  for (const auto& l : eig) moduli.push_back(std::abs(l));
  std::sort(moduli.begin(), moduli.end());

  // Eigenvalues come in +/- pairs, so sorted moduli pair up.
  std::vector<double> out(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = 0.5 * (moduli[2 * k] + moduli[2 * k + 1]);
  }
  return out;
}

double min_pt_symplectic_eigenvalue_closed_form(const Mat4& v4) {
  const double det_a = v4.block<2, 2>(0, 0).determinant();
  const double det_b = v4.block<2, 2>(2, 2).determinant();
  const double det_c = v4.block<2, 2>(0, 2).determinant();
  const double det_v = v4.determinant();
  const double sigma = det_a + det_b - 2.0 * det_c;
  const double disc = std::max(0.0, sigma * sigma - 4.0 * det_v);
  return std::sqrt(std::max(0.0, 0.5 * (sigma - std::sqrt(disc))));
}

double negativity_from_symplectic(double nu_min) {
  if (2.0 * nu_min >= 1.0 - 1e-12) return 0.0;
  return -std::log(2.0 * nu_min);
}

PhysicalityReport physicality_check(const Eigen::MatrixXd& m) {
  PhysicalityReport rep;
  const auto nu = symplectic_eigenvalues(m);
  rep.min_symplectic_eigenvalue = nu.front();
  rep.defect = std::max(0.0, 0.5 - rep.min_symplectic_eigenvalue);
  rep.physical = rep.min_symplectic_eigenvalue >= 0.5 - kPhysicalityTolerance;
  return rep;
}

namespace {

void require_physical(const CovarianceMatrix& V, const char* where) {
  const auto rep = physicality_check(V);
  if (!rep.physical) {
    throw PreconditionError(std::string(where) + ": covariance matrix is unphysical (min symplectic eigenvalue " +
                            std::to_string(rep.min_symplectic_eigenvalue) + " < 1/2)");
  }
}

PairNegativity pair_unchecked(const CovarianceMatrix& V, ModeLabel first, ModeLabel second) {
  if (first == second) throw InvalidArgument("log_negativity_pair: modes must differ");
  const Mat4 v4 = V.pair(first, second);
  PairNegativity out;
  out.nu_min = symplectic_eigenvalues(flip_momenta(v4, {0})).front();
  out.nu_min_closed = min_pt_symplectic_eigenvalue_closed_form(v4);
  if (std::abs(out.nu_min - out.nu_min_closed) > 1e-8 * std::max(1.0, out.nu_min)) {
    throw NumericalError("log_negativity_pair: eigensolver and closed form disagree (" +
                         std::to_string(out.nu_min) + " vs " + std::to_string(out.nu_min_closed) + ")");
  }
  out.value = negativity_from_symplectic(out.nu_min);
  return out;
}

double one_vs_two_unchecked(const CovarianceMatrix& V, ModeLabel single) {
  const Mat6 pt = partial_transpose(V, {single});
  return negativity_from_symplectic(symplectic_eigenvalues(pt).front());
}

}  // namespace

PairNegativity log_negativity_pair_detail(const CovarianceMatrix& V, ModeLabel first,
                                          ModeLabel second) {
  require_physical(V, "log_negativity_pair");
  return pair_unchecked(V, first, second);
}

double log_negativity_pair(const CovarianceMatrix& V, ModeLabel first, ModeLabel second) {
  return log_negativity_pair_detail(V, first, second).value;
}

double log_negativity_one_vs_two(const CovarianceMatrix& V, ModeLabel single) {
  require_physical(V, "log_negativity_one_vs_two");
  return one_vs_two_unchecked(V, single);
}

namespace {

ResidualContangle contangle_from(double e_ab, double e_ac, double e_bc, double e_a_bc, double e_b_ac,
                                 double e_c_ab) {
  ResidualContangle r;
  r.a_bc = e_a_bc * e_a_bc - e_ab * e_ab - e_ac * e_ac;
  r.b_ac = e_b_ac * e_b_ac - e_ab * e_ab - e_bc * e_bc;
  r.c_ab = e_c_ab * e_c_ab - e_ac * e_ac - e_bc * e_bc;
  r.min = std::min({r.a_bc, r.b_ac, r.c_ab});
  return r;
}

}  // namespace

ResidualContangle residual_contangle(const CovarianceMatrix& V) {
  require_physical(V, "residual_contangle");
  return contangle_from(pair_unchecked(V, ModeLabel::a, ModeLabel::b).value,
                        pair_unchecked(V, ModeLabel::a, ModeLabel::c).value,
                        pair_unchecked(V, ModeLabel::b, ModeLabel::c).value,
                        one_vs_two_unchecked(V, ModeLabel::a), one_vs_two_unchecked(V, ModeLabel::b),
                        one_vs_two_unchecked(V, ModeLabel::c));
}

ExcitationNumbers excitation_numbers(const CovarianceMatrix& V) {
  auto n = [&V](int k) { return 0.5 * (V(2 * k, 2 * k) + V(2 * k + 1, 2 * k + 1) - 1.0); };
  return {n(0), n(1), n(2)};
}

EntanglementMeasures entanglement_measures(const CovarianceMatrix& V) {
  const auto phys = physicality_check(V);
  if (!phys.physical) {
    throw PreconditionError("entanglement_measures: covariance matrix is unphysical (min symplectic eigenvalue " +
                            std::to_string(phys.min_symplectic_eigenvalue) + ")");
  }
  EntanglementMeasures m;
  m.min_symplectic_eigenvalue = phys.min_symplectic_eigenvalue;
  m.E_ab = pair_unchecked(V, ModeLabel::a, ModeLabel::b).value;
  m.E_ac = pair_unchecked(V, ModeLabel::a, ModeLabel::c).value;
  m.E_bc = pair_unchecked(V, ModeLabel::b, ModeLabel::c).value;
  m.E_a_bc = one_vs_two_unchecked(V, ModeLabel::a);
  m.E_b_ac = one_vs_two_unchecked(V, ModeLabel::b);
  m.E_c_ab = one_vs_two_unchecked(V, ModeLabel::c);
  m.R = contangle_from(m.E_ab, m.E_ac, m.E_bc, m.E_a_bc, m.E_b_ac, m.E_c_ab);
  m.N = excitation_numbers(V);
  return m;
}

}  // namespace cavmag
