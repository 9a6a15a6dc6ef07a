#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace cavmag {

using Mat2 = Eigen::Matrix<double, 2, 2>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

namespace linalg {

/// Eigenvalues of a real square matrix: balancing, reduction to upper
/// Hessenberg form by stabilised elimination, then Francis double-shift QR.
/// Complex eigenvalues come out as conjugate pairs. Throws NumericalError
/// when an eigenvalue fails to converge.
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& m);

/// Coefficients of det(lambda I - m) in descending powers, leading 1,
/// via Faddeev-LeVerrier.
std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& m);

struct RouthResult {
  bool all_in_left_half_plane = false;
  bool degenerate = false;  // a vanishing first-column entry
  int sign_changes = 0;     // number of right-half-plane roots when not degenerate
};

/// Routh array test on a real polynomial given in descending powers with a
/// positive leading coefficient.
RouthResult routh_hurwitz(std::span<const double> coeffs);

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

/// Infinity norm (max absolute row sum).
inline double norm_inf(const Eigen::MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

}  // namespace linalg
}  // namespace cavmag
