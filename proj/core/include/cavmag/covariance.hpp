#pragma once

#include <array>
#include <string_view>

#include "cavmag/linalg.hpp"

namespace cavmag {

enum class ModeLabel { a = 0, b = 1, c = 2 };

inline constexpr std::array<ModeLabel, 3> kAllModes{ModeLabel::a, ModeLabel::b, ModeLabel::c};

constexpr int index_of(ModeLabel m) { return static_cast<int>(m); }
std::string_view name_of(ModeLabel m);

/// Steady-state covariance matrix of the quadrature fluctuations, ordered
/// (X_a, Y_a, X_b, Y_b, X_c, Y_c) with X = (o + o^dagger)/sqrt(2), so the
/// vacuum has 1/2 on the diagonal.
class CovarianceMatrix {
 public:
  /// Vacuum state.
  CovarianceMatrix();

  /// Throws InvalidArgument unless `m` is symmetric to 1e-12 (relative to its
  /// largest entry); the stored matrix is exactly symmetrised.
  explicit CovarianceMatrix(const Mat6& m);

  static CovarianceMatrix vacuum() { return {}; }

  /// Product of thermal states with the given mean occupations.
  static CovarianceMatrix thermal(double n_a, double n_b, double n_c);

  const Mat6& entries() const { return v_; }
  double operator()(int i, int j) const { return v_(i, j); }

  /// 2x2 block of one mode.
  Mat2 block(ModeLabel m) const { return v_.block<2, 2>(2 * index_of(m), 2 * index_of(m)); }

  /// 4x4 reduced covariance matrix of a pair of modes, in the given order.
  Mat4 pair(ModeLabel first, ModeLabel second) const;

 private:
  Mat6 v_;
};

}  // namespace cavmag
