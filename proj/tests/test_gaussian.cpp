#include <random>

#include <gtest/gtest.h>

#include "cavmag/errors.hpp"
#include "cavmag/gaussian.hpp"
#include "cavmag/sweep.hpp"
#include "cavmag/units.hpp"
#include "oracles.hpp"

using namespace cavmag;
using ModeLabel::a;
using ModeLabel::b;
using ModeLabel::c;

namespace {

// Two-mode squeezed pair on (first, second), the remaining mode in vacuum.
CovarianceMatrix squeezed_pair(double r, int first, int second) {
  const Mat4 t = oracle::two_mode_squeezed(r);
  Mat6 v = 0.5 * Mat6::Identity();
  const int idx[2] = {first, second};
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) v.block<2, 2>(2 * idx[p], 2 * idx[q]) = t.block<2, 2>(2 * p, 2 * q);
  return CovarianceMatrix(v);
}

CovarianceMatrix random_physical(std::mt19937_64& rng) {
  return CovarianceMatrix(Mat6(oracle::random_physical_cm(3, rng, 0.6)));
}

CovarianceMatrix rotate_mode(const CovarianceMatrix& V, int mode, double phi) {
  Mat6 R = Mat6::Identity();
  R.block<2, 2>(2 * mode, 2 * mode) << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  Mat6 out = R * V.entries() * R.transpose();
  return CovarianceMatrix(Mat6((out + out.transpose()) / 2.0));
}

}  // namespace

TEST(CovarianceMatrixType, RejectsAsymmetric) {
  Mat6 m = 0.5 * Mat6::Identity();
  m(0, 1) = 0.1;
  EXPECT_THROW(CovarianceMatrix{m}, InvalidArgument);
  m(1, 0) = 0.1 + 1e-15;
  const CovarianceMatrix ok(m);
  EXPECT_EQ(ok(0, 1), ok(1, 0));
}

TEST(PartialTranspose, VacuumAndInvolution) {
  const CovarianceMatrix vac;
  EXPECT_EQ(partial_transpose(vac, {b}), vac.entries());
  std::mt19937_64 rng(1);
  const CovarianceMatrix V = random_physical(rng);
  const Mat6 once = partial_transpose(V, {b});
  EXPECT_EQ(partial_transpose(CovarianceMatrix(once), {b}), V.entries());
}

TEST(PartialTranspose, FlipsMomentumSigns) {
  const CovarianceMatrix V = squeezed_pair(0.5, 0, 1);
  const Mat6 pt = partial_transpose(V, {b});
  const double s = std::sinh(1.0) / 2.0;
  EXPECT_DOUBLE_EQ(V(0, 2), s);
  EXPECT_DOUBLE_EQ(V(1, 3), -s);
  EXPECT_DOUBLE_EQ(pt(0, 2), s);
  EXPECT_DOUBLE_EQ(pt(1, 3), s);
  EXPECT_DOUBLE_EQ(pt(2, 2), V(2, 2));
}

TEST(PartialTranspose, RejectsEmptyOrFullSet) {
  const CovarianceMatrix V;
  EXPECT_THROW(partial_transpose(V, {}), InvalidArgument);
  EXPECT_THROW(partial_transpose(V, {a, b, c}), InvalidArgument);
}

TEST(SymplecticEigenvalues, VacuumAndThermal) {
  auto nu = symplectic_eigenvalues(CovarianceMatrix().entries());
  ASSERT_EQ(nu.size(), 3u);
  for (double x : nu) EXPECT_NEAR(x, 0.5, 1e-14);
  nu = symplectic_eigenvalues(CovarianceMatrix::thermal(0.7, 0.1, 2.5).entries());
  EXPECT_NEAR(nu[0], 0.6, 1e-13);
  EXPECT_NEAR(nu[1], 1.2, 1e-13);
  EXPECT_NEAR(nu[2], 3.0, 1e-13);
}

TEST(SymplecticEigenvalues, MatchInvariantOracle) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 500; ++t) {
    const Eigen::MatrixXd V = oracle::random_physical_cm(3, rng);
    const auto ours = symplectic_eigenvalues(V);
    const auto ref = oracle::symplectic_by_invariants_with_error(V);
    for (int k = 0; k < 3; ++k)
      EXPECT_NEAR(ours[k], ref.nu[k], std::max(1e-10 * std::max(1.0, ref.nu[k]), ref.err[k])) << t;
    // Partial transposes are not physical but still positive definite.
    const Eigen::MatrixXd pt = flip_momenta(V, {t % 3});
    const auto ours_pt = symplectic_eigenvalues(pt);
    const auto ref_pt = oracle::symplectic_by_invariants_with_error(pt);
    for (int k = 0; k < 3; ++k)
      EXPECT_NEAR(ours_pt[k], ref_pt.nu[k], std::max(1e-10 * std::max(1.0, ref_pt.nu[k]), ref_pt.err[k])) << t;
  }
}

TEST(SymplecticEigenvalues, AlwaysNValuesOnDegenerateSpectrum) {
  EXPECT_EQ(symplectic_eigenvalues(Eigen::MatrixXd::Identity(6, 6)).size(), 3u);
  EXPECT_EQ(symplectic_eigenvalues(Eigen::MatrixXd::Identity(4, 4)).size(), 2u);
}

TEST(ClosedForm, AgreesWithEigensolver) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 1000; ++t) {
    const Mat4 V = oracle::random_physical_cm(2, rng);
    const Eigen::MatrixXd pt = flip_momenta(V, {1});
    EXPECT_NEAR(min_pt_symplectic_eigenvalue_closed_form(V), symplectic_eigenvalues(pt)[0], 1e-10);
  }
}

TEST(LogNegativity, TwoModeSqueezedVacuum) {
  for (auto [p, q] : {std::pair{0, 1}, {1, 2}, {0, 2}}) {
    const CovarianceMatrix V = squeezed_pair(0.5, p, q);
    EXPECT_NEAR(log_negativity_pair(V, static_cast<ModeLabel>(p), static_cast<ModeLabel>(q)), 1.0, 1e-10);
  }
  EXPECT_NEAR(log_negativity_pair(squeezed_pair(0.25, 1, 2), b, c), 0.5, 1e-10);
}

TEST(LogNegativity, ProductStatesAreZero) {
  EXPECT_EQ(log_negativity_pair(CovarianceMatrix(), a, b), 0.0);
  EXPECT_EQ(log_negativity_pair(CovarianceMatrix::thermal(0.1, 0.2, 0.3), b, c), 0.0);
  for (auto m : kAllModes) EXPECT_EQ(log_negativity_one_vs_two(CovarianceMatrix::thermal(1, 1, 1), m), 0.0);
}

TEST(LogNegativity, OneVersusTwoOnPairState) {
  const CovarianceMatrix V = squeezed_pair(0.5, 1, 2);
  EXPECT_EQ(log_negativity_one_vs_two(V, a), 0.0);
  EXPECT_NEAR(log_negativity_one_vs_two(V, b), 1.0, 1e-10);
  EXPECT_NEAR(log_negativity_one_vs_two(V, c), 1.0, 1e-10);
}

TEST(LogNegativity, RejectsUnphysical) {
  const CovarianceMatrix bad(Mat6(0.4 * Mat6::Identity()));
  EXPECT_THROW(log_negativity_pair(bad, a, b), PreconditionError);
  EXPECT_THROW(entanglement_measures(bad), PreconditionError);
}

TEST(NegativityFromSymplectic, ClampsAtThreshold) {
  EXPECT_EQ(negativity_from_symplectic(0.5), 0.0);
  EXPECT_EQ(negativity_from_symplectic(0.5 - 1e-13), 0.0);
  EXPECT_GT(negativity_from_symplectic(0.5 - 1e-11), 0.0);
  EXPECT_NEAR(negativity_from_symplectic(0.5 * std::exp(-1.0)), 1.0, 1e-15);
}

TEST(ResidualContangle, ProductAndPairStates) {
  const ResidualContangle p = residual_contangle(CovarianceMatrix());
  EXPECT_EQ(p.a_bc, 0.0);
  EXPECT_EQ(p.min, 0.0);
  const ResidualContangle q = residual_contangle(squeezed_pair(0.5, 1, 2));
  EXPECT_EQ(q.a_bc, 0.0);
  EXPECT_NEAR(q.b_ac, 0.0, 1e-12);
  EXPECT_NEAR(q.c_ab, 0.0, 1e-12);
}

TEST(ExcitationNumbers, VacuumAndThermal) {
  const ExcitationNumbers v = excitation_numbers(CovarianceMatrix());
  EXPECT_EQ(v.a, 0.0);
  EXPECT_EQ(v.c, 0.0);
  const ExcitationNumbers t = excitation_numbers(CovarianceMatrix::thermal(0.25, 1.5, 3.0));
  EXPECT_NEAR(t.a, 0.25, 1e-15);
  EXPECT_NEAR(t.b, 1.5, 1e-15);
  EXPECT_NEAR(t.c, 3.0, 1e-15);
}

TEST(Physicality, Examples) {
  const PhysicalityReport vac = physicality_check(CovarianceMatrix());
  EXPECT_TRUE(vac.physical);
  EXPECT_NEAR(vac.defect, 0.0, 1e-15);
  const PhysicalityReport bad = physicality_check(Eigen::MatrixXd(0.4 * Eigen::MatrixXd::Identity(6, 6)));
  EXPECT_FALSE(bad.physical);
  EXPECT_NEAR(bad.defect, 0.1, 1e-12);
}

TEST(Properties, PptConsistency) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 300; ++t) {
    const CovarianceMatrix V = random_physical(rng);
    for (auto [p, q] : {std::pair{a, b}, {b, c}, {a, c}}) {
      const PairNegativity n = log_negativity_pair_detail(V, p, q);
      EXPECT_EQ(n.value > 0.0, 2.0 * n.nu_min < 1.0 - 1e-12) << t;
    }
  }
}

TEST(Properties, MonogamyOnRandomStates) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 300; ++t) {
    const ResidualContangle r = residual_contangle(random_physical(rng));
    EXPECT_GE(r.a_bc, -1e-9);
    EXPECT_GE(r.b_ac, -1e-9);
    EXPECT_GE(r.c_ab, -1e-9);
  }
}

TEST(Properties, LocalRotationInvariance) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
  for (int t = 0; t < 100; ++t) {
    const CovarianceMatrix V = random_physical(rng);
    const CovarianceMatrix W = rotate_mode(rotate_mode(V, t % 3, ang(rng)), (t + 1) % 3, ang(rng));
    const EntanglementMeasures m = entanglement_measures(V), n = entanglement_measures(W);
    EXPECT_NEAR(m.E_ab, n.E_ab, 1e-10);
    EXPECT_NEAR(m.E_bc, n.E_bc, 1e-10);
    EXPECT_NEAR(m.E_ac, n.E_ac, 1e-10);
    EXPECT_NEAR(m.E_a_bc, n.E_a_bc, 1e-10);
    EXPECT_NEAR(m.E_b_ac, n.E_b_ac, 1e-10);
    EXPECT_NEAR(m.E_c_ab, n.E_c_ab, 1e-10);
    EXPECT_NEAR(m.N.a, n.N.a, 1e-10);
    EXPECT_NEAR(m.N.b, n.N.b, 1e-10);
    EXPECT_NEAR(m.N.c, n.N.c, 1e-10);
  }
}

TEST(Properties, NegativityIsLipschitz) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const CovarianceMatrix V = random_physical(rng);
    Mat6 dir;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j <= i; ++j) dir(i, j) = dir(j, i) = z(rng);
    dir /= dir.cwiseAbs().maxCoeff();
    const double h = 1e-7;
    const CovarianceMatrix W(Mat6(V.entries() + h * dir));
    if (!physicality_check(W).physical) continue;
    const EntanglementMeasures m = entanglement_measures(V), n = entanglement_measures(W);
    // The bound scales with 1/nu_min of the partial transpose.
    const double L = 100.0 * (1.0 + V.entries().cwiseAbs().maxCoeff()) / m.min_symplectic_eigenvalue;
    EXPECT_LE(std::abs(m.E_ab - n.E_ab), L * h);
    EXPECT_LE(std::abs(m.E_bc - n.E_bc), L * h);
    EXPECT_LE(std::abs(m.E_a_bc - n.E_a_bc), L * h);
  }
}

TEST(Pipeline, Fig2MatchedPointIsTripartite) {
  const PointResult r = run_point(preset("fig2").fixed);
  ASSERT_TRUE(r.report.measures.has_value());
  const EntanglementMeasures& m = *r.report.measures;
  EXPECT_GT(m.E_bc, 0.0);
  EXPECT_GT(m.E_ab, 0.0);
  EXPECT_GT(m.E_ac, 0.0);
  EXPECT_GT(m.R.min, 0.0);
}

TEST(Pipeline, Fig3MaxKerrOneVersusTwo) {
  ParameterSet p = preset("fig3").fixed;
  p.set("K_b_tilde", units::from_MHz(15.0));
  p.set("K_c_tilde", units::from_MHz(24.0));
  p.set("Delta_a", units::from_MHz(100.0));
  const PointResult r = run_point(p);
  ASSERT_TRUE(r.report.measures.has_value());
  EXPECT_GT(r.report.measures->E_a_bc, 0.0);
  EXPECT_GT(r.report.measures->E_b_ac, 0.0);
  EXPECT_GT(r.report.measures->E_c_ab, 0.0);
}
