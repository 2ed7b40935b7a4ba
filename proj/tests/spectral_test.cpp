#include "oracles.hpp"
#include "tlr/spectral.hpp"
#include "tlr/tproduct.hpp"

#include <gtest/gtest.h>

namespace tlr {
namespace {

using testing::random_tensor;

TEST(ToSpectral, DepthOneIsIdentity) {
  std::mt19937_64 rng(11);
  const auto x = random_tensor({3, 2, 1}, rng);
  const auto xf = to_spectral(x);
  ASSERT_EQ(xf.slices.size(), 1u);
  EXPECT_TRUE(xf[0].imag().isZero(0.0));
  EXPECT_EQ(Eigen::MatrixXd(xf[0].real()), Eigen::MatrixXd(x.frontal(0)));
}

TEST(ToSpectral, ImpulseTubeBecomesOnes) {
  const auto xf = to_spectral(identity_tensor(3, 5));
  for (Index k = 0; k < 5; ++k)
    EXPECT_TRUE(xf[k].isApprox(Eigen::MatrixXcd::Identity(3, 3), 1e-15));
}

TEST(ToSpectral, MatchesNaiveDft) {
  std::mt19937_64 rng(12);
  for (Index n3 : {1, 2, 5, 7, 8}) {
    const auto x = random_tensor({4, 3, n3}, rng);
    const auto xf = to_spectral(x);
    const auto ref = testing::naive_spectral(x);
    for (Index k = 0; k < n3; ++k)
      EXPECT_LE((xf[k] - ref[k]).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(FromSpectral, RoundTripAndParseval) {
  std::mt19937_64 rng(13);
  const auto x = random_tensor({4, 3, 5}, rng);
  const auto xf = to_spectral(x);
  EXPECT_LE(testing::max_abs_diff(from_spectral(xf), x), 1e-12);
  EXPECT_NEAR(xf.squared_norm(), 5.0 * std::pow(frobenius_norm(x), 2), 1e-9);
  EXPECT_LE(conjugate_symmetry_defect(xf), 1e-14);
}

TEST(FromSpectral, IdentityAndZero) {
  SpectralTensor3<double> s(Dims{2, 2, 4});
  for (auto &m : s.slices)
    m = Eigen::MatrixXcd::Identity(2, 2);
  EXPECT_LE(testing::max_abs_diff(from_spectral(s), identity_tensor(2, 4)), 1e-15);
  EXPECT_EQ(from_spectral(SpectralTensor3<double>(Dims{2, 3, 3})), Tensor3d(Dims{2, 3, 3}));
}

TEST(FromSpectral, RejectsAsymmetricInput) {
  std::mt19937_64 rng(14);
  auto s = to_spectral(random_tensor({2, 2, 4}, rng));
  s[1](0, 0) += std::complex<double>(0.0, 1.0);
  EXPECT_THROW(from_spectral(s), SpectralSymmetryError);
}

TEST(ComplexSvd, DiagonalInput) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = 1.0;
  const auto f = complex_svd(a);
  EXPECT_NEAR(f.s(0), 3.0, 1e-15);
  EXPECT_NEAR(f.s(1), 1.0, 1e-15);
  EXPECT_TRUE(f.U.isApprox(Eigen::MatrixXcd::Identity(2, 2), 1e-14));
  EXPECT_TRUE(f.V.isApprox(Eigen::MatrixXcd::Identity(2, 2), 1e-14));
}

TEST(ComplexSvd, RankOneOuterProduct) {
  std::mt19937_64 rng(15);
  Eigen::VectorXcd u = testing::random_matrix(5, 2, rng) * Eigen::Vector2cd(std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 1.0));
  Eigen::VectorXcd v = testing::random_matrix(4, 2, rng) * Eigen::Vector2cd(std::complex<double>(1.0, 0.0), std::complex<double>(0.0, -1.0));
  u.normalize();
  v.normalize();
  const auto f = complex_svd(Eigen::MatrixXcd(u * v.adjoint()));
  EXPECT_NEAR(f.s(0), 1.0, 1e-14);
  for (Index i = 1; i < f.s.size(); ++i)
    EXPECT_LE(f.s(i), 1e-14);
}

TEST(ComplexSvd, RandomMatchesGramEigenvalues) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXcd a =
        testing::random_matrix(6, 4, rng).cast<std::complex<double>>() +
        std::complex<double>(0, 1) * testing::random_matrix(6, 4, rng);
    const auto f = complex_svd(a);
    const Eigen::VectorXd ref = testing::gram_singular_values(a);
    EXPECT_LE((f.s.array().square() - ref.array().square()).abs().maxCoeff(), 1e-9);
    for (Index i = 1; i < f.s.size(); ++i)
      EXPECT_GE(f.s(i - 1), f.s(i));
    // Unitary factors and reconstruction.
    const Eigen::MatrixXcd UU = f.U.adjoint() * f.U - Eigen::MatrixXcd::Identity(6, 6);
    const Eigen::MatrixXcd VV = f.V.adjoint() * f.V - Eigen::MatrixXcd::Identity(4, 4);
    EXPECT_LE(UU.operatorNorm(), 1e-10);
    EXPECT_LE(VV.operatorNorm(), 1e-10);
    const Eigen::MatrixXcd rec =
        f.U.leftCols(4) * f.s.cast<std::complex<double>>().asDiagonal() * f.V.adjoint();
    EXPECT_LE((rec - a).norm() / a.norm(), 1e-10);
    // Phase convention: largest entry of each column of U is real, >= 0.
    for (Index j = 0; j < f.U.cols(); ++j) {
      Index imax;
      f.U.col(j).cwiseAbs().maxCoeff(&imax);
      EXPECT_EQ(f.U(imax, j).imag(), 0.0);
      EXPECT_GE(f.U(imax, j).real(), 0.0);
    }
  }
}

TEST(ComplexSvd, RejectsNonFinite) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(complex_svd(a), std::domain_error);
}

TEST(ComplexSvd, Deterministic) {
  std::mt19937_64 rng(17);
  const Eigen::MatrixXcd a = testing::random_matrix(5, 5, rng).cast<std::complex<double>>();
  const auto f1 = complex_svd(a);
  const auto f2 = complex_svd(a);
  EXPECT_EQ(f1.U, f2.U);
  EXPECT_EQ(f1.V, f2.V);
}

} // namespace
} // namespace tlr
