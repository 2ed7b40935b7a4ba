#include "oracles.hpp"
#include "tlr/shrinkage.hpp"

#include <gtest/gtest.h>

namespace tlr {
namespace {

using testing::max_abs_diff;
using testing::random_tensor;

// Singular values of every Fourier slice via the naive DFT and a
// one-sided Jacobi SVD (the library uses divide and conquer).
std::vector<Eigen::VectorXd> oracle_spectral_singulars(const Tensor3d &x) {
  std::vector<Eigen::VectorXd> out;
  for (const auto &m : testing::naive_spectral(x))
    out.push_back(Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues());
  return out;
}

TEST(Tsvt, ZeroThresholdIsIdentity) {
  std::mt19937_64 rng(41);
  const auto y = random_tensor({3, 4, 5}, rng);
  EXPECT_EQ(tsvt(y, 0.0), y);
  EXPECT_THROW(tsvt(y, -0.1), std::invalid_argument);
}

TEST(Tsvt, HalvesIdentity) {
  const auto I = identity_tensor(3, 4);
  EXPECT_LE(max_abs_diff(tsvt(I, 0.5), 0.5 * I), 1e-14);
}

TEST(Tsvt, ShrinksEverySpectralSingularValue) {
  std::mt19937_64 rng(42);
  const auto y = random_tensor({4, 4, 3}, rng);
  const auto before = oracle_spectral_singulars(y);
  double smax = 0;
  for (const auto &s : before)
    smax = std::max(smax, s.maxCoeff());
  for (const double tau : {0.0, 0.1, smax / 2, 2 * smax}) {
    const auto after = oracle_spectral_singulars(tsvt(y, tau));
    for (std::size_t k = 0; k < before.size(); ++k) {
      const Eigen::VectorXd expected = (before[k].array() - tau).max(0.0);
      EXPECT_LE((after[k] - expected).cwiseAbs().maxCoeff(), 1e-9) << "tau=" << tau;
    }
  }
}

TEST(Tsvt, NonExpansiveAndShrinksTnn) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_tensor({4, 3, 5}, rng);
    const auto b = random_tensor({4, 3, 5}, rng);
    const double tau = 0.5 + trial * 0.3;
    EXPECT_LE(frobenius_norm(tsvt(a, tau) - tsvt(b, tau)), frobenius_norm(a - b) + 1e-12);
    EXPECT_LT(tnn(tsvt(a, tau)), tnn(a));
  }
  const Tensor3d zero(Dims{2, 2, 2});
  EXPECT_EQ(tnn(tsvt(zero, 1.0)), 0.0);
}

TEST(Tsvt, FloatInstantiation) {
  const auto I = identity_tensor<float>(2, 3);
  const auto h = tsvt(I, 0.25f);
  EXPECT_NEAR(h(0, 0, 0), 0.75f, 1e-6f);
}

TEST(WeightedTsvt, ReducesToTsvt) {
  std::mt19937_64 rng(44);
  const auto y = random_tensor({4, 5, 3}, rng);
  EXPECT_LE(max_abs_diff(weighted_tsvt(y, WeightVector<double>::constant(0.0)), y), 1e-12);
  EXPECT_LE(max_abs_diff(weighted_tsvt(y, WeightVector<double>::constant(0.7)), tsvt(y, 0.7)),
            1e-12);
  EXPECT_LE(max_abs_diff(weighted_tsvt(y, WeightVector<double>::values(
                                              Eigen::VectorXd::Constant(4, 0.7))),
                         tsvt(y, 0.7)),
            1e-12);
}

TEST(WeightedTsvt, ReweightingShrinksSmallValuesMore) {
  std::mt19937_64 rng(45);
  const auto y = random_tensor({5, 5, 3}, rng);
  const auto w = WeightVector<double>::reweighted(1.0, 1e-6);
  const auto before = oracle_spectral_singulars(y);
  const auto after = oracle_spectral_singulars(weighted_tsvt(y, w));
  for (std::size_t k = 0; k < before.size(); ++k) {
    const Eigen::VectorXd expected =
        (before[k].array() - 1.0 / (before[k].array() + 1e-6)).max(0.0);
    EXPECT_LE((after[k] - expected).cwiseAbs().maxCoeff(), 1e-9);
    // Relative shrinkage is larger for smaller singular values.
    for (Index i = 1; i < before[k].size(); ++i)
      EXPECT_LE(after[k](i) / before[k](i), after[k](i - 1) / before[k](i - 1) + 1e-12);
  }
}

TEST(WeightVector, Validation) {
  EXPECT_THROW(WeightVector<double>::constant(-1.0), std::invalid_argument);
  EXPECT_THROW(WeightVector<double>::values(Eigen::Vector2d(1.0, -0.1)), std::invalid_argument);
  EXPECT_THROW(WeightVector<double>::reweighted(1.0, 0.0), std::invalid_argument);
  const auto w = WeightVector<double>::values(Eigen::Vector2d(1.0, 2.0));
  EXPECT_THROW(w.weights_for(Eigen::Vector3d(3, 2, 1)), DimensionError);
}

TEST(SoftThreshold, ScalarCases) {
  const Tensor3d x(Dims{1, 1, 3}, std::vector<double>{3.0, -0.5, -4.0});
  const auto s = soft_threshold(x, 1.0);
  EXPECT_EQ(s(0, 0, 0), 2.0);
  EXPECT_EQ(s(0, 0, 1), 0.0);
  EXPECT_EQ(s(0, 0, 2), -3.0);
  EXPECT_THROW(soft_threshold(x, -1.0), std::invalid_argument);
}

TEST(SoftThreshold, MinimizesScalarProximalObjective) {
  std::mt19937_64 rng(46);
  const auto x = random_tensor({1, 1, 20}, rng, 2.0);
  const double tau = 0.8;
  const auto s = soft_threshold(x, tau);
  for (Index k = 0; k < 20; ++k) {
    const double v = x(0, 0, k);
    const double best = testing::grid_argmin(
        [&](double t) { return tau * std::abs(t) + 0.5 * (t - v) * (t - v); }, -10, 10);
    EXPECT_NEAR(s(0, 0, k), best, 1e-6);
  }
}

TEST(MaskedSoftThreshold, Reductions) {
  std::mt19937_64 rng(47);
  const auto x = random_tensor({3, 4, 2}, rng);
  EXPECT_EQ(masked_soft_threshold(x, Eigen::MatrixXd::Ones(3, 4), 0.4), soft_threshold(x, 0.4));
  EXPECT_EQ(masked_soft_threshold(x, Eigen::MatrixXd::Zero(3, 4), 0.4), x);
  EXPECT_THROW(masked_soft_threshold(x, Eigen::MatrixXd::Ones(4, 3), 0.4), DimensionError);
  EXPECT_THROW(masked_soft_threshold(x, Eigen::MatrixXd::Constant(3, 4, 1.5), 0.4),
               std::invalid_argument);
}

TEST(MaskedSoftThreshold, MixedWeightsMatchScalarProx) {
  std::mt19937_64 rng(48);
  const auto x = random_tensor({3, 3, 2}, rng, 2.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Eigen::MatrixXd w = Eigen::MatrixXd::NullaryExpr(3, 3, [&]() { return u(rng); });
  const double tau = 1.2;
  const auto s = masked_soft_threshold(x, w, tau);
  for (Index k = 0; k < 2; ++k)
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j) {
        const double v = x(i, j, k);
        const double t = tau * w(i, j);
        const double best = testing::grid_argmin(
            [&](double z) { return t * std::abs(z) + 0.5 * (z - v) * (z - v); }, -10, 10);
        EXPECT_NEAR(s(i, j, k), best, 1e-6);
      }
}

TEST(Diff, ConstantsVanish) {
  const auto c = Tensor3d::constant({3, 4, 5}, 2.5);
  for (const auto axis : {DiffAxis::x, DiffAxis::y, DiffAxis::t})
    EXPECT_EQ(diff(c, axis), Tensor3d(c.dims()));
  std::mt19937_64 rng(49);
  const auto flat = random_tensor({3, 3, 1}, rng);
  EXPECT_EQ(diff(flat, DiffAxis::t), Tensor3d(flat.dims()));
}

TEST(Diff, ForwardDifferenceWithWraparound) {
  std::mt19937_64 rng(50);
  const auto x = random_tensor({3, 4, 5}, rng);
  const auto dy = diff(x, DiffAxis::y);
  const auto dx = diff(x, DiffAxis::x);
  const auto dt = diff(x, DiffAxis::t);
  EXPECT_EQ(dy(2, 1, 1), x(0, 1, 1) - x(2, 1, 1));
  EXPECT_EQ(dx(1, 3, 2), x(1, 0, 2) - x(1, 3, 2));
  EXPECT_EQ(dt(0, 0, 4), x(0, 0, 0) - x(0, 0, 4));
  EXPECT_EQ(dt(0, 0, 1), x(0, 0, 2) - x(0, 0, 1));
}

TEST(Diff, AdjointIdentity) {
  std::mt19937_64 rng(51);
  for (const auto axis : {DiffAxis::x, DiffAxis::y, DiffAxis::t}) {
    const auto x = random_tensor({3, 4, 5}, rng);
    const auto g = random_tensor({3, 4, 5}, rng);
    EXPECT_NEAR(inner_product(diff(x, axis), g), inner_product(x, diff_adjoint(g, axis)),
                1e-12);
  }
}

} // namespace
} // namespace tlr
