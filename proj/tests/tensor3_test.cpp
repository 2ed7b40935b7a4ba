#include "oracles.hpp"
#include "tlr/tensor3.hpp"
#include "tlr/tproduct.hpp"

#include <gtest/gtest.h>

#include <limits>

namespace tlr {
namespace {

using testing::random_tensor;

TEST(Tensor3, StorageIsFrontalSliceMajor) {
  const Dims d{2, 3, 4};
  std::vector<double> data(d.size());
  for (std::size_t n = 0; n < data.size(); ++n)
    data[n] = double(n);
  const Tensor3d x(d, data);
  for (Index k = 0; k < d.n3; ++k)
    for (Index i = 0; i < d.n1; ++i)
      for (Index j = 0; j < d.n2; ++j)
        EXPECT_EQ(x(i, j, k), double(k * 6 + i * 3 + j));
}

TEST(Tensor3, RejectsNonFiniteAndBadShapes) {
  EXPECT_THROW(Tensor3d(Dims{1, 1, 1},
                        std::vector<double>{std::numeric_limits<double>::quiet_NaN()}),
               std::domain_error);
  EXPECT_THROW(Tensor3d(Dims{1, 1, 1},
                        std::vector<double>{std::numeric_limits<double>::infinity()}),
               std::domain_error);
  EXPECT_THROW(Tensor3d(Dims{2, 2, 1}, std::vector<double>(3)), DimensionError);
  EXPECT_THROW(Tensor3d(Dims{0, 2, 1}), DimensionError);
}

TEST(Slice, SingleElementAndIdentity) {
  const Tensor3d one(Dims{1, 1, 1}, std::vector<double>{5.0});
  EXPECT_EQ(slice(one, SliceAxis::frontal, 0), Eigen::MatrixXd::Constant(1, 1, 5.0));

  const auto I = identity_tensor(3, 4);
  EXPECT_EQ(slice(I, SliceAxis::frontal, 0), Eigen::MatrixXd::Identity(3, 3));
  for (Index k = 1; k < 4; ++k)
    EXPECT_EQ(slice(I, SliceAxis::frontal, k), Eigen::MatrixXd::Zero(3, 3));
}

TEST(Slice, MatchesDirectIndexing) {
  std::mt19937_64 rng(1);
  const auto x = random_tensor({3, 4, 2}, rng);
  for (Index k = 0; k < 2; ++k) {
    const Eigen::MatrixXd f = slice(x, SliceAxis::frontal, k);
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 4; ++j)
        EXPECT_EQ(f(i, j), x(i, j, k));
  }
  for (Index i = 0; i < 3; ++i) {
    const Eigen::MatrixXd h = slice(x, SliceAxis::horizontal, i);
    for (Index j = 0; j < 4; ++j)
      for (Index k = 0; k < 2; ++k)
        EXPECT_EQ(h(j, k), x(i, j, k));
  }
  for (Index j = 0; j < 4; ++j) {
    const Eigen::MatrixXd l = slice(x, SliceAxis::lateral, j);
    for (Index i = 0; i < 3; ++i)
      for (Index k = 0; k < 2; ++k)
        EXPECT_EQ(l(i, k), x(i, j, k));
  }
  EXPECT_THROW(slice(x, SliceAxis::frontal, 2), std::out_of_range);
  EXPECT_THROW(slice(x, SliceAxis::lateral, -1), std::out_of_range);
}

TEST(Unfold, ColumnsAreFibersInLexicographicOrder) {
  std::mt19937_64 rng(2);
  const Dims d{2, 3, 4};
  const auto x = random_tensor(d, rng);
  const Eigen::MatrixXd m1 = unfold(x, 1);
  ASSERT_EQ(m1.rows(), 2);
  ASSERT_EQ(m1.cols(), 12);
  // Column c of the mode-1 unfolding is the fiber x(:, j, k) with
  // c = j + k * n2 (j fastest).
  for (Index k = 0; k < 4; ++k)
    for (Index j = 0; j < 3; ++j)
      for (Index i = 0; i < 2; ++i)
        EXPECT_EQ(m1(i, j + 3 * k), x(i, j, k));
  const Eigen::MatrixXd m2 = unfold(x, 2);
  for (Index k = 0; k < 4; ++k)
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 3; ++j)
        EXPECT_EQ(m2(j, i + 2 * k), x(i, j, k));
  const Eigen::MatrixXd m3 = unfold(x, 3);
  for (Index j = 0; j < 3; ++j)
    for (Index i = 0; i < 2; ++i)
      for (Index k = 0; k < 4; ++k)
        EXPECT_EQ(m3(k, i + 2 * j), x(i, j, k));
}

TEST(Unfold, FoldRoundTripAndErrors) {
  std::mt19937_64 rng(3);
  for (const Dims d : {Dims{2, 3, 4}, Dims{1, 1, 5}, Dims{4, 1, 1}}) {
    const auto x = random_tensor(d, rng);
    for (int mode = 1; mode <= 3; ++mode)
      EXPECT_EQ(fold(unfold(x, mode), mode, d), x);
  }
  const auto tubex = random_tensor({1, 1, 6}, rng);
  const Eigen::MatrixXd m = unfold(tubex, 3);
  EXPECT_EQ(m.rows(), 6);
  EXPECT_EQ(m.cols(), 1);
  EXPECT_THROW(fold(Eigen::MatrixXd(3, 3), 1, Dims{2, 3, 4}), DimensionError);
  EXPECT_THROW(unfold(tubex, 4), std::invalid_argument);
}

TEST(Bcirc, TubeLayout) {
  const Tensor3d x(Dims{1, 1, 3}, std::vector<double>{1.0, 2.0, 3.0});
  Eigen::MatrixXd expected(3, 3);
  expected << 1, 3, 2, //
      2, 1, 3,         //
      3, 2, 1;
  EXPECT_EQ(bcirc(x), expected);
}

TEST(Bcirc, SingleSliceIsTheSlice) {
  std::mt19937_64 rng(4);
  const auto x = random_tensor({3, 2, 1}, rng);
  EXPECT_EQ(bcirc(x), Eigen::MatrixXd(x.frontal(0)));
}

TEST(Bcirc, FrobeniusScalesWithDepth) {
  std::mt19937_64 rng(5);
  const auto x = random_tensor({3, 2, 5}, rng);
  EXPECT_NEAR(bcirc(x).norm(), std::sqrt(5.0) * frobenius_norm(x), 1e-12);
  EXPECT_NEAR(bvec(x).norm(), frobenius_norm(x), 1e-12);
}

TEST(BlockOps, RoundTripsAreExact) {
  std::mt19937_64 rng(6);
  const Dims d{2, 3, 4};
  const auto x = random_tensor(d, rng);
  EXPECT_EQ(bvfold(bvec(x), d), x);
  EXPECT_EQ(bdfold(bdiag(x), d), x);
  EXPECT_EQ(squeeze(twist(x)), x);
  EXPECT_THROW(bvfold(Eigen::MatrixXd(3, 3), d), DimensionError);
  EXPECT_THROW(bdfold(Eigen::MatrixXd(8, 3), d), DimensionError);
}

TEST(BlockOps, BdiagOfScalarTube) {
  const Tensor3d x(Dims{1, 1, 2}, std::vector<double>{4.0, 7.0});
  Eigen::MatrixXd expected(2, 2);
  expected << 4, 0, 0, 7;
  EXPECT_EQ(bdiag(x), expected);
}

TEST(Twist, ShapesAndEntries) {
  std::mt19937_64 rng(7);
  const auto x = random_tensor({2, 3, 4}, rng);
  const auto t = twist(x);
  ASSERT_EQ(t.dims(), (Dims{2, 4, 3}));
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 3; ++j)
      for (Index k = 0; k < 4; ++k)
        EXPECT_EQ(t(i, k, j), x(i, j, k));
  // Lateral slice k of twist(x) is frontal slice k of x.
  EXPECT_EQ(slice(t, SliceAxis::lateral, 2), slice(x, SliceAxis::frontal, 2));
  EXPECT_EQ(twist(random_tensor({3, 5, 1}, rng)).dims(), (Dims{3, 1, 5}));
}

TEST(Norms, ZeroAndIdentity) {
  const Tensor3d z(Dims{2, 3, 2});
  EXPECT_EQ(frobenius_norm(z), 0.0);
  EXPECT_EQ(l1_norm(z), 0.0);
  EXPECT_EQ(inner_product(z, z), 0.0);
  const auto I = identity_tensor(5, 3);
  EXPECT_DOUBLE_EQ(frobenius_norm(I), std::sqrt(5.0));
  EXPECT_DOUBLE_EQ(l1_norm(I), 5.0);
}

TEST(Norms, InnerProductMatchesBdiagTrace) {
  std::mt19937_64 rng(8);
  const auto x = random_tensor({2, 2, 3}, rng);
  const auto y = random_tensor({2, 2, 3}, rng);
  const double trace = (bdiag(x).transpose() * bdiag(y)).trace();
  EXPECT_NEAR(inner_product(x, y), trace, 1e-12);
  EXPECT_NEAR(inner_product(x, x), std::pow(frobenius_norm(x), 2), 1e-12);
  EXPECT_THROW(inner_product(x, random_tensor({2, 2, 2}, rng)), DimensionError);
}

TEST(ProjectMask, BasicLaws) {
  std::mt19937_64 rng(9);
  const Dims d{3, 4, 2};
  const auto x = random_tensor(d, rng);
  const auto y = random_tensor(d, rng);
  std::bernoulli_distribution coin(0.5);
  const auto omega = Mask3::generate(d, [&](Index, Index, Index) { return coin(rng); });

  EXPECT_EQ(project_mask(x, Mask3::constant(d, true)), x);
  EXPECT_EQ(project_mask(x, Mask3::constant(d, false)), Tensor3d(d));
  const auto px = project_mask(x, omega);
  EXPECT_EQ(project_mask(px, omega), px);
  EXPECT_NEAR(inner_product(px, y), inner_product(x, project_mask(y, omega)), 1e-12);
  for (Index k = 0; k < d.n3; ++k)
    for (Index i = 0; i < d.n1; ++i)
      for (Index j = 0; j < d.n2; ++j)
        EXPECT_EQ(px(i, j, k), omega(i, j, k) ? x(i, j, k) : 0.0);
  EXPECT_THROW(project_mask(x, Mask3::constant({1, 1, 1}, true)), DimensionError);
}

TEST(Tensor3, FloatInstantiation) {
  const auto x = Tensor3f::generate({2, 2, 2}, [](Index i, Index j, Index k) {
    return float(i + j + k);
  });
  EXPECT_FLOAT_EQ(l1_norm(x), 12.0f);
  EXPECT_EQ(squeeze(twist(x)), x);
}

} // namespace
} // namespace tlr
