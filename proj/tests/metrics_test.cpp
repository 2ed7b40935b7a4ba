#include "oracles.hpp"
#include "temp_dir.hpp"
#include "tlr/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>

namespace tlr {
namespace {

TEST(Psnr, ConstantOffset) {
  std::mt19937_64 rng(1);
  const auto x = testing::random_tensor({4, 5, 3}, rng);
  EXPECT_NEAR(psnr(x + Tensor3d::constant(x.dims(), 0.1), x), 20.0, 1e-10);
  EXPECT_NEAR(psnr(x + Tensor3d::constant(x.dims(), 0.1), x, 255.0),
              20.0 + 20.0 * std::log10(255.0), 1e-10);
}

TEST(Psnr, IdenticalIsInfinite) {
  const auto x = Tensor3d::constant({2, 2, 2}, 0.3);
  EXPECT_EQ(psnr(x, x), std::numeric_limits<double>::infinity());
  EXPECT_THROW(psnr(x, x, 0.0), std::invalid_argument);
  EXPECT_THROW(psnr(x, Tensor3d({2, 2, 3})), DimensionError);
}

TEST(Rse, Values) {
  const auto x = Tensor3d::constant({2, 2, 2}, 2.0);
  EXPECT_EQ(rse(x, x), 0.0);
  EXPECT_DOUBLE_EQ(rse(Tensor3d::constant({2, 2, 2}, 3.0), x), 0.5);
  EXPECT_THROW(rse(x, Tensor3d({2, 2, 2})), std::invalid_argument);
}

TEST(FMeasure, Values) {
  const Mask3 truth = Mask3::generate({1, 4, 1}, [](Index, Index j, Index) { return j < 2; });
  EXPECT_EQ(f_measure(truth, truth), 1.0);
  const Mask3 wrong = Mask3::generate({1, 4, 1}, [](Index, Index j, Index) { return j >= 2; });
  EXPECT_EQ(f_measure(wrong, truth), 0.0);
  EXPECT_EQ(f_measure(Mask3({1, 4, 1}), truth), 0.0);
  // One hit, one false alarm: P = R = 1/2.
  const Mask3 half = Mask3::generate({1, 4, 1}, [](Index, Index j, Index) { return j == 1 || j == 2; });
  EXPECT_DOUBLE_EQ(f_measure(half, truth), 0.5);
  // One hit, no false alarm: P = 1, R = 1/2.
  const Mask3 one = Mask3::generate({1, 4, 1}, [](Index, Index j, Index) { return j == 0; });
  EXPECT_DOUBLE_EQ(f_measure(one, truth), 2.0 / 3.0);
}

TEST(ClusterAccuracy, BestPermutation) {
  EXPECT_EQ(cluster_accuracy({2, 2, 0, 0, 1, 1}, {0, 0, 1, 1, 2, 2}), 1.0);
  EXPECT_DOUBLE_EQ(cluster_accuracy({0, 0, 0, 1}, {1, 1, 0, 0}), 0.75);
  EXPECT_DOUBLE_EQ(cluster_accuracy({0, 0, 0, 0}, {0, 1, 2, 3}), 0.25);
  EXPECT_THROW(cluster_accuracy({0, 1}, {0}), std::invalid_argument);
  EXPECT_THROW(cluster_accuracy({0, -1}, {0, 1}), std::invalid_argument);
  EXPECT_THROW(cluster_accuracy({0, 9}, {0, 1}), std::invalid_argument);
}

TEST(Csv, RowFormat) {
  MetricsRow row;
  row.experiment = "lrtc,50";
  row.solver = "lrtc";
  row.psnr = std::numeric_limits<double>::infinity();
  row.rse = 0.25;
  row.iterations = 12;
  row.converged = false;
  EXPECT_EQ(csv_header(), "experiment,solver,psnr,rse,f_measure,"
                          "cluster_accuracy,iterations,wall_time_s,converged");
  EXPECT_EQ(to_csv(row), "\"lrtc,50\",lrtc,inf,0.25,,,12,,false");
}

TEST(Csv, AppendWritesHeaderOnce) {
  testing::TempDir dir;
  MetricsRow row;
  row.experiment = "e";
  row.solver = "s";
  append_csv(row, dir / "m.csv");
  append_csv(row, dir / "m.csv");
  std::ifstream f(dir / "m.csv");
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(f, line))
    lines.push_back(line);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], csv_header());
  EXPECT_EQ(lines[1], "e,s,,,,,,,");
  EXPECT_EQ(lines[2], lines[1]);
}

} // namespace
} // namespace tlr
