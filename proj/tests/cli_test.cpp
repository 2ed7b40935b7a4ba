#include "cli.hpp"
#include "temp_dir.hpp"
#include "tlr/io.hpp"
#include "tlr/metrics.hpp"
#include "tlr/synth.hpp"
#include "tlr/tproduct.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <string>
#include <vector>

namespace tlr {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "tlr");
  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  ::testing::internal::CaptureStdout();
  ::testing::internal::CaptureStderr();
  const int code = run_cli(int(argv.size()), argv.data());
  Run r{code, ::testing::internal::GetCapturedStdout(),
        ::testing::internal::GetCapturedStderr()};
  return r;
}

TEST(Cli, TnnOfIdentity) {
  testing::TempDir dir;
  write_tensor(identity_tensor<double>(4, 3), dir / "i.tlt");
  const auto r = run({"tnn", "--in", (dir / "i.tlt").string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "12\n");
}

TEST(Cli, MetricsOnIdenticalFiles) {
  testing::TempDir dir;
  write_tensor(low_tubal_rank({4, 4, 2}, 1, 1), dir / "x.tlt");
  const auto r = run({"metrics", "--in", (dir / "x.tlt").string(), "--ref",
                      (dir / "x.tlt").string(), "--metrics-csv",
                      (dir / "m.csv").string(), "--experiment", "same"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "psnr inf\nrse 0\n");
  std::ifstream f(dir / "m.csv");
  std::string header, row;
  std::getline(f, header);
  std::getline(f, row);
  EXPECT_EQ(header, csv_header());
  EXPECT_EQ(row, "same,metrics,inf,0,,,,,");
}

TEST(Cli, UnknownFlagOrSubcommandExitsTwo) {
  auto r = run({"tnn", "--bogus", "x"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  r = run({"frobnicate"});
  EXPECT_EQ(r.code, 2);
  r = run({});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, RuntimeErrorExitsOne) {
  testing::TempDir dir;
  const auto r = run({"tnn", "--in", (dir / "missing.tlt").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, SynthThenComplete) {
  testing::TempDir dir;
  const auto p = [&](const char *n) { return (dir / n).string(); };
  ASSERT_EQ(run({"synth", "low_tubal_rank", "--n1", "30", "--n2", "30", "--n3",
                 "10", "--rank", "2", "--seed", "2", "--out", p("x.tlt")})
                .code,
            0);
  ASSERT_EQ(run({"synth", "missing_mask", "--n1", "30", "--n2", "30", "--n3",
                 "10", "--observed", "0.5", "--seed", "3", "--out", p("m.tlt")})
                .code,
            0);
  const auto r = run({"complete", "--in", p("x.tlt"), "--mask", p("m.tlt"),
                      "--out", p("y.tlt"), "--ref", p("x.tlt"),
                      "--metrics-csv", p("m.csv"), "--experiment", "lrtc50"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("converged true"), std::string::npos);
  EXPECT_LE(rse(read_tensor(p("y.tlt")), read_tensor(p("x.tlt"))), 1e-3);
  std::ifstream f(p("m.csv"));
  std::string header, row;
  std::getline(f, header);
  std::getline(f, row);
  EXPECT_EQ(row.rfind("lrtc50,lrtc,", 0), 0u);
  EXPECT_EQ(row.substr(row.size() - 4), "true");
}

TEST(Cli, RpcaWritesBothParts) {
  testing::TempDir dir;
  const auto p = [&](const char *n) { return (dir / n).string(); };
  const Dims d{10, 10, 3};
  write_tensor(low_tubal_rank(d, 1, 4) + sparse_spikes(d, 0.05, 3.0, 5), p("m.tlt"));
  const auto r = run({"rpca", "--in", p("m.tlt"), "--out", p("l.tlt"), "--out2",
                      p("s.tlt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = read_tensor(p("m.tlt"));
  EXPECT_LE(max_abs(m - read_tensor(p("l.tlt")) - read_tensor(p("s.tlt"))), 1e-7);
}

TEST(Cli, SameSeedSameBytes) {
  testing::TempDir dir;
  const auto p = [&](const char *n) { return (dir / n).string(); };
  for (const char *out : {"a.tlt", "b.tlt"})
    ASSERT_EQ(run({"synth", "hsi_cube", "--n1", "8", "--n2", "8", "--n3", "4",
                   "--seed", "7", "--out", p(out)})
                  .code,
              0);
  std::ifstream a(p("a.tlt"), std::ios::binary), b(p("b.tlt"), std::ios::binary);
  const std::string sa{std::istreambuf_iterator<char>(a), {}};
  const std::string sb{std::istreambuf_iterator<char>(b), {}};
  EXPECT_EQ(sa, sb);
}

TEST(Cli, ClusterPrintsLabels) {
  testing::TempDir dir;
  const auto p = [&](const char *n) { return (dir / n).string(); };
  ASSERT_EQ(run({"synth", "submodule_images", "--n1", "16", "--n2", "6", "--n3",
                 "4", "--clusters", "2", "--seed", "1", "--out", p("y.tlt"),
                 "--out2", p("truth.txt")})
                .code,
            0);
  const auto r = run({"cluster", "--in", p("y.tlt"), "--clusters", "2", "--truth",
                      p("truth.txt"), "--out", p("labels.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("accuracy 1"), std::string::npos);
  std::ifstream f(p("labels.txt"));
  int n = 0;
  for (int l; f >> l; ++n)
    EXPECT_TRUE(l == 0 || l == 1);
  EXPECT_EQ(n, 12);
}

TEST(Cli, SvtRejectsNegativeTau) {
  testing::TempDir dir;
  write_tensor(identity_tensor<double>(3, 2), dir / "i.tlt");
  const auto r = run({"svt", "--in", (dir / "i.tlt").string(), "--out",
                      (dir / "o.tlt").string(), "--tau", "-1"});
  EXPECT_EQ(r.code, 1);
}

} // namespace
} // namespace tlr
