#include "cli.hpp"

#include "tlr/clustering.hpp"
#include "tlr/io.hpp"
#include "tlr/matrix.hpp"
#include "tlr/metrics.hpp"
#include "tlr/solvers.hpp"
#include "tlr/synth.hpp"
#include "tlr/tproduct.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace tlr;

namespace {

struct Options {
  std::string in, in2, mask, out, out2, out3, out4;
  std::string ref, support_ref, csv, experiment = "run";
  // Several subcommands declare the same weight flag; only one subcommand
  // is parsed per run, so the value slot is shared.
  std::map<std::string, std::vector<CLI::Option *>> given;
  std::map<std::string, double> values;
  double mu0 = 1e-3, rho = 1.1, tol = 1e-7, peak = 1.0;
  int max_iter = 500;
  std::uint64_t seed = 0;

  std::optional<double> get(const std::string &name) const {
    const auto it = given.find(name);
    if (it == given.end())
      return std::nullopt;
    for (const auto *opt : it->second)
      if (opt->count() > 0)
        return values.at(name);
    return std::nullopt;
  }

  SolverConfig config() const {
    SolverConfig c;
    c.mu0 = mu0;
    c.rho = rho;
    c.tol = tol;
    c.max_iter = max_iter;
    c.seed = seed;
    return c;
  }
};

void add_weights(CLI::App *sub, Options &o,
                 std::initializer_list<std::string> names) {
  for (const auto &n : names) {
    o.values[n] = 0.0;
    o.given[n].push_back(sub->add_option("--" + n, o.values[n], n + " weight"));
  }
}

void add_solver_flags(CLI::App *sub, Options &o) {
  sub->add_option("--mu0", o.mu0, "initial penalty");
  sub->add_option("--rho", o.rho, "penalty growth factor");
  sub->add_option("--tol", o.tol, "stopping tolerance");
  sub->add_option("--max-iter", o.max_iter, "iteration cap");
  sub->add_option("--seed", o.seed, "random seed");
}

void add_report_flags(CLI::App *sub, Options &o) {
  sub->add_option("--metrics-csv", o.csv, "append a metrics row to this CSV");
  sub->add_option("--experiment", o.experiment, "experiment id for the CSV");
  sub->add_option("--ref", o.ref, "ground truth for PSNR and RSE");
  sub->add_option("--support-ref", o.support_ref,
                  "ground-truth support mask for the F-measure");
  sub->add_option("--peak", o.peak, "PSNR peak value");
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string format(double v) {
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

// Prints a one-line summary and appends the CSV row when asked.
void report(const Options &o, const std::string &solver, const Tensor3d &primary,
            const SolverReport &r, double wall,
            const std::optional<Mask3> &support = std::nullopt) {
  MetricsRow row;
  row.experiment = o.experiment;
  row.solver = solver;
  row.iterations = r.iterations;
  row.wall_time_s = wall;
  row.converged = r.converged;
  if (!o.ref.empty()) {
    const auto ref = read_tensor(o.ref);
    row.psnr = psnr(primary, ref, o.peak);
    row.rse = rse(primary, ref);
  }
  if (!o.support_ref.empty() && support)
    row.f_measure = f_measure(*support, read_mask(o.support_ref));
  std::cout << "iterations " << r.iterations << "\nconverged "
            << (r.converged ? "true" : "false") << "\nobjective "
            << format(r.objective) << '\n';
  if (row.psnr)
    std::cout << "psnr " << format(*row.psnr) << "\nrse " << format(*row.rse)
              << '\n';
  if (row.f_measure)
    std::cout << "f_measure " << format(*row.f_measure) << '\n';
  if (!o.csv.empty())
    append_csv(row, o.csv);
}

void write_if(const std::string &path, const Tensor3d &x) {
  if (!path.empty())
    write_tensor(x, path);
}

Eigen::MatrixXd frontal0(const Tensor3d &x) {
  if (x.n3() != 1)
    throw DimensionError("expected an n1 x n2 x 1 tensor, got " +
                         to_string(x.dims()));
  return x.frontal(0);
}

Tensor3d as_tensor(const Eigen::MatrixXd &m) {
  return Tensor3d::generate({m.rows(), m.cols(), 1},
                            [&](Index i, Index j, Index) { return m(i, j); });
}

void write_labels(const std::string &path, const std::vector<int> &labels) {
  std::ofstream f(path);
  if (!f)
    throw std::runtime_error("cannot open " + path);
  for (const int l : labels)
    f << l << '\n';
}

std::vector<int> read_labels(const std::string &path) {
  std::ifstream f(path);
  if (!f)
    throw std::runtime_error("cannot open " + path);
  std::vector<int> labels;
  for (int l; f >> l;)
    labels.push_back(l);
  return labels;
}

} // namespace

int run_cli(int argc, const char *const *argv) {
  CLI::App app{"Low-tubal-rank tensor algebra and recovery solvers"};
  app.require_subcommand(1);
  Options o;
  std::function<void()> action;
  auto define = [&](const std::string &name, const std::string &help) {
    auto *sub = app.add_subcommand(name, help);
    return sub;
  };

  // Algebra.
  auto *tprod = define("tprod", "t-product of two tensors");
  tprod->add_option("--in", o.in)->required();
  tprod->add_option("--in2", o.in2)->required();
  tprod->add_option("--out", o.out)->required();
  tprod->callback([&] {
    action = [&] {
      write_tensor(t_product(read_tensor(o.in), read_tensor(o.in2)), o.out);
    };
  });

  auto *tsvd = define("tsvd", "t-SVD factors U, S, V");
  tsvd->add_option("--in", o.in)->required();
  tsvd->add_option("--out", o.out, "U")->required();
  tsvd->add_option("--out2", o.out2, "S")->required();
  tsvd->add_option("--out3", o.out3, "V")->required();
  tsvd->callback([&] {
    action = [&] {
      const auto f = t_svd(read_tensor(o.in));
      write_tensor(f.U, o.out);
      write_tensor(f.S, o.out2);
      write_tensor(f.V, o.out3);
    };
  });

  auto *tnn_cmd = define("tnn", "print the tensor nuclear norm");
  tnn_cmd->add_option("--in", o.in)->required();
  tnn_cmd->callback([&] {
    action = [&] { std::cout << format(tnn(read_tensor(o.in))) << '\n'; };
  });

  auto *svt = define("svt", "tensor singular value thresholding");
  svt->add_option("--in", o.in)->required();
  svt->add_option("--out", o.out)->required();
  add_weights(svt, o, {"tau"});
  o.given["tau"].back()->required();
  svt->callback([&] {
    action = [&] { write_tensor(tsvt(read_tensor(o.in), *o.get("tau")), o.out); };
  });

  // Solvers.
  auto *complete = define("complete", "tensor completion");
  complete->add_option("--in", o.in)->required();
  complete->add_option("--mask", o.mask)->required();
  complete->add_option("--out", o.out)->required();
  add_solver_flags(complete, o);
  add_report_flags(complete, o);
  complete->callback([&] {
    action = [&] {
      const auto t0 = Clock::now();
      auto r = lrtc(read_tensor(o.in), read_mask(o.mask), o.config());
      const double wall = seconds_since(t0);
      write_tensor(r.x, o.out);
      report(o, "lrtc", r.x, r.report, wall);
    };
  });

  auto *rpca_cmd = define("rpca", "tensor robust PCA: low rank + sparse");
  rpca_cmd->add_option("--in", o.in)->required();
  rpca_cmd->add_option("--out", o.out, "low-rank part")->required();
  rpca_cmd->add_option("--out2", o.out2, "sparse part");
  add_weights(rpca_cmd, o, {"lambda"});
  add_solver_flags(rpca_cmd, o);
  add_report_flags(rpca_cmd, o);
  rpca_cmd->callback([&] {
    action = [&] {
      const auto t0 = Clock::now();
      auto r = trpca(read_tensor(o.in), o.get("lambda"), o.config());
      const double wall = seconds_since(t0);
      write_tensor(r.l, o.out);
      write_if(o.out2, r.s);
      report(o, "trpca", r.l, r.report, wall, support_mask(r.s));
    };
  });

  auto *denoise = define("denoise", "weighted tensor nuclear norm denoising");
  denoise->add_option("--in", o.in)->required();
  denoise->add_option("--out", o.out)->required();
  add_weights(denoise, o, {"lambda", "weight", "reweight", "eps"});
  add_solver_flags(denoise, o);
  add_report_flags(denoise, o);
  denoise->callback([&] {
    action = [&] {
      const double lambda = o.get("lambda").value_or(1.0);
      const auto w =
          o.get("weight")
              ? WeightVector<double>::constant(*o.get("weight"))
              : WeightVector<double>::reweighted(o.get("reweight").value_or(1.0),
                                                 o.get("eps").value_or(1e-6));
      const auto t0 = Clock::now();
      auto r = wtnn_denoise(read_tensor(o.in), lambda, w, o.config());
      const double wall = seconds_since(t0);
      write_tensor(r.x, o.out);
      report(o, "wtnn", r.x, r.report, wall);
    };
  });

  Index patch = 0, stride = 8;
  auto *hsi = define("hsi-denoise", "mixed-noise removal with spatial TV");
  hsi->add_option("--in", o.in)->required();
  hsi->add_option("--out", o.out, "clean estimate")->required();
  hsi->add_option("--out2", o.out2, "sparse noise");
  hsi->add_option("--out3", o.out3, "Gaussian noise");
  hsi->add_option("--patch", patch, "patch side; 0 processes the whole cube");
  hsi->add_option("--stride", stride, "patch stride");
  add_weights(hsi, o, {"lambda", "tau", "gamma"});
  add_solver_flags(hsi, o);
  add_report_flags(hsi, o);
  hsi->callback([&] {
    action = [&] {
      MixedNoiseParams p;
      p.lambda = o.get("lambda");
      p.tau = o.get("tau").value_or(p.tau);
      p.gamma = o.get("gamma").value_or(p.gamma);
      const auto h = read_tensor(o.in);
      const auto t0 = Clock::now();
      auto r = patch > 0
                   ? hsi_mixed_denoise_patches(h, {patch, stride}, p, o.config())
                   : hsi_mixed_denoise(h, p, o.config());
      const double wall = seconds_since(t0);
      write_tensor(r.l, o.out);
      write_if(o.out2, r.s);
      write_if(o.out3, r.n);
      report(o, "hsi_mixed_denoise", r.l, r.report, wall, support_mask(r.s));
    };
  });

  auto *mod = define("mod", "background / foreground decomposition");
  mod->add_option("--in", o.in)->required();
  mod->add_option("--out", o.out, "background")->required();
  mod->add_option("--out2", o.out2, "foreground objects");
  mod->add_option("--out3", o.out3, "dynamic background");
  mod->add_option("--out4", o.out4, "all motion (B complement)");
  add_weights(mod, o, {"lambda1", "lambda2", "lambda3"});
  add_solver_flags(mod, o);
  add_report_flags(mod, o);
  mod->callback([&] {
    action = [&] {
      ModParams p{o.get("lambda1"), o.get("lambda2"), o.get("lambda3")};
      const auto t0 = Clock::now();
      auto r = mod_decompose(read_tensor(o.in), p, o.config());
      const double wall = seconds_since(t0);
      write_tensor(r.b, o.out);
      write_if(o.out2, r.e);
      write_if(o.out3, r.d);
      write_if(o.out4, r.f);
      report(o, "mod_decompose", r.b, r.report, wall, support_mask(r.e));
    };
  });

  auto *rain = define("derain", "rain streak removal");
  rain->add_option("--in", o.in)->required();
  rain->add_option("--out", o.out, "background")->required();
  rain->add_option("--out2", o.out2, "rain streaks");
  add_weights(rain, o, {"lambda1", "lambda2", "lambda3", "lambda4"});
  add_solver_flags(rain, o);
  add_report_flags(rain, o);
  rain->callback([&] {
    action = [&] {
      DerainParams p{o.get("lambda1"), o.get("lambda2"), o.get("lambda3"),
                     o.get("lambda4")};
      const auto t0 = Clock::now();
      auto r = derain(read_tensor(o.in), p, o.config());
      const double wall = seconds_since(t0);
      write_tensor(r.b, o.out);
      write_if(o.out2, r.r);
      report(o, "derain", r.b, r.report, wall, support_mask(r.r));
    };
  });

  Index factor = 2, kernel = 3;
  auto *sr = define("sr", "single-image super-resolution (n1 x n2 x 1 input)");
  sr->add_option("--in", o.in)->required();
  sr->add_option("--out", o.out)->required();
  sr->add_option("--factor", factor, "decimation factor");
  sr->add_option("--kernel-size", kernel, "odd side of the box blur");
  add_weights(sr, o, {"lambda1", "lambda2"});
  add_solver_flags(sr, o);
  add_report_flags(sr, o);
  sr->callback([&] {
    action = [&] {
      const auto y = frontal0(read_tensor(o.in));
      const auto h = DegradationOp::box(kernel, factor);
      const auto t0 = Clock::now();
      auto r = lrtv_super_resolve(y, h, o.get("lambda1").value_or(1.0),
                                  o.get("lambda2").value_or(0.1), o.config());
      const double wall = seconds_since(t0);
      const auto x = as_tensor(r.x);
      write_tensor(x, o.out);
      report(o, "lrtv_super_resolve", x, r.report, wall);
    };
  });

  int clusters = 2;
  std::string truth_labels;
  auto *cluster = define("cluster", "cluster images stored as lateral slices");
  cluster->add_option("--in", o.in)->required();
  cluster->add_option("--clusters", clusters, "number of clusters")->required();
  cluster->add_option("--out", o.out, "labels, one per line");
  cluster->add_option("--truth", truth_labels, "true labels, one per line");
  add_weights(cluster, o, {"lambda1", "lambda2"});
  add_solver_flags(cluster, o);
  cluster->add_option("--metrics-csv", o.csv);
  cluster->add_option("--experiment", o.experiment);
  cluster->callback([&] {
    action = [&] {
      RepresentationParams p;
      p.lambda1 = o.get("lambda1").value_or(p.lambda1);
      p.lambda2 = o.get("lambda2").value_or(p.lambda2);
      const auto t0 = Clock::now();
      auto r = cluster_images(read_tensor(o.in), clusters, p, o.config());
      const double wall = seconds_since(t0);
      for (std::size_t n = 0; n < r.labels.size(); ++n)
        std::cout << (n ? "," : "") << r.labels[n];
      std::cout << '\n';
      if (!o.out.empty())
        write_labels(o.out, r.labels);
      MetricsRow row;
      row.experiment = o.experiment;
      row.solver = "cluster_images";
      row.iterations = r.report.iterations;
      row.wall_time_s = wall;
      row.converged = r.report.converged;
      if (!truth_labels.empty()) {
        row.cluster_accuracy = cluster_accuracy(r.labels, read_labels(truth_labels));
        std::cout << "accuracy " << format(*row.cluster_accuracy) << '\n';
      }
      if (!o.csv.empty())
        append_csv(row, o.csv);
    };
  });

  // Data and scoring.
  std::string kind;
  Index n1 = 30, n2 = 30, n3 = 10, rank = 2;
  double rho = 0.05, magnitude = 5.0, observed = 0.5;
  auto *synth = define("synth", "write a synthetic dataset");
  synth->add_option("kind", kind, "dataset kind")
      ->required()
      ->check(CLI::IsMember({"low_tubal_rank", "sparse_spikes", "missing_mask",
                             "surveillance_video", "rain_streaks", "hsi_cube",
                             "submodule_images"}));
  synth->add_option("--n1", n1);
  synth->add_option("--n2", n2);
  synth->add_option("--n3", n3);
  synth->add_option("--rank", rank, "tubal rank, or submodule dimension");
  synth->add_option("--density", rho, "spike / streak / impulse fraction");
  synth->add_option("--magnitude", magnitude, "spike or streak magnitude");
  synth->add_option("--observed", observed, "observed fraction for masks");
  synth->add_option("--clusters", clusters, "number of submodules");
  synth->add_option("--seed", o.seed);
  synth->add_option("--out", o.out)->required();
  synth->add_option("--out2", o.out2);
  synth->add_option("--out3", o.out3);
  synth->callback([&] {
    action = [&] {
      const Dims d{n1, n2, n3};
      if (kind == "low_tubal_rank") {
        write_tensor(low_tubal_rank(d, rank, o.seed), o.out);
      } else if (kind == "sparse_spikes") {
        write_tensor(sparse_spikes(d, rho, magnitude, o.seed), o.out);
      } else if (kind == "missing_mask") {
        write_tensor(missing_mask(d, observed, o.seed), o.out);
      } else if (kind == "surveillance_video") {
        const auto s = surveillance_video({d}, o.seed);
        write_tensor(s.video, o.out);
        if (!o.out2.empty())
          write_tensor(s.foreground, o.out2);
        write_if(o.out3, s.background);
      } else if (kind == "rain_streaks") {
        RainParams p;
        p.dims = d;
        p.density = rho;
        p.magnitude = magnitude;
        const auto s = rain_streaks(p, o.seed);
        write_tensor(s.rainy, o.out);
        write_if(o.out2, s.clean);
        if (!o.out3.empty())
          write_tensor(s.streaks, o.out3);
      } else if (kind == "hsi_cube") {
        HsiParams p;
        p.dims = d;
        p.impulse = rho;
        const auto s = hsi_cube(p, o.seed);
        write_tensor(s.noisy, o.out);
        write_if(o.out2, s.clean);
      } else {
        SubmoduleParams p;
        p.n1 = n1;
        p.n3 = n3;
        p.clusters = clusters;
        p.per_cluster = n2;
        p.dimension = rank;
        const auto s = submodule_images(p, o.seed);
        write_tensor(s.images, o.out);
        if (!o.out2.empty())
          write_labels(o.out2, s.labels);
      }
    };
  });

  auto *metrics = define("metrics", "compare an estimate with a reference");
  metrics->add_option("--in", o.in, "estimate")->required();
  metrics->add_option("--ref", o.ref, "reference")->required();
  metrics->add_option("--peak", o.peak, "PSNR peak value");
  metrics->add_option("--metrics-csv", o.csv);
  metrics->add_option("--experiment", o.experiment);
  metrics->callback([&] {
    action = [&] {
      MetricsRow row;
      row.experiment = o.experiment;
      row.solver = "metrics";
      if (peek_dtype(o.in) == Dtype::mask) {
        row.f_measure = f_measure(read_mask(o.in), read_mask(o.ref));
        std::cout << "f_measure " << format(*row.f_measure) << '\n';
      } else {
        const auto x = read_tensor(o.in), ref = read_tensor(o.ref);
        row.psnr = psnr(x, ref, o.peak);
        row.rse = rse(x, ref);
        std::cout << "psnr " << format(*row.psnr) << "\nrse "
                  << format(*row.rse) << '\n';
      }
      if (!o.csv.empty())
        append_csv(row, o.csv);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }
  try {
    if (action)
      action();
  } catch (const CLI::ParseError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
