#pragma once

// ADMM solvers for the tensor recovery models. Every solver works on double
// tensors, starts the duals at zero, and stops when all constraint residuals
// and all primal changes are at most cfg.tol in max-norm (or at max_iter).
//
// Nuclear-norm terms use ||X||_tnn = tnn(X) / n3, the normalization for which
// tsvt(., t) is the proximal map of t * ||.||_tnn. The objective traces in
// SolverReport are evaluated with this norm.

#include "tlr/admm.hpp"
#include "tlr/shrinkage.hpp"
#include "tlr/tensor3.hpp"

#include <optional>

namespace tlr {

/// tnn(x) / n3.
double scaled_tnn(const Tensor3d &x);

/// 1 / sqrt(max(n1, n2) * n3).
double default_sparse_weight(const Dims &dims);

/// Anisotropic TV: sum of |forward differences| along the listed axes.
double total_variation(const Tensor3d &x, std::initializer_list<DiffAxis> axes);

struct Completion {
  Tensor3d x;
  SolverReport report;
};

/// min ||X||_tnn s.t. X = M on omega. Observed entries of x equal m exactly.
Completion lrtc(const Tensor3d &m, const Mask3 &omega,
                const SolverConfig &cfg = {});

struct LowRankSparse {
  Tensor3d l;
  Tensor3d s;
  SolverReport report;
};

/// min ||L||_tnn + lambda ||S||_1 s.t. M = L + S.
LowRankSparse trpca(const Tensor3d &m, std::optional<double> lambda = {},
                    const SolverConfig &cfg = {});

struct Denoised {
  Tensor3d x;
  SolverReport report;
};

/// min ||Y - X||_F^2 + lambda sum_k,i w_i sigma_i(k) / n3, in closed form.
Denoised wtnn_denoise(const Tensor3d &y, double lambda,
                      const WeightVector<double> &w,
                      const SolverConfig &cfg = {});

struct MixedNoiseParams {
  std::optional<double> lambda; // sparse weight; defaults to the trpca rule
  double tau = 1.0;             // Gaussian-noise weight
  double gamma = 0.01;          // spatial TV weight
};

struct MixedNoise {
  Tensor3d l;
  Tensor3d s;
  Tensor3d n;
  SolverReport report;
};

/// min ||L||_tnn + lambda ||S||_1 + tau ||N||_F^2 + gamma TV_xy(L)
/// s.t. H = L + S + N.
MixedNoise hsi_mixed_denoise(const Tensor3d &h, const MixedNoiseParams &p = {},
                             const SolverConfig &cfg = {});

struct PatchScheme {
  Index size = 16;
  Index stride = 8;
};

/// Runs hsi_mixed_denoise on overlapping size x size x n3 patches and
/// averages the overlaps. The report holds the slowest patch's iteration
/// count and converged is true only if every patch converged.
MixedNoise hsi_mixed_denoise_patches(const Tensor3d &h, PatchScheme scheme,
                                     const MixedNoiseParams &p = {},
                                     const SolverConfig &cfg = {});

struct ModParams {
  std::optional<double> lambda1; // foreground sparsity; half the trpca rule
  std::optional<double> lambda2; // dynamic-background sparsity; lambda1
  std::optional<double> lambda3; // foreground TV; defaults to 0.1 lambda1
};

struct ModDecomposition {
  Tensor3d b; // background
  Tensor3d f; // everything moving
  Tensor3d d; // dynamic background
  Tensor3d e; // foreground objects
  SolverReport report;
};

/// min ||B||_tnn + l1 ||F||_1 + l2 ||D||_1 + l3 TV_xyt(E)
/// s.t. T = B + F, F = D + E.
ModDecomposition mod_decompose(const Tensor3d &t, const ModParams &p = {},
                               const SolverConfig &cfg = {});

struct DerainParams {
  std::optional<double> lambda1; // streak sparsity
  std::optional<double> lambda2; // streak smoothness along y
  std::optional<double> lambda3; // background TV along x
  std::optional<double> lambda4; // background TV along t
};

struct Derained {
  Tensor3d b;
  Tensor3d r;
  SolverReport report;
};

/// min ||B||_tnn + l1 ||R||_1 + l2 ||Dy R||_1 + l3 ||Dx B||_1 + l4 ||Dt B||_1
/// s.t. O = B + R. Rain falls along y (rows).
Derained derain(const Tensor3d &o, const DerainParams &p = {},
                const SolverConfig &cfg = {});

/// |x| > fraction * max|x|.
Mask3 support_mask(const Tensor3d &x, double fraction = 0.1);

} // namespace tlr
