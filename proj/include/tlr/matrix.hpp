#pragma once

// Matrix counterparts of the tensor stack: rank, nuclear norm, singular value
// thresholding, completion, robust PCA, and low-rank + TV super-resolution.
// With n3 = 1 the tensor solvers reduce to these.

#include "tlr/admm.hpp"

#include <Eigen/Dense>

#include <optional>

namespace tlr {

using MaskMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Number of singular values above tol * sigma_max.
Eigen::Index matrix_rank(const Eigen::MatrixXd &m, double tol = 1e-10);

double nuclear_norm(const Eigen::MatrixXd &m);

/// U diag(max(sigma - tau, 0)) V^T.
Eigen::MatrixXd matrix_svt(const Eigen::MatrixXd &y, double tau);

/// Entrywise sign(x) max(|x| - tau, 0).
Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd &x, double tau);

struct MatrixCompletion {
  Eigen::MatrixXd x;
  SolverReport report;
};

/// min ||X||_* s.t. X = M on omega.
MatrixCompletion lrmc(const Eigen::MatrixXd &m, const MaskMatrix &omega,
                      const SolverConfig &cfg = {});

struct MatrixRpca {
  Eigen::MatrixXd l;
  Eigen::MatrixXd s;
  SolverReport report;
};

/// min ||L||_* + lambda ||S||_1 s.t. M = L + S. lambda defaults to
/// 1 / sqrt(max(rows, cols)).
MatrixRpca rpca(const Eigen::MatrixXd &m, std::optional<double> lambda = {},
                const SolverConfig &cfg = {});

/// Circular blur with an odd-sized kernel centred on the pixel, followed by
/// keeping every factor-th row and column starting from the first.
class DegradationOp {
public:
  /// Throws std::invalid_argument unless the kernel has odd side lengths and
  /// sums to one within 1e-12, and factor >= 1.
  DegradationOp(Eigen::MatrixXd kernel, Eigen::Index factor);

  /// Normalized box kernel of the given odd size.
  static DegradationOp box(Eigen::Index size, Eigen::Index factor);

  const Eigen::MatrixXd &kernel() const { return kernel_; }
  Eigen::Index factor() const { return factor_; }

  /// Circular convolution only.
  Eigen::MatrixXd blur(const Eigen::MatrixXd &x) const;
  /// Adjoint of blur (circular correlation).
  Eigen::MatrixXd blur_adjoint(const Eigen::MatrixXd &y) const;

  Eigen::MatrixXd apply(const Eigen::MatrixXd &x) const;
  /// Adjoint of apply for a high-resolution grid of rows x cols.
  Eigen::MatrixXd adjoint(const Eigen::MatrixXd &y, Eigen::Index rows,
                          Eigen::Index cols) const;

private:
  Eigen::MatrixXd kernel_;
  Eigen::Index factor_;
};

/// High-resolution estimate from one degraded image:
/// min lambda1 ||X||_* + lambda2 TV(X) s.t. H X = Y,
/// with anisotropic circular TV. The output grid is (rows, cols) of y times
/// the decimation factor.
struct SuperResolution {
  Eigen::MatrixXd x;
  SolverReport report;
};

SuperResolution lrtv_super_resolve(const Eigen::MatrixXd &y,
                                   const DegradationOp &h,
                                   double lambda1 = 1.0, double lambda2 = 0.1,
                                   const SolverConfig &cfg = {});

/// Nearest-neighbour upsampling by an integer factor.
Eigen::MatrixXd nearest_upsample(const Eigen::MatrixXd &y, Eigen::Index factor);

} // namespace tlr
