#pragma once

// Clustering images that lie in a union of free submodules: images are the
// lateral slices of an n1 x N x n3 tensor, each is written as a t-linear
// combination of the others, and the coefficients drive spectral clustering.

#include "tlr/admm.hpp"
#include "tlr/tensor3.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace tlr {

/// Stacks n1 x n3 images as lateral slices: y(:, j, :) = images[j].
Tensor3d stack_images(const std::vector<Eigen::MatrixXd> &images);

/// Image j of a stacked tensor, as an n1 x n3 matrix.
Eigen::MatrixXd image(const Tensor3d &y, Index j);

/// m(i, j) = 1 - |corr(image i, image j)|, clamped to [0, 1] with a zero
/// diagonal. An image with zero variance is at distance 1 from every other.
Eigen::MatrixXd dissimilarity_matrix(const Tensor3d &y);

struct RepresentationParams {
  double lambda1 = 0.1; // masked l1 weight
  double lambda2 = 10.0; // self-expression fit weight
};

struct Representation {
  Tensor3d z; // N x N x n3
  SolverReport report;
};

/// min ||C||_tnn + lambda1 sum_k ||M .* Q(:,:,k)||_1 + lambda2 ||Y - Y * Z||_F^2
/// s.t. Z = C, Z = Q. Entries of m weight the l1 term and must lie in [0, 1].
Representation solve_representation(const Tensor3d &y, const Eigen::MatrixXd &m,
                                    const RepresentationParams &p = {},
                                    const SolverConfig &cfg = {});

/// w(i, j) = ||z(i, j, :)|| + ||z(j, i, :)||.
Eigen::MatrixXd affinity(const Tensor3d &z);

/// Normalized spectral clustering into `clusters` groups. Labels are
/// 0-based. Deterministic for a fixed seed.
std::vector<int> spectral_cluster(const Eigen::MatrixXd &w, int clusters,
                                  std::uint64_t seed = 0);

struct ClusteringResult {
  std::vector<int> labels;
  Eigen::MatrixXd affinity;
  SolverReport report;
};

/// Dissimilarity, representation, affinity and spectral clustering in turn.
ClusteringResult cluster_images(const Tensor3d &y, int clusters,
                                const RepresentationParams &p = {},
                                const SolverConfig &cfg = {});

} // namespace tlr
