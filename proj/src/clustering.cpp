#include "tlr/clustering.hpp"

#include "tlr/shrinkage.hpp"
#include "tlr/solvers.hpp"
#include "tlr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace tlr {

using Eigen::MatrixXd;

Tensor3d stack_images(const std::vector<MatrixXd> &images) {
  if (images.size() < 2)
    throw std::invalid_argument("stack_images: need at least two images");
  const Index n1 = images.front().rows(), n3 = images.front().cols();
  for (const auto &im : images)
    if (im.rows() != n1 || im.cols() != n3)
      throw DimensionError("stack_images: images differ in shape");
  return Tensor3d::generate(
      {n1, static_cast<Index>(images.size()), n3},
      [&](Index i, Index j, Index k) { return images[j](i, k); });
}

MatrixXd image(const Tensor3d &y, Index j) {
  if (j < 0 || j >= y.n2())
    throw std::out_of_range("image: index out of range");
  MatrixXd out(y.n1(), y.n3());
  for (Index k = 0; k < y.n3(); ++k)
    for (Index i = 0; i < y.n1(); ++i)
      out(i, k) = y(i, j, k);
  return out;
}

MatrixXd dissimilarity_matrix(const Tensor3d &y) {
  const Index n = y.n2();
  if (n < 2)
    throw std::invalid_argument("dissimilarity_matrix: need at least two images");
  // Column j holds image j, centred.
  MatrixXd v(y.n1() * y.n3(), n);
  for (Index j = 0; j < n; ++j)
    v.col(j) = image(y, j).reshaped();
  v.rowwise() -= v.colwise().mean();
  const Eigen::VectorXd norms = v.colwise().norm();
  const double scale = norms.size() ? norms.maxCoeff() : 0.0;

  MatrixXd m = MatrixXd::Ones(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      if (norms(i) <= 1e-12 * scale || norms(j) <= 1e-12 * scale ||
          scale == 0.0)
        continue;
      const double c = v.col(i).dot(v.col(j)) / (norms(i) * norms(j));
      m(i, j) = m(j, i) = std::clamp(1.0 - std::abs(c), 0.0, 1.0);
    }
  m.diagonal().setZero();
  return m;
}

Representation solve_representation(const Tensor3d &y, const MatrixXd &m,
                                    const RepresentationParams &p,
                                    const SolverConfig &cfg) {
  const Index n = y.n2(), n3 = y.n3();
  if (m.rows() != n || m.cols() != n)
    throw DimensionError("solve_representation: mask must be N x N");
  if (!(p.lambda1 >= 0.0) || !(p.lambda2 >= 0.0))
    throw std::invalid_argument("solve_representation: weights must be >= 0");
  const Dims zd{n, n, n3};

  // Gram matrix of every independent Fourier slice, eigendecomposed once so
  // that each Z-update is a diagonal solve.
  const auto yf = to_spectral(y);
  const Index half = yf.independent_count();
  std::vector<Eigen::MatrixXcd> basis(half);
  std::vector<Eigen::VectorXd> eig(half);
  std::vector<Eigen::MatrixXcd> gram(half);
  for (Index k = 0; k < half; ++k) {
    gram[k] = yf[k].adjoint() * yf[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram[k]);
    basis[k] = es.eigenvectors();
    eig[k] = es.eigenvalues().cwiseMax(0.0);
  }

  detail::AdmmLoop loop(cfg);
  Tensor3d z(zd), c(zd), q(zd), y1(zd), y2(zd);
  while (!loop.done()) {
    const double mu = loop.mu();
    auto target = to_spectral(Tensor3d(c - y1 / mu + q - y2 / mu));
    SpectralTensor3<double> zf(zd);
#pragma omp parallel for
    for (Index k = 0; k < half; ++k) {
      const Eigen::MatrixXcd rhs = 2.0 * p.lambda2 * gram[k] + mu * target[k];
      const Eigen::ArrayXd inv = 1.0 / (2.0 * p.lambda2 * eig[k].array() + 2.0 * mu);
      zf[k] = basis[k] * (inv.matrix().asDiagonal() * (basis[k].adjoint() * rhs));
      if (zf.self_conjugate(k))
        zf[k] = zf[k].real().cast<std::complex<double>>();
    }
    zf.fill_conjugates();
    Tensor3d z_new = from_spectral(zf);
    Tensor3d c_new = tsvt(z_new + y1 / mu, 1.0 / mu);
    Tensor3d q_new = masked_soft_threshold(z_new + y2 / mu, m, p.lambda1 / mu);

    const Tensor3d r1 = z_new - c_new;
    const Tensor3d r2 = z_new - q_new;
    y1 = y1 + mu * r1;
    y2 = y2 + mu * r2;
    const double change = std::max({max_abs(z_new - z), max_abs(c_new - c),
                                    max_abs(q_new - q)});
    z = std::move(z_new);
    c = std::move(c_new);
    q = std::move(q_new);

    double masked = 0.0;
    for (Index k = 0; k < n3; ++k)
      masked += (m.array() * z.frontal(k).array().abs()).sum();
    const double fit = frobenius_norm(y - t_product(y, z));
    loop.step(std::max(max_abs(r1), max_abs(r2)), change,
              scaled_tnn(z) + p.lambda1 * masked + p.lambda2 * fit * fit);
  }
  return {z, std::move(loop).finish()};
}

MatrixXd affinity(const Tensor3d &z) {
  if (z.n1() != z.n2())
    throw DimensionError("affinity: coefficient tensor must be N x N x n3");
  const Index n = z.n1();
  MatrixXd tube_norm(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      tube_norm(i, j) = tube(z, i, j).norm();
  return tube_norm + tube_norm.transpose();
}

namespace {

struct KMeansRun {
  std::vector<int> labels;
  double inertia = std::numeric_limits<double>::infinity();
};

KMeansRun kmeans(const MatrixXd &x, int k, std::mt19937_64 &rng) {
  const Index n = x.rows();
  MatrixXd centres(k, x.cols());
  // k-means++ seeding.
  std::uniform_int_distribution<Index> first(0, n - 1);
  centres.row(0) = x.row(first(rng));
  Eigen::VectorXd d2 = (x.rowwise() - centres.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    Index pick = 0;
    if (d2.sum() > 0.0) {
      std::discrete_distribution<Index> dist(d2.data(), d2.data() + n);
      pick = dist(rng);
    } else {
      pick = first(rng);
    }
    centres.row(c) = x.row(pick);
    d2 = d2.cwiseMin((x.rowwise() - centres.row(c)).rowwise().squaredNorm());
  }

  KMeansRun run;
  run.labels.assign(static_cast<std::size_t>(n), -1);
  for (int iter = 0; iter < 300; ++iter) {
    bool moved = false;
    Eigen::VectorXd best(n);
    for (Index i = 0; i < n; ++i) {
      Eigen::Index c = 0;
      best(i) = (centres.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&c);
      if (run.labels[i] != int(c)) {
        run.labels[i] = int(c);
        moved = true;
      }
    }
    // An emptied cluster takes the point farthest from its centre.
    for (int c = 0; c < k; ++c) {
      if (std::find(run.labels.begin(), run.labels.end(), c) != run.labels.end())
        continue;
      Eigen::Index far = 0;
      best.maxCoeff(&far);
      run.labels[far] = c;
      best(far) = 0.0;
      moved = true;
    }
    centres.setZero();
    Eigen::VectorXd count = Eigen::VectorXd::Zero(k);
    for (Index i = 0; i < n; ++i) {
      centres.row(run.labels[i]) += x.row(i);
      count(run.labels[i]) += 1.0;
    }
    for (int c = 0; c < k; ++c)
      centres.row(c) /= count(c);
    if (!moved)
      break;
  }
  run.inertia = 0.0;
  for (Index i = 0; i < n; ++i)
    run.inertia += (x.row(i) - centres.row(run.labels[i])).squaredNorm();
  return run;
}

} // namespace

std::vector<int> spectral_cluster(const MatrixXd &w, int clusters,
                                  std::uint64_t seed) {
  const Index n = w.rows();
  if (w.cols() != n)
    throw DimensionError("spectral_cluster: affinity must be square");
  if (clusters < 2 || clusters > n)
    throw std::invalid_argument("spectral_cluster: need 2 <= clusters <= N");
  if (!w.allFinite() || (w.array() < 0.0).any())
    throw std::invalid_argument("spectral_cluster: affinity must be finite and nonnegative");
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("spectral_cluster: affinity must be symmetric");
  const Eigen::VectorXd degree = w.rowwise().sum();
  if (degree.maxCoeff() <= 0.0)
    throw std::invalid_argument("spectral_cluster: affinity has no edges");

  const Eigen::VectorXd inv_sqrt =
      (degree.array() > 0.0).select(degree.array().rsqrt(), 0.0);
  const MatrixXd a = inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  // Largest eigenvalues of a are the smallest of I - a.
  MatrixXd embed = es.eigenvectors().rightCols(clusters);
  for (Index i = 0; i < n; ++i) {
    const double norm = embed.row(i).norm();
    if (norm > 0.0)
      embed.row(i) /= norm;
  }

  std::mt19937_64 rng(seed);
  KMeansRun best;
  for (int restart = 0; restart < 20; ++restart) {
    auto run = kmeans(embed, clusters, rng);
    if (run.inertia < best.inertia)
      best = std::move(run);
  }
  return best.labels;
}

ClusteringResult cluster_images(const Tensor3d &y, int clusters,
                                const RepresentationParams &p,
                                const SolverConfig &cfg) {
  const MatrixXd m = dissimilarity_matrix(y);
  auto rep = solve_representation(y, m, p, cfg);
  MatrixXd w = affinity(rep.z);
  auto labels = spectral_cluster(w, clusters, cfg.seed);
  return {std::move(labels), std::move(w), std::move(rep.report)};
}

} // namespace tlr
