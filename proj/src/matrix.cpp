#include "tlr/matrix.hpp"

#include "fourier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tlr {

using Eigen::Index;
using Eigen::MatrixXd;

Index matrix_rank(const MatrixXd &m, double tol) {
  if (m.size() == 0)
    return 0;
  const Eigen::VectorXd s = Eigen::BDCSVD<MatrixXd>(m).singularValues();
  if (s(0) == 0.0)
    return 0;
  return (s.array() > tol * s(0)).count();
}

double nuclear_norm(const MatrixXd &m) {
  if (m.size() == 0)
    return 0.0;
  return Eigen::BDCSVD<MatrixXd>(m).singularValues().sum();
}

MatrixXd matrix_svt(const MatrixXd &y, double tau) {
  if (!(tau >= 0.0))
    throw std::invalid_argument("matrix_svt: threshold must be nonnegative");
  if (tau == 0.0 || y.size() == 0)
    return y;
  Eigen::BDCSVD<MatrixXd> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = (svd.singularValues().array() - tau).max(0.0);
  Index keep = 0;
  while (keep < s.size() && s(keep) > 0.0)
    ++keep;
  return svd.matrixU().leftCols(keep) * s.head(keep).asDiagonal() *
         svd.matrixV().leftCols(keep).transpose();
}

MatrixXd soft_threshold(const MatrixXd &x, double tau) {
  if (!(tau >= 0.0))
    throw std::invalid_argument("soft_threshold: threshold must be nonnegative");
  return (x.array().sign() * (x.array().abs() - tau).max(0.0)).matrix();
}

namespace {

double max_norm(const MatrixXd &m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

MatrixXd diff_cols(const MatrixXd &x) {
  const Index c = x.cols();
  MatrixXd out(x.rows(), c);
  for (Index j = 0; j < c; ++j)
    out.col(j) = x.col((j + 1) % c) - x.col(j);
  return out;
}

MatrixXd diff_cols_adjoint(const MatrixXd &g) {
  const Index c = g.cols();
  MatrixXd out(g.rows(), c);
  for (Index j = 0; j < c; ++j)
    out.col(j) = g.col((j + c - 1) % c) - g.col(j);
  return out;
}

MatrixXd diff_rows(const MatrixXd &x) {
  return diff_cols(x.transpose()).transpose();
}

MatrixXd diff_rows_adjoint(const MatrixXd &g) {
  return diff_cols_adjoint(g.transpose()).transpose();
}

Tensor3d as_tensor(const MatrixXd &m) {
  return Tensor3d::generate({m.rows(), m.cols(), 1},
                            [&](Index i, Index j, Index) { return m(i, j); });
}

MatrixXd as_matrix(const Tensor3d &t) {
  MatrixXd m(t.n1(), t.n2());
  for (Index i = 0; i < t.n1(); ++i)
    for (Index j = 0; j < t.n2(); ++j)
      m(i, j) = t(i, j, 0);
  return m;
}

} // namespace

MatrixCompletion lrmc(const MatrixXd &m, const MaskMatrix &omega,
                      const SolverConfig &cfg) {
  if (omega.rows() != m.rows() || omega.cols() != m.cols())
    throw DimensionError("lrmc: mask shape does not match the matrix");
  if (!omega.any())
    throw std::invalid_argument("lrmc: no observed entries");
  detail::AdmmLoop loop(cfg);
  if (omega.all()) {
    loop.step(0.0, 0.0, nuclear_norm(m));
    return {m, std::move(loop).finish()};
  }
  const MatrixXd observed = omega.select(m, 0.0);
  MatrixXd x = observed;
  MatrixXd z = MatrixXd::Zero(m.rows(), m.cols());
  MatrixXd y = z;
  while (!loop.done()) {
    const double mu = loop.mu();
    const MatrixXd z_new = matrix_svt(x + y / mu, 1.0 / mu);
    const MatrixXd x_new = omega.select(m, z_new - y / mu);
    y += mu * (x_new - z_new);
    const double change =
        std::max(max_norm(x_new - x), max_norm(z_new - z));
    x = x_new;
    z = z_new;
    loop.step(max_norm(x - z), change, nuclear_norm(x));
  }
  return {x, std::move(loop).finish()};
}

MatrixRpca rpca(const MatrixXd &m, std::optional<double> lambda,
                const SolverConfig &cfg) {
  const double lam =
      lambda.value_or(1.0 / std::sqrt(double(std::max(m.rows(), m.cols()))));
  if (!(lam > 0.0))
    throw std::invalid_argument("rpca: lambda must be positive");
  detail::AdmmLoop loop(cfg);
  MatrixXd l = m;
  MatrixXd s = MatrixXd::Zero(m.rows(), m.cols());
  MatrixXd y = s;
  while (!loop.done()) {
    const double mu = loop.mu();
    const MatrixXd l_new = matrix_svt(m - s + y / mu, 1.0 / mu);
    const MatrixXd s_new = soft_threshold(m - l_new + y / mu, lam / mu);
    const MatrixXd r = m - l_new - s_new;
    y += mu * r;
    const double change = std::max(max_norm(l_new - l), max_norm(s_new - s));
    l = l_new;
    s = s_new;
    loop.step(max_norm(r), change,
              nuclear_norm(l) + lam * (m - l).cwiseAbs().sum());
  }
  return {l, s, std::move(loop).finish()};
}

DegradationOp::DegradationOp(MatrixXd kernel, Index factor)
    : kernel_(std::move(kernel)), factor_(factor) {
  if (kernel_.rows() % 2 == 0 || kernel_.cols() % 2 == 0)
    throw std::invalid_argument("DegradationOp: kernel sides must be odd");
  if (!kernel_.allFinite() || std::abs(kernel_.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("DegradationOp: kernel must sum to 1");
  if (factor_ < 1)
    throw std::invalid_argument("DegradationOp: factor must be >= 1");
}

DegradationOp DegradationOp::box(Index size, Index factor) {
  if (size < 1)
    throw std::invalid_argument("DegradationOp::box: size must be >= 1");
  return {MatrixXd::Constant(size, size, 1.0 / double(size * size)), factor};
}

MatrixXd DegradationOp::blur(const MatrixXd &x) const {
  const Index r = x.rows(), c = x.cols();
  const Index ci = kernel_.rows() / 2, cj = kernel_.cols() / 2;
  MatrixXd out = MatrixXd::Zero(r, c);
  for (Index a = 0; a < kernel_.rows(); ++a)
    for (Index b = 0; b < kernel_.cols(); ++b) {
      const double w = kernel_(a, b);
      if (w == 0.0)
        continue;
      // out(i, j) += w * x(i - (a - ci), j - (b - cj))
      const Index si = ((ci - a) % r + r) % r;
      const Index sj = ((cj - b) % c + c) % c;
      for (Index j = 0; j < c; ++j)
        for (Index i = 0; i < r; ++i)
          out(i, j) += w * x((i + si) % r, (j + sj) % c);
    }
  return out;
}

MatrixXd DegradationOp::blur_adjoint(const MatrixXd &y) const {
  const Index r = y.rows(), c = y.cols();
  const Index ci = kernel_.rows() / 2, cj = kernel_.cols() / 2;
  MatrixXd out = MatrixXd::Zero(r, c);
  for (Index a = 0; a < kernel_.rows(); ++a)
    for (Index b = 0; b < kernel_.cols(); ++b) {
      const double w = kernel_(a, b);
      if (w == 0.0)
        continue;
      const Index si = ((a - ci) % r + r) % r;
      const Index sj = ((b - cj) % c + c) % c;
      for (Index j = 0; j < c; ++j)
        for (Index i = 0; i < r; ++i)
          out(i, j) += w * y((i + si) % r, (j + sj) % c);
    }
  return out;
}

MatrixXd DegradationOp::apply(const MatrixXd &x) const {
  if (x.rows() % factor_ != 0 || x.cols() % factor_ != 0)
    throw DimensionError("DegradationOp: image " + std::to_string(x.rows()) +
                         "x" + std::to_string(x.cols()) +
                         " is not divisible by factor " +
                         std::to_string(factor_));
  const MatrixXd b = blur(x);
  MatrixXd out(x.rows() / factor_, x.cols() / factor_);
  for (Index j = 0; j < out.cols(); ++j)
    for (Index i = 0; i < out.rows(); ++i)
      out(i, j) = b(i * factor_, j * factor_);
  return out;
}

MatrixXd DegradationOp::adjoint(const MatrixXd &y, Index rows,
                                Index cols) const {
  if (rows != y.rows() * factor_ || cols != y.cols() * factor_)
    throw DimensionError("DegradationOp::adjoint: target grid does not match");
  MatrixXd up = MatrixXd::Zero(rows, cols);
  for (Index j = 0; j < y.cols(); ++j)
    for (Index i = 0; i < y.rows(); ++i)
      up(i * factor_, j * factor_) = y(i, j);
  return blur_adjoint(up);
}

MatrixXd nearest_upsample(const MatrixXd &y, Index factor) {
  if (factor < 1)
    throw std::invalid_argument("nearest_upsample: factor must be >= 1");
  MatrixXd out(y.rows() * factor, y.cols() * factor);
  for (Index j = 0; j < out.cols(); ++j)
    for (Index i = 0; i < out.rows(); ++i)
      out(i, j) = y(i / factor, j / factor);
  return out;
}

SuperResolution lrtv_super_resolve(const MatrixXd &y, const DegradationOp &h,
                                   double lambda1, double lambda2,
                                   const SolverConfig &cfg) {
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0))
    throw std::invalid_argument("lrtv_super_resolve: weights must be >= 0");
  if (y.size() == 0)
    throw DimensionError("lrtv_super_resolve: empty observation");
  const Index d = h.factor();
  const Index rows = y.rows() * d, cols = y.cols() * d;
  if (h.kernel().rows() > rows || h.kernel().cols() > cols)
    throw DimensionError("lrtv_super_resolve: kernel larger than the image");

  // Normal-equation symbol of I + Dx^T Dx + Dy^T Dy + K^T K.
  const Dims grid{rows, cols, 1};
  MatrixXd impulse = MatrixXd::Zero(rows, cols);
  impulse(0, 0) = 1.0;
  const auto kf = detail::fft3(as_tensor(h.blur(impulse)));
  const Eigen::ArrayXd symbol =
      1.0 + detail::difference_symbol(grid, true, true, false) + kf.abs2();

  detail::AdmmLoop loop(cfg);
  MatrixXd x = nearest_upsample(y, d);
  MatrixXd z = x, gx = diff_cols(x), gy = diff_rows(x), u = h.blur(x);
  MatrixXd yz = MatrixXd::Zero(rows, cols), yx = yz, yy = yz, yu = yz;
  auto pin = [&](MatrixXd &m) {
    for (Index j = 0; j < y.cols(); ++j)
      for (Index i = 0; i < y.rows(); ++i)
        m(i * d, j * d) = y(i, j);
  };
  pin(u);
  while (!loop.done()) {
    const double mu = loop.mu();
    const MatrixXd rhs = (z - yz / mu) + diff_cols_adjoint(gx - yx / mu) +
                         diff_rows_adjoint(gy - yy / mu) +
                         h.blur_adjoint(u - yu / mu);
    const MatrixXd x_new =
        as_matrix(detail::ifft3_real(detail::fft3(as_tensor(rhs)) / symbol, grid));

    const MatrixXd dx = diff_cols(x_new), dy = diff_rows(x_new);
    const MatrixXd kx = h.blur(x_new);
    const MatrixXd z_new = matrix_svt(x_new + yz / mu, lambda1 / mu);
    const MatrixXd gx_new = soft_threshold(dx + yx / mu, lambda2 / mu);
    const MatrixXd gy_new = soft_threshold(dy + yy / mu, lambda2 / mu);
    MatrixXd u_new = kx + yu / mu;
    pin(u_new);

    yz += mu * (x_new - z_new);
    yx += mu * (dx - gx_new);
    yy += mu * (dy - gy_new);
    yu += mu * (kx - u_new);
    const double residual =
        std::max({max_norm(x_new - z_new), max_norm(dx - gx_new),
                  max_norm(dy - gy_new), max_norm(kx - u_new)});
    const double change =
        std::max({max_norm(x_new - x), max_norm(z_new - z),
                  max_norm(gx_new - gx), max_norm(gy_new - gy),
                  max_norm(u_new - u)});
    x = x_new;
    z = z_new;
    gx = gx_new;
    gy = gy_new;
    u = u_new;
    loop.step(residual, change,
              lambda1 * nuclear_norm(x) +
                  lambda2 * (dx.cwiseAbs().sum() + dy.cwiseAbs().sum()));
  }
  return {x, std::move(loop).finish()};
}

} // namespace tlr
