#include "tlr/solvers.hpp"

#include "fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tlr {

double scaled_tnn(const Tensor3d &x) { return tnn(x) / double(x.n3()); }

double default_sparse_weight(const Dims &d) {
  return 1.0 / std::sqrt(double(std::max(d.n1, d.n2)) * double(d.n3));
}

double total_variation(const Tensor3d &x,
                       std::initializer_list<DiffAxis> axes) {
  double tv = 0.0;
  for (const auto a : axes)
    tv += l1_norm(diff(x, a));
  return tv;
}

Mask3 support_mask(const Tensor3d &x, double fraction) {
  const double cut = fraction * max_abs(x);
  return Mask3(x.dims(), (x.array().abs() > cut).eval());
}

namespace {

double gap(const Tensor3d &a, const Tensor3d &b) { return max_abs(a - b); }

Tensor3d zeros(const Dims &d) { return Tensor3d(d); }

// Solves (symbol applied in the 3-D Fourier domain) x = rhs.
Tensor3d solve_diagonal(const Tensor3d &rhs, const Eigen::ArrayXd &symbol) {
  return detail::ifft3_real(detail::fft3(rhs) / symbol, rhs.dims());
}

void require_weight(double w, const char *what) {
  if (!(w >= 0.0) || !std::isfinite(w))
    throw std::invalid_argument(std::string(what) + " must be finite and >= 0");
}

} // namespace

Completion lrtc(const Tensor3d &m, const Mask3 &omega, const SolverConfig &cfg) {
  detail::require_same(m.dims(), omega.dims(), "lrtc");
  if (count_true(omega) == 0)
    throw std::invalid_argument("lrtc: no observed entries");
  detail::AdmmLoop loop(cfg);
  if (count_true(omega) == m.size()) {
    loop.step(0.0, 0.0, scaled_tnn(m));
    return {m, std::move(loop).finish()};
  }
  const Dims d = m.dims();
  Tensor3d x = project_mask(m, omega);
  Tensor3d z = zeros(d), y = zeros(d);
  while (!loop.done()) {
    const double mu = loop.mu();
    Tensor3d z_new = tsvt(x + y / mu, 1.0 / mu);
    Tensor3d x_new(d, omega.array().select(m.array(), (z_new - y / mu).array()));
    const Tensor3d r = x_new - z_new;
    y = y + mu * r;
    const double change = std::max(gap(x_new, x), gap(z_new, z));
    x = std::move(x_new);
    z = std::move(z_new);
    loop.step(max_abs(r), change, scaled_tnn(x));
  }
  return {x, std::move(loop).finish()};
}

LowRankSparse trpca(const Tensor3d &m, std::optional<double> lambda,
                    const SolverConfig &cfg) {
  const double lam = lambda.value_or(default_sparse_weight(m.dims()));
  if (!(lam > 0.0))
    throw std::invalid_argument("trpca: lambda must be positive");
  detail::AdmmLoop loop(cfg);
  Tensor3d l = m, s = zeros(m.dims()), y = zeros(m.dims());
  while (!loop.done()) {
    const double mu = loop.mu();
    Tensor3d l_new = tsvt(m - s + y / mu, 1.0 / mu);
    Tensor3d s_new = soft_threshold(m - l_new + y / mu, lam / mu);
    const Tensor3d r = m - l_new - s_new;
    y = y + mu * r;
    const double change = std::max(gap(l_new, l), gap(s_new, s));
    l = std::move(l_new);
    s = std::move(s_new);
    loop.step(max_abs(r), change, scaled_tnn(l) + lam * l1_norm(m - l));
  }
  return {l, s, std::move(loop).finish()};
}

Denoised wtnn_denoise(const Tensor3d &y, double lambda,
                      const WeightVector<double> &w, const SolverConfig &cfg) {
  require_weight(lambda, "wtnn_denoise: lambda");
  detail::AdmmLoop loop(cfg);
  const auto scaled = w.scaled(lambda / 2.0);
  Tensor3d x = lambda == 0.0 ? y : weighted_tsvt(y, scaled);

  const auto yf = to_spectral(y);
  const auto xf = to_spectral(x);
  double penalty = 0.0;
  for (Index k = 0; k < yf.independent_count(); ++k) {
    const auto sy = detail::spectral_slice_singular_values(yf, k);
    const auto sx = detail::spectral_slice_singular_values(xf, k);
    const double v = w.weights_for(sy).dot(sx);
    penalty += yf.self_conjugate(k) ? v : 2.0 * v;
  }
  const double fit = frobenius_norm(y - x);
  loop.step(0.0, 0.0, fit * fit + lambda * penalty / double(y.n3()));
  auto report = std::move(loop).finish();
  report.converged = true;
  return {x, std::move(report)};
}

MixedNoise hsi_mixed_denoise(const Tensor3d &h, const MixedNoiseParams &p,
                             const SolverConfig &cfg) {
  const double lam = p.lambda.value_or(default_sparse_weight(h.dims()));
  require_weight(lam, "hsi_mixed_denoise: lambda");
  require_weight(p.tau, "hsi_mixed_denoise: tau");
  require_weight(p.gamma, "hsi_mixed_denoise: gamma");
  const Dims d = h.dims();
  const Eigen::ArrayXd symbol =
      2.0 + detail::difference_symbol(d, true, true, false);

  detail::AdmmLoop loop(cfg);
  Tensor3d l = h, s = zeros(d), n = zeros(d);
  Tensor3d z = h, gx = diff(h, DiffAxis::x), gy = diff(h, DiffAxis::y);
  Tensor3d y1 = zeros(d), y2 = zeros(d), y3 = zeros(d), y4 = zeros(d);
  while (!loop.done()) {
    const double mu = loop.mu();
    Tensor3d l_new = solve_diagonal(
        (h - s - n + y1 / mu) + (z - y2 / mu) +
            diff_adjoint(gx - y3 / mu, DiffAxis::x) +
            diff_adjoint(gy - y4 / mu, DiffAxis::y),
        symbol);

    const Tensor3d dx = diff(l_new, DiffAxis::x);
    const Tensor3d dy = diff(l_new, DiffAxis::y);
    Tensor3d z_new = tsvt(l_new + y2 / mu, 1.0 / mu);
    Tensor3d gx_new = soft_threshold(dx + y3 / mu, p.gamma / mu);
    Tensor3d gy_new = soft_threshold(dy + y4 / mu, p.gamma / mu);
    // Joint minimization over (S, N) of
    // lam |S|_1 + tau |N|^2 + mu/2 |r - S - N|^2.
    const Tensor3d r = h - l_new + y1 / mu;
    const double c = 2.0 * p.tau * mu / (mu + 2.0 * p.tau);
    Tensor3d s_new = c > 0.0 ? soft_threshold(r, lam / c) : zeros(d);
    Tensor3d n_new = (mu / (mu + 2.0 * p.tau)) * (r - s_new);

    const Tensor3d r1 = h - l_new - s_new - n_new;
    const Tensor3d r2 = l_new - z_new;
    const Tensor3d r3 = dx - gx_new;
    const Tensor3d r4 = dy - gy_new;
    y1 = y1 + mu * r1;
    y2 = y2 + mu * r2;
    y3 = y3 + mu * r3;
    y4 = y4 + mu * r4;
    const double residual =
        std::max({max_abs(r1), max_abs(r2), max_abs(r3), max_abs(r4)});
    const double change =
        std::max({gap(l_new, l), gap(s_new, s), gap(n_new, n), gap(z_new, z),
                  gap(gx_new, gx), gap(gy_new, gy)});
    l = std::move(l_new);
    s = std::move(s_new);
    n = std::move(n_new);
    z = std::move(z_new);
    gx = std::move(gx_new);
    gy = std::move(gy_new);

    const double fit = frobenius_norm(h - l - s);
    loop.step(residual, change,
              scaled_tnn(l) + lam * l1_norm(s) + p.tau * fit * fit +
                  p.gamma * total_variation(l, {DiffAxis::x, DiffAxis::y}));
  }
  return {l, s, n, std::move(loop).finish()};
}

namespace {

std::vector<Index> patch_starts(Index n, Index size, Index stride) {
  if (n <= size)
    return {0};
  std::vector<Index> starts;
  for (Index a = 0; a + size <= n; a += stride)
    starts.push_back(a);
  if (starts.back() + size < n)
    starts.push_back(n - size);
  return starts;
}

} // namespace

MixedNoise hsi_mixed_denoise_patches(const Tensor3d &h, PatchScheme scheme,
                                     const MixedNoiseParams &p,
                                     const SolverConfig &cfg) {
  if (scheme.size < 1 || scheme.stride < 1)
    throw std::invalid_argument("hsi_mixed_denoise_patches: size and stride "
                                "must be positive");
  if (scheme.stride > scheme.size)
    throw std::invalid_argument(
        "hsi_mixed_denoise_patches: stride larger than the patch leaves gaps");
  const Dims d = h.dims();
  Eigen::ArrayXd acc_l = Eigen::ArrayXd::Zero(d.size());
  Eigen::ArrayXd acc_s = acc_l, acc_n = acc_l, count = acc_l;
  SolverReport report;
  report.converged = true;
  for (const Index i0 : patch_starts(d.n1, scheme.size, scheme.stride))
    for (const Index j0 : patch_starts(d.n2, scheme.size, scheme.stride)) {
      const Index pi = std::min(scheme.size, d.n1);
      const Index pj = std::min(scheme.size, d.n2);
      const auto patch = Tensor3d::generate(
          {pi, pj, d.n3},
          [&](Index i, Index j, Index k) { return h(i0 + i, j0 + j, k); });
      auto out = hsi_mixed_denoise(patch, p, cfg);
      for (Index k = 0; k < d.n3; ++k)
        for (Index i = 0; i < pi; ++i)
          for (Index j = 0; j < pj; ++j) {
            const Index o = h.offset(i0 + i, j0 + j, k);
            acc_l(o) += out.l(i, j, k);
            acc_s(o) += out.s(i, j, k);
            acc_n(o) += out.n(i, j, k);
            count(o) += 1.0;
          }
      if (out.report.iterations > report.iterations) {
        report.iterations = out.report.iterations;
        report.residuals = out.report.residuals;
        report.objectives = out.report.objectives;
        report.objective = out.report.objective;
      }
      report.converged = report.converged && out.report.converged;
    }
  return {Tensor3d(d, (acc_l / count).eval()), Tensor3d(d, (acc_s / count).eval()),
          Tensor3d(d, (acc_n / count).eval()), std::move(report)};
}

ModDecomposition mod_decompose(const Tensor3d &t, const ModParams &p,
                               const SolverConfig &cfg) {
  const double l1 = p.lambda1.value_or(0.5 * default_sparse_weight(t.dims()));
  const double l2 = p.lambda2.value_or(l1);
  const double l3 = p.lambda3.value_or(0.1 * l1);
  require_weight(l1, "mod_decompose: lambda1");
  require_weight(l2, "mod_decompose: lambda2");
  require_weight(l3, "mod_decompose: lambda3");
  const Dims d = t.dims();
  constexpr DiffAxis axes[3] = {DiffAxis::x, DiffAxis::y, DiffAxis::t};

  // Per-frequency inverse of the (B, F, D, E) normal equations.
  const Eigen::ArrayXd s_sym = detail::difference_symbol(d, true, true, true);
  std::vector<Eigen::Matrix4d> inv(static_cast<std::size_t>(d.size()));
  for (Index q = 0; q < d.size(); ++q) {
    Eigen::Matrix4d a;
    a << 2, 1, 0, 0,  //
        1, 3, -1, -1, //
        0, -1, 2, 1,  //
        0, -1, 1, 1 + s_sym(q);
    inv[q] = a.inverse();
  }

  detail::AdmmLoop loop(cfg);
  Tensor3d b = t, f = zeros(d), dd = zeros(d), e = zeros(d);
  Tensor3d z = t, pp = zeros(d), q = zeros(d);
  std::array<Tensor3d, 3> g = {zeros(d), zeros(d), zeros(d)};
  Tensor3d y1 = zeros(d), y2 = zeros(d), y3 = zeros(d), y4 = zeros(d),
           y5 = zeros(d);
  std::array<Tensor3d, 3> yg = {zeros(d), zeros(d), zeros(d)};
  while (!loop.done()) {
    const double mu = loop.mu();
    Tensor3d tv_rhs = zeros(d);
    for (int a = 0; a < 3; ++a)
      tv_rhs = tv_rhs + diff_adjoint(g[a] - yg[a] / mu, axes[a]);
    const std::array<detail::ComplexArray, 4> rhs = {
        detail::fft3(t + y1 / mu + z - y3 / mu),
        detail::fft3(t + y1 / mu - y2 / mu + pp - y4 / mu),
        detail::fft3(y2 / mu + q - y5 / mu),
        detail::fft3(y2 / mu + tv_rhs)};
    std::array<detail::ComplexArray, 4> sol;
    for (auto &v : sol)
      v.resize(d.size());
    for (Index w = 0; w < d.size(); ++w) {
      const Eigen::Vector4cd v(rhs[0](w), rhs[1](w), rhs[2](w), rhs[3](w));
      const Eigen::Vector4cd x = inv[w].cast<std::complex<double>>() * v;
      for (int c = 0; c < 4; ++c)
        sol[c](w) = x(c);
    }
    Tensor3d b_new = detail::ifft3_real(sol[0], d);
    Tensor3d f_new = detail::ifft3_real(sol[1], d);
    Tensor3d d_new = detail::ifft3_real(sol[2], d);
    Tensor3d e_new = detail::ifft3_real(sol[3], d);

    Tensor3d z_new = tsvt(b_new + y3 / mu, 1.0 / mu);
    Tensor3d p_new = soft_threshold(f_new + y4 / mu, l1 / mu);
    Tensor3d q_new = soft_threshold(d_new + y5 / mu, l2 / mu);
    std::array<Tensor3d, 3> de, g_new;
    for (int a = 0; a < 3; ++a) {
      de[a] = diff(e_new, axes[a]);
      g_new[a] = soft_threshold(de[a] + yg[a] / mu, l3 / mu);
    }

    const Tensor3d r1 = t - b_new - f_new;
    const Tensor3d r2 = f_new - d_new - e_new;
    const Tensor3d r3 = b_new - z_new;
    const Tensor3d r4 = f_new - p_new;
    const Tensor3d r5 = d_new - q_new;
    y1 = y1 + mu * r1;
    y2 = y2 + mu * r2;
    y3 = y3 + mu * r3;
    y4 = y4 + mu * r4;
    y5 = y5 + mu * r5;
    double residual = std::max({max_abs(r1), max_abs(r2), max_abs(r3),
                                max_abs(r4), max_abs(r5)});
    double change = std::max({gap(b_new, b), gap(f_new, f), gap(d_new, dd),
                              gap(e_new, e), gap(z_new, z), gap(p_new, pp),
                              gap(q_new, q)});
    for (int a = 0; a < 3; ++a) {
      const Tensor3d ra = de[a] - g_new[a];
      yg[a] = yg[a] + mu * ra;
      residual = std::max(residual, max_abs(ra));
      change = std::max(change, gap(g_new[a], g[a]));
    }
    b = std::move(b_new);
    f = std::move(f_new);
    dd = std::move(d_new);
    e = std::move(e_new);
    z = std::move(z_new);
    pp = std::move(p_new);
    q = std::move(q_new);
    g = std::move(g_new);

    const Tensor3d fg = t - b;
    loop.step(residual, change,
              scaled_tnn(b) + l1 * l1_norm(fg) + l2 * l1_norm(dd) +
                  l3 * total_variation(fg - dd,
                                       {DiffAxis::x, DiffAxis::y, DiffAxis::t}));
  }
  return {b, f, dd, e, std::move(loop).finish()};
}

Derained derain(const Tensor3d &o, const DerainParams &p,
                const SolverConfig &cfg) {
  const double l1 = p.lambda1.value_or(default_sparse_weight(o.dims()));
  const double l2 = p.lambda2.value_or(l1);
  const double l3 = p.lambda3.value_or(l1);
  const double l4 = p.lambda4.value_or(l1);
  require_weight(l1, "derain: lambda1");
  require_weight(l2, "derain: lambda2");
  require_weight(l3, "derain: lambda3");
  require_weight(l4, "derain: lambda4");
  const Dims d = o.dims();
  const Eigen::ArrayXd a_b =
      2.0 + detail::difference_symbol(d, false, true, true);
  const Eigen::ArrayXd a_r =
      2.0 + detail::difference_symbol(d, true, false, false);
  const Eigen::ArrayXd det = a_b * a_r - 1.0;

  detail::AdmmLoop loop(cfg);
  Tensor3d b = o, r = zeros(d);
  Tensor3d z = o, gx = diff(o, DiffAxis::x), gt = diff(o, DiffAxis::t);
  Tensor3d w = zeros(d), gy = zeros(d);
  Tensor3d y1 = zeros(d), y2 = zeros(d), y3 = zeros(d), y4 = zeros(d),
           y5 = zeros(d), y6 = zeros(d);
  while (!loop.done()) {
    const double mu = loop.mu();
    const auto rb = detail::fft3(o + y1 / mu + z - y2 / mu +
                                 diff_adjoint(gx - y3 / mu, DiffAxis::x) +
                                 diff_adjoint(gt - y4 / mu, DiffAxis::t));
    const auto rr = detail::fft3(o + y1 / mu + w - y5 / mu +
                                 diff_adjoint(gy - y6 / mu, DiffAxis::y));
    Tensor3d b_new = detail::ifft3_real((a_r * rb - rr) / det, d);
    Tensor3d r_new = detail::ifft3_real((a_b * rr - rb) / det, d);

    const Tensor3d bx = diff(b_new, DiffAxis::x);
    const Tensor3d bt = diff(b_new, DiffAxis::t);
    const Tensor3d ry = diff(r_new, DiffAxis::y);
    Tensor3d z_new = tsvt(b_new + y2 / mu, 1.0 / mu);
    Tensor3d gx_new = soft_threshold(bx + y3 / mu, l3 / mu);
    Tensor3d gt_new = soft_threshold(bt + y4 / mu, l4 / mu);
    Tensor3d w_new = soft_threshold(r_new + y5 / mu, l1 / mu);
    Tensor3d gy_new = soft_threshold(ry + y6 / mu, l2 / mu);

    const Tensor3d r1 = o - b_new - r_new;
    const Tensor3d r2 = b_new - z_new;
    const Tensor3d r3 = bx - gx_new;
    const Tensor3d r4 = bt - gt_new;
    const Tensor3d r5 = r_new - w_new;
    const Tensor3d r6 = ry - gy_new;
    y1 = y1 + mu * r1;
    y2 = y2 + mu * r2;
    y3 = y3 + mu * r3;
    y4 = y4 + mu * r4;
    y5 = y5 + mu * r5;
    y6 = y6 + mu * r6;
    const double residual =
        std::max({max_abs(r1), max_abs(r2), max_abs(r3), max_abs(r4),
                  max_abs(r5), max_abs(r6)});
    const double change =
        std::max({gap(b_new, b), gap(r_new, r), gap(z_new, z),
                  gap(gx_new, gx), gap(gt_new, gt), gap(w_new, w),
                  gap(gy_new, gy)});
    b = std::move(b_new);
    r = std::move(r_new);
    z = std::move(z_new);
    gx = std::move(gx_new);
    gt = std::move(gt_new);
    w = std::move(w_new);
    gy = std::move(gy_new);

    const Tensor3d rain = o - b;
    loop.step(residual, change,
              scaled_tnn(b) + l1 * l1_norm(rain) +
                  l2 * l1_norm(diff(rain, DiffAxis::y)) +
                  l3 * l1_norm(diff(b, DiffAxis::x)) +
                  l4 * l1_norm(diff(b, DiffAxis::t)));
  }
  return {b, r, std::move(loop).finish()};
}

} // namespace tlr
