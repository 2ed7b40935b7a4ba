#include "tlr/synth.hpp"

#include "tlr/tproduct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace tlr {
namespace {

using Rng = std::mt19937_64;

Tensor3d gaussian(Dims d, Rng &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return Tensor3d::generate(d, [&](Index, Index, Index) { return g(rng); });
}

void require_fraction(double v, const char *what) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

} // namespace

Tensor3d low_tubal_rank(Dims d, Index rank, std::uint64_t seed) {
  if (rank < 1 || rank > std::min(d.n1, d.n2))
    throw std::invalid_argument("low_tubal_rank: rank must be in [1, min(n1, n2)]");
  Rng rng(seed);
  const auto a = gaussian({d.n1, rank, d.n3}, rng);
  const auto b = gaussian({rank, d.n2, d.n3}, rng);
  return t_product(a, b);
}

Tensor3d sparse_spikes(Dims d, double rho, double magnitude,
                       std::uint64_t seed) {
  require_fraction(rho, "sparse_spikes: rho");
  if (!(magnitude >= 0.0) || !std::isfinite(magnitude))
    throw std::invalid_argument("sparse_spikes: magnitude must be >= 0");
  Rng rng(seed);
  std::bernoulli_distribution hit(rho), sign(0.5);
  return Tensor3d::generate(d, [&](Index, Index, Index) {
    if (!hit(rng))
      return 0.0;
    return sign(rng) ? magnitude : -magnitude;
  });
}

Mask3 missing_mask(Dims d, double observed, std::uint64_t seed) {
  require_fraction(observed, "missing_mask: observed fraction");
  Rng rng(seed);
  std::bernoulli_distribution keep(observed);
  return Mask3::generate(d, [&](Index, Index, Index) { return keep(rng); });
}

VideoScene surveillance_video(const VideoParams &p, std::uint64_t seed) {
  const Dims d = p.dims;
  if (p.block < 1 || p.block > std::min(d.n1, d.n2))
    throw std::invalid_argument("surveillance_video: block does not fit");
  if (!(p.ripple >= 0.0))
    throw std::invalid_argument("surveillance_video: ripple must be >= 0");
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.45, 0.75);
  Eigen::VectorXd col(d.n1), row(d.n2);
  for (auto &v : col)
    v = u(rng);
  for (auto &v : row)
    v = u(rng);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double ph = phase(rng);

  const Index strip = std::max<Index>(1, d.n1 / 5);
  const Index top = std::clamp<Index>(d.n1 / 2 - p.block / 2, 0, d.n1 - p.block);
  auto left = [&](Index k) {
    return d.n3 == 1 ? Index(0)
                     : Index(std::lround(double(k) * double(d.n2 - p.block) /
                                         double(d.n3 - 1)));
  };

  VideoScene s;
  s.background = Tensor3d::generate(
      d, [&](Index i, Index j, Index) { return col(i) * row(j); });
  s.ripple = Tensor3d::generate(d, [&](Index i, Index j, Index k) {
    if (i < d.n1 - strip)
      return 0.0;
    return p.ripple * std::sin(2.0 * std::numbers::pi *
                                   (double(j) / 8.0 + double(k) / 5.0) + ph);
  });
  s.foreground = Mask3::generate(d, [&](Index i, Index j, Index k) {
    return i >= top && i < top + p.block && j >= left(k) &&
           j < left(k) + p.block;
  });
  s.video = Tensor3d::generate(d, [&](Index i, Index j, Index k) {
    if (s.foreground(i, j, k))
      return 1.0;
    return s.background(i, j, k) + s.ripple(i, j, k);
  });
  return s;
}

RainScene rain_streaks(const RainParams &p, std::uint64_t seed) {
  const Dims d = p.dims;
  require_fraction(p.density, "rain_streaks: density");
  if (p.min_length < 1 || p.max_length < p.min_length)
    throw std::invalid_argument("rain_streaks: invalid streak lengths");
  Rng rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double a = phase(rng), b = phase(rng), c = phase(rng);
  const double tau = 2.0 * std::numbers::pi;

  RainScene s;
  s.clean = Tensor3d::generate(d, [&](Index i, Index j, Index k) {
    const double x = double(j) / double(d.n2), y = double(i) / double(d.n1);
    const double base =
        0.45 + 0.2 * std::sin(tau * y + a) * std::cos(tau * x + b) +
        0.1 * std::cos(tau * x + c);
    return base * (1.0 + 0.05 * std::sin(tau * double(k) / double(d.n3)));
  });

  Mask3::Storage mark = Mask3::Storage::Zero(d.size());
  const Index target = Index(std::llround(p.density * double(d.size())));
  std::uniform_int_distribution<Index> ri(0, d.n1 - 1), rj(0, d.n2 - 1),
      rk(0, d.n3 - 1), rl(p.min_length, p.max_length);
  Index marked = 0;
  while (marked < target) {
    const Index i0 = ri(rng), j = rj(rng), k = rk(rng), len = rl(rng);
    for (Index i = i0; i < std::min(d.n1, i0 + len) && marked < target; ++i) {
      const Index o = (k * d.n1 + i) * d.n2 + j;
      if (!mark(o)) {
        mark(o) = true;
        ++marked;
      }
    }
  }
  s.streaks = Mask3(d, mark);
  s.rainy = Tensor3d(d, s.clean.array() + p.magnitude * mark.cast<double>());
  return s;
}

HsiScene hsi_cube(const HsiParams &p, std::uint64_t seed) {
  const Dims d = p.dims;
  if (p.materials < 1 || p.tile < 1)
    throw std::invalid_argument("hsi_cube: materials and tile must be >= 1");
  if (!(p.sigma >= 0.0))
    throw std::invalid_argument("hsi_cube: sigma must be >= 0");
  require_fraction(p.impulse, "hsi_cube: impulse fraction");
  if (p.stripes < 0)
    throw std::invalid_argument("hsi_cube: stripes must be >= 0");
  Rng rng(seed);

  // Spectra change level at two band breakpoints.
  std::uniform_real_distribution<double> level(0.15, 0.85);
  std::uniform_int_distribution<Index> band(0, d.n3 - 1);
  Eigen::MatrixXd spectra(p.materials, d.n3);
  for (Index m = 0; m < p.materials; ++m) {
    Index b1 = band(rng), b2 = band(rng);
    if (b1 > b2)
      std::swap(b1, b2);
    const double v0 = level(rng), v1 = level(rng), v2 = level(rng);
    for (Index k = 0; k < d.n3; ++k)
      spectra(m, k) = k < b1 ? v0 : k < b2 ? v1 : v2;
  }
  const Index ti = (d.n1 + p.tile - 1) / p.tile, tj = (d.n2 + p.tile - 1) / p.tile;
  std::uniform_int_distribution<Index> pick(0, p.materials - 1);
  Eigen::MatrixXi layout(ti, tj);
  for (Index a = 0; a < ti; ++a)
    for (Index b = 0; b < tj; ++b)
      layout(a, b) = int(pick(rng));

  HsiScene s;
  s.clean = Tensor3d::generate(d, [&](Index i, Index j, Index k) {
    return spectra(layout(i / p.tile, j / p.tile), k);
  });

  std::normal_distribution<double> g(0.0, p.sigma);
  std::bernoulli_distribution hit(p.impulse), salt(0.5);
  Tensor3d::Storage noisy = s.clean.array();
  Mask3::Storage impulses = Mask3::Storage::Zero(d.size());
  for (Index o = 0; o < d.size(); ++o)
    noisy(o) += g(rng);
  for (Index o = 0; o < d.size(); ++o)
    if (hit(rng)) {
      noisy(o) = salt(rng) ? 1.0 : 0.0;
      impulses(o) = true;
    }
  std::uniform_int_distribution<Index> column(0, d.n2 - 1);
  std::bernoulli_distribution up(0.5);
  for (Index n = 0; n < p.stripes; ++n) {
    const Index j = column(rng), k = band(rng);
    const double off = up(rng) ? p.stripe_offset : -p.stripe_offset;
    for (Index i = 0; i < d.n1; ++i)
      noisy((k * d.n1 + i) * d.n2 + j) += off;
  }
  s.noisy = Tensor3d(d, noisy);
  s.impulses = Mask3(d, impulses);
  return s;
}

SubmoduleData submodule_images(const SubmoduleParams &p, std::uint64_t seed) {
  if (p.clusters < 1 || p.per_cluster < 1 || p.dimension < 1 || p.n1 < 1 ||
      p.n3 < 1)
    throw std::invalid_argument("submodule_images: sizes must be positive");
  if (p.clusters * p.per_cluster < 2)
    throw std::invalid_argument("submodule_images: need at least two images");
  Rng rng(seed);
  const Index total = p.clusters * p.per_cluster;
  std::vector<Index> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), Index(0));
  std::shuffle(order.begin(), order.end(), rng);

  Tensor3d::Storage data = Tensor3d::Storage::Zero(p.n1 * total * p.n3);
  SubmoduleData out;
  out.labels.assign(static_cast<std::size_t>(total), 0);
  for (Index c = 0; c < p.clusters; ++c) {
    const auto basis = gaussian({p.n1, p.dimension, p.n3}, rng);
    const auto coeff = gaussian({p.dimension, p.per_cluster, p.n3}, rng);
    const auto members = t_product(basis, coeff);
    for (Index m = 0; m < p.per_cluster; ++m) {
      const Index slot = order[c * p.per_cluster + m];
      out.labels[slot] = int(c);
      double norm2 = 0.0;
      for (Index k = 0; k < p.n3; ++k)
        for (Index i = 0; i < p.n1; ++i)
          norm2 += members(i, m, k) * members(i, m, k);
      const double scale = norm2 > 0.0 ? 1.0 / std::sqrt(norm2) : 1.0;
      for (Index k = 0; k < p.n3; ++k)
        for (Index i = 0; i < p.n1; ++i)
          data((k * p.n1 + i) * total + slot) = scale * members(i, m, k);
    }
  }
  out.images = Tensor3d({p.n1, total, p.n3}, data);
  return out;
}

} // namespace tlr
