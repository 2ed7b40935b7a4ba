#pragma once

// Proximal maps: tensor singular value thresholding (plain and weighted),
// entrywise soft thresholding, and circular finite differences.

#include "tlr/spectral.hpp"
#include "tlr/tensor3.hpp"
#include "tlr/tproduct.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <stdexcept>
#include <variant>

namespace tlr {

/// Weights applied to the Fourier-domain singular values of one slice.
/// Either fixed per index, or the reweighting rule c / (sigma_i + eps)
/// evaluated on the singular values of the tensor being thresholded.
template <std::floating_point S> class WeightVector {
public:
  struct Reweight {
    S c;
    S eps;
  };

  static WeightVector constant(S w) {
    WeightVector v;
    v.rule_ = VectorX<S>::Constant(1, w);
    v.broadcast_ = true;
    v.validate();
    return v;
  }

  /// w(i) applies to the i-th largest singular value of every slice.
  static WeightVector values(VectorX<S> w) {
    WeightVector v;
    v.rule_ = std::move(w);
    v.validate();
    return v;
  }

  static WeightVector reweighted(S c, S eps = S(1e-6)) {
    WeightVector v;
    v.rule_ = Reweight{c, eps};
    v.validate();
    return v;
  }

  bool is_reweighted() const { return std::holds_alternative<Reweight>(rule_); }

  WeightVector scaled(S factor) const {
    if (!(factor >= S(0)) || !std::isfinite(factor))
      throw std::invalid_argument("WeightVector: scale must be nonnegative");
    WeightVector v = *this;
    if (auto *r = std::get_if<Reweight>(&v.rule_))
      r->c *= factor;
    else
      std::get<VectorX<S>>(v.rule_) *= factor;
    return v;
  }

  /// Weights for a slice with the given (non-increasing) singular values.
  VectorX<S> weights_for(const VectorX<S> &sigma) const {
    if (const auto *r = std::get_if<Reweight>(&rule_))
      return (r->c / (sigma.array() + r->eps)).matrix();
    const auto &w = std::get<VectorX<S>>(rule_);
    if (broadcast_)
      return VectorX<S>::Constant(sigma.size(), w(0));
    if (w.size() < sigma.size())
      throw DimensionError("WeightVector: " + std::to_string(w.size()) +
                           " weights for " + std::to_string(sigma.size()) +
                           " singular values");
    return w.head(sigma.size());
  }

private:
  WeightVector() = default;

  void validate() const {
    if (const auto *r = std::get_if<Reweight>(&rule_)) {
      if (!(r->c >= S(0)) || !std::isfinite(r->c) || !(r->eps > S(0)) ||
          !std::isfinite(r->eps))
        throw std::invalid_argument(
            "WeightVector: reweighting needs c >= 0 and eps > 0");
      return;
    }
    const auto &w = std::get<VectorX<S>>(rule_);
    if (w.size() == 0 || !w.allFinite() || (w.array() < S(0)).any())
      throw std::invalid_argument(
          "WeightVector: weights must be finite and nonnegative");
  }

  std::variant<VectorX<S>, Reweight> rule_;
  bool broadcast_ = false;
};

namespace detail {

// Replaces the singular values of every Fourier slice by shrink(sigma) and
// transforms back. shrink must map a non-increasing nonnegative vector to a
// nonnegative vector of the same length.
template <typename S, typename Shrink>
Tensor3<S> spectral_shrink(const Tensor3<S> &y, Shrink &&shrink) {
  auto yf = to_spectral(y);
  // Exceptions may not cross an OpenMP region; the first one is rethrown.
  std::exception_ptr error;
#pragma omp parallel for
  for (Index k = 0; k < yf.independent_count(); ++k) {
    ComplexSvd<S> f;
    try {
      f = spectral_slice_svd(yf, k, /*full=*/false);
    } catch (...) {
#pragma omp critical(tlr_spectral_shrink)
      if (!error)
        error = std::current_exception();
      continue;
    }
    const VectorX<S> s = shrink(f.s);
    Index keep = 0;
    while (keep < s.size() && s(keep) > S(0))
      ++keep;
    yf[k].noalias() = f.U.leftCols(keep) *
                      s.head(keep).template cast<std::complex<S>>().asDiagonal() *
                      f.V.leftCols(keep).adjoint();
    if (yf.self_conjugate(k))
      yf[k] = yf[k].real().template cast<std::complex<S>>();
  }
  if (error)
    std::rethrow_exception(error);
  yf.fill_conjugates();
  return from_spectral(yf);
}

} // namespace detail

/// Tensor singular value thresholding: every Fourier-domain singular value
/// sigma becomes max(sigma - tau, 0).
template <std::floating_point S> Tensor3<S> tsvt(const Tensor3<S> &y, S tau) {
  if (!(tau >= S(0)))
    throw std::invalid_argument("tsvt: threshold must be nonnegative");
  if (tau == S(0))
    return y;
  return detail::spectral_shrink(y, [tau](const VectorX<S> &s) {
    return VectorX<S>((s.array() - tau).max(S(0)));
  });
}

/// Singular value i of every Fourier slice becomes max(sigma_i - w_i, 0).
template <std::floating_point S>
Tensor3<S> weighted_tsvt(const Tensor3<S> &y, const WeightVector<S> &w) {
  return detail::spectral_shrink(y, [&w](const VectorX<S> &s) {
    return VectorX<S>((s - w.weights_for(s)).array().max(S(0)));
  });
}

/// Entrywise sign(x) max(|x| - tau, 0).
template <std::floating_point S>
Tensor3<S> soft_threshold(const Tensor3<S> &x, S tau) {
  if (!(tau >= S(0)))
    throw std::invalid_argument("soft_threshold: threshold must be nonnegative");
  return Tensor3<S>(x.dims(), x.array().sign() *
                                  (x.array().abs() - tau).max(S(0)));
}

/// Entry (i, j, k) is soft-thresholded at tau * weights(i, j).
template <std::floating_point S, typename Derived>
Tensor3<S> masked_soft_threshold(const Tensor3<S> &x,
                                 const Eigen::MatrixBase<Derived> &weights,
                                 S tau) {
  if (weights.rows() != x.n1() || weights.cols() != x.n2())
    throw DimensionError("masked_soft_threshold: weights must be n1 x n2");
  if (!(tau >= S(0)))
    throw std::invalid_argument(
        "masked_soft_threshold: threshold must be nonnegative");
  if ((weights.array() < S(0)).any() || (weights.array() > S(1)).any())
    throw std::invalid_argument(
        "masked_soft_threshold: weights must lie in [0, 1]");
  return Tensor3<S>::generate(x.dims(), [&](Index i, Index j, Index k) {
    const S v = x(i, j, k);
    const S t = tau * static_cast<S>(weights(i, j));
    return std::copysign(std::max(std::abs(v) - t, S(0)), v);
  });
}

/// Direction of a forward difference: x along columns (mode 2), y along rows
/// (mode 1), t along frontal slices (mode 3). Boundaries wrap around.
enum class DiffAxis { x, y, t };

template <std::floating_point S>
Tensor3<S> diff(const Tensor3<S> &x, DiffAxis axis) {
  const auto &d = x.dims();
  return Tensor3<S>::generate(d, [&](Index i, Index j, Index k) {
    switch (axis) {
    case DiffAxis::y:
      return x((i + 1) % d.n1, j, k) - x(i, j, k);
    case DiffAxis::x:
      return x(i, (j + 1) % d.n2, k) - x(i, j, k);
    case DiffAxis::t:
      return x(i, j, (k + 1) % d.n3) - x(i, j, k);
    }
    return S(0);
  });
}

/// Adjoint of diff: g(prev) - g(here) along the axis.
template <std::floating_point S>
Tensor3<S> diff_adjoint(const Tensor3<S> &g, DiffAxis axis) {
  const auto &d = g.dims();
  return Tensor3<S>::generate(d, [&](Index i, Index j, Index k) {
    switch (axis) {
    case DiffAxis::y:
      return g((i + d.n1 - 1) % d.n1, j, k) - g(i, j, k);
    case DiffAxis::x:
      return g(i, (j + d.n2 - 1) % d.n2, k) - g(i, j, k);
    case DiffAxis::t:
      return g(i, j, (k + d.n3 - 1) % d.n3) - g(i, j, k);
    }
    return S(0);
  });
}

} // namespace tlr
