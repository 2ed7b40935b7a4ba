#pragma once

// t-product algebra: products, transposes, identity, t-SVD, multirank and the
// tensor nuclear norm. Everything is computed slice-wise in the Fourier
// domain; only the first n3/2 + 1 slices are factored and the remainder are
// filled in by conjugate symmetry.

#include "tlr/spectral.hpp"
#include "tlr/tensor3.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tlr {

namespace detail {

// SVD of Fourier slice k. Self-conjugate slices are real up to rounding and
// are factored in real arithmetic so the inverse transform stays real.
template <typename S>
ComplexSvd<S> spectral_slice_svd(const SpectralTensor3<S> &xf, Index k,
                                 bool full) {
  if (xf.self_conjugate(k)) {
    const MatrixX<S> re = xf[k].real();
    const int opts = full ? (Eigen::ComputeFullU | Eigen::ComputeFullV)
                          : (Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::BDCSVD<MatrixX<S>> svd(re, opts);
    ComplexSvd<S> out{svd.matrixU().template cast<std::complex<S>>(),
                      svd.singularValues(),
                      svd.matrixV().template cast<std::complex<S>>()};
    normalize_phases(out.U, out.V);
    return out;
  }
  return complex_svd(xf[k], full);
}

template <typename S>
VectorX<S> spectral_slice_singular_values(const SpectralTensor3<S> &xf,
                                          Index k) {
  if (xf.self_conjugate(k))
    return singular_values(MatrixX<S>(xf[k].real()));
  return singular_values(xf[k]);
}

} // namespace detail

template <std::floating_point S>
Tensor3<S> t_product(const Tensor3<S> &x, const Tensor3<S> &y) {
  if (x.n2() != y.n1() || x.n3() != y.n3())
    throw DimensionError("t_product: incompatible dims " +
                         to_string(x.dims()) + " * " + to_string(y.dims()));
  const auto xf = to_spectral(x);
  const auto yf = to_spectral(y);
  SpectralTensor3<S> zf(Dims{x.n1(), y.n2(), x.n3()});
#pragma omp parallel for
  for (Index k = 0; k < zf.independent_count(); ++k)
    zf[k].noalias() = xf[k] * yf[k];
  zf.fill_conjugates();
  return from_spectral(zf);
}

/// Transposes each frontal slice and reverses the order of slices 2..n3.
template <typename S> Tensor3<S> t_transpose(const Tensor3<S> &x) {
  const auto &d = x.dims();
  return Tensor3<S>::generate({d.n2, d.n1, d.n3},
                              [&](Index i, Index j, Index k) {
                                return x(j, i, k == 0 ? 0 : d.n3 - k);
                              });
}

template <std::floating_point S = double>
Tensor3<S> identity_tensor(Index n, Index n3) {
  return Tensor3<S>::generate({n, n, n3}, [](Index i, Index j, Index k) {
    return (k == 0 && i == j) ? S(1) : S(0);
  });
}

/// Sum of all Fourier-domain singular values (no 1/n3 factor).
template <std::floating_point S> S tnn(const Tensor3<S> &x) {
  const auto xf = to_spectral(x);
  S total = 0;
  for (Index k = 0; k < xf.independent_count(); ++k) {
    const S s = detail::spectral_slice_singular_values(xf, k).sum();
    total += xf.self_conjugate(k) ? s : S(2) * s;
  }
  return total;
}

/// Rank of each Fourier-domain slice, counting singular values above
/// tol times that slice's largest singular value.
template <std::floating_point S>
std::vector<Index> multirank(const Tensor3<S> &x, S tol = S(1e-10)) {
  if (tol < S(0))
    throw std::invalid_argument("multirank: tol must be nonnegative");
  const auto xf = to_spectral(x);
  std::vector<Index> ranks(static_cast<std::size_t>(x.n3()), 0);
  for (Index k = 0; k < xf.independent_count(); ++k) {
    const auto s = detail::spectral_slice_singular_values(xf, k);
    const S smax = s.size() ? s(0) : S(0);
    Index r = 0;
    if (smax > S(0))
      r = (s.array() > tol * smax).count();
    ranks[k] = r;
    ranks[xf.mirror(k)] = r;
  }
  return ranks;
}

template <typename Scalar> struct TSvdFactors {
  Tensor3<Scalar> U; // n1 x n1 x n3
  Tensor3<Scalar> S; // n1 x n2 x n3, f-diagonal
  Tensor3<Scalar> V; // n2 x n2 x n3
  /// Diagonal of each Fourier-domain slice of S, non-increasing.
  std::vector<VectorX<Scalar>> spectral_singulars;
};

/// x = U * S * V^T with U, V unitary and S f-diagonal.
template <std::floating_point S> TSvdFactors<S> t_svd(const Tensor3<S> &x) {
  const auto &d = x.dims();
  const auto xf = to_spectral(x);
  SpectralTensor3<S> uf(Dims{d.n1, d.n1, d.n3});
  SpectralTensor3<S> sf(d);
  SpectralTensor3<S> vf(Dims{d.n2, d.n2, d.n3});
  std::vector<VectorX<S>> sing(static_cast<std::size_t>(d.n3));
  for (Index k = 0; k < xf.independent_count(); ++k) {
    auto f = detail::spectral_slice_svd(xf, k, /*full=*/true);
    for (Index i = 0; i < f.s.size(); ++i)
      sf[k](i, i) = f.s(i);
    uf[k] = std::move(f.U);
    vf[k] = std::move(f.V);
    sing[k] = f.s;
    sing[xf.mirror(k)] = f.s;
  }
  uf.fill_conjugates();
  sf.fill_conjugates();
  vf.fill_conjugates();
  return {from_spectral(uf), from_spectral(sf), from_spectral(vf),
          std::move(sing)};
}

/// True when u^T * u and u * u^T both lie within tol (Frobenius) of identity.
template <std::floating_point S> bool is_unitary(const Tensor3<S> &u, S tol) {
  if (u.n1() != u.n2())
    throw DimensionError("is_unitary: frontal slices must be square, got " +
                         to_string(u.dims()));
  const auto I = identity_tensor<S>(u.n1(), u.n3());
  const auto ut = t_transpose(u);
  return frobenius_norm(t_product(ut, u) - I) <= tol &&
         frobenius_norm(t_product(u, ut) - I) <= tol;
}

} // namespace tlr
