#pragma once

// Mode-3 discrete Fourier transform of third-order tensors, and the complex
// SVD used on each Fourier-domain frontal slice.
//
// Convention: unnormalized forward DFT along every tube, 1/n3 on the inverse.
// With it bcirc(x) is unitarily similar to bdiag(to_spectral(x)), so singular
// values computed slice-wise match those of the block circulant matrix.

#include "tlr/tensor3.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace tlr {

template <typename Scalar>
using ComplexMatrixX =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Fourier-domain image of a Tensor3: n3 complex n1 x n2 frontal slices.
template <typename Scalar> struct SpectralTensor3 {
  Dims dims;
  std::vector<ComplexMatrixX<Scalar>> slices;

  SpectralTensor3() = default;
  explicit SpectralTensor3(Dims d)
      : dims(d), slices(static_cast<std::size_t>(d.n3),
                        ComplexMatrixX<Scalar>::Zero(d.n1, d.n2)) {}

  const ComplexMatrixX<Scalar> &operator[](Index k) const {
    return slices[static_cast<std::size_t>(k)];
  }
  ComplexMatrixX<Scalar> &operator[](Index k) {
    return slices[static_cast<std::size_t>(k)];
  }

  /// Index of the slice holding the conjugate of slice k.
  Index mirror(Index k) const { return k == 0 ? 0 : dims.n3 - k; }

  /// Slices 0..count-1 determine the rest for a real-valued signal.
  Index independent_count() const { return dims.n3 / 2 + 1; }

  /// Slice k equals its own conjugate (k = 0, and k = n3/2 for even n3).
  bool self_conjugate(Index k) const { return mirror(k) == k; }

  /// Overwrites slices past independent_count() with conjugates.
  void fill_conjugates() {
    for (Index k = independent_count(); k < dims.n3; ++k)
      (*this)[k] = (*this)[mirror(k)].conjugate();
  }

  Scalar squared_norm() const {
    Scalar s = 0;
    for (const auto &m : slices)
      s += m.squaredNorm();
    return s;
  }
};

class SpectralSymmetryError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SvdConvergenceError : public std::runtime_error {
public:
  SvdConvergenceError(const std::string &what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

template <std::floating_point S>
SpectralTensor3<S> to_spectral(const Tensor3<S> &x) {
  const auto &d = x.dims();
  SpectralTensor3<S> out(d);
  Eigen::FFT<S> fft;
  std::vector<S> in(static_cast<std::size_t>(d.n3));
  std::vector<std::complex<S>> freq;
  for (Index i = 0; i < d.n1; ++i)
    for (Index j = 0; j < d.n2; ++j) {
      for (Index k = 0; k < d.n3; ++k)
        in[k] = x(i, j, k);
      if (d.n3 == 1)
        freq.assign(1, in[0]);
      else
        fft.fwd(freq, in);
      for (Index k = 0; k < d.n3; ++k)
        out[k](i, j) = freq[k];
    }
  return out;
}

/// Largest deviation from conjugate symmetry, relative to the largest entry.
template <std::floating_point S>
S conjugate_symmetry_defect(const SpectralTensor3<S> &s) {
  S scale = 0;
  for (const auto &m : s.slices)
    if (m.size() > 0)
      scale = std::max(scale, m.cwiseAbs().maxCoeff());
  if (scale == S(0))
    return S(0);
  S defect = 0;
  for (Index k = 0; k < s.dims.n3; ++k) {
    const auto &a = s[k];
    const auto &b = s[s.mirror(k)];
    defect = std::max(defect, (a - b.conjugate()).cwiseAbs().maxCoeff());
  }
  return defect / scale;
}

/// Inverse of to_spectral; rejects input that is not the image of a real
/// tensor (relative symmetry defect above 1e-8).
template <std::floating_point S>
Tensor3<S> from_spectral(const SpectralTensor3<S> &s) {
  const auto &d = s.dims;
  if (static_cast<Index>(s.slices.size()) != d.n3)
    throw DimensionError("from_spectral: slice count does not match dims");
  if (const S defect = conjugate_symmetry_defect(s); defect > S(1e-8))
    throw SpectralSymmetryError(
        "from_spectral: spectral tensor is not conjugate-symmetric (defect " +
        std::to_string(static_cast<double>(defect)) + ")");
  std::vector<S> data(static_cast<std::size_t>(d.size()));
  Eigen::FFT<S> fft;
  std::vector<std::complex<S>> freq(static_cast<std::size_t>(d.n3));
  std::vector<std::complex<S>> time;
  for (Index i = 0; i < d.n1; ++i)
    for (Index j = 0; j < d.n2; ++j) {
      for (Index k = 0; k < d.n3; ++k)
        freq[k] = s[k](i, j);
      if (d.n3 == 1)
        time = freq;
      else
        fft.inv(time, freq);
      for (Index k = 0; k < d.n3; ++k)
        data[static_cast<std::size_t>((k * d.n1 + i) * d.n2 + j)] =
            time[k].real();
    }
  return Tensor3<S>(d, std::move(data));
}

template <typename Scalar> struct ComplexSvd {
  ComplexMatrixX<Scalar> U;
  VectorX<Scalar> s;
  ComplexMatrixX<Scalar> V;
};

namespace detail {

// Rotates column j of U so its largest-magnitude entry is real and
// nonnegative; the matching column of V gets the same phase so that
// U diag(s) V^H is unchanged.
template <typename S>
void normalize_phases(ComplexMatrixX<S> &U, ComplexMatrixX<S> &V) {
  for (Index j = 0; j < U.cols(); ++j) {
    Index imax = 0;
    U.col(j).cwiseAbs().maxCoeff(&imax);
    const std::complex<S> pivot = U(imax, j);
    const S mag = std::abs(pivot);
    if (mag == S(0))
      continue;
    const std::complex<S> phase = std::conj(pivot) / mag;
    U.col(j) *= phase;
    if (j < V.cols())
      V.col(j) *= phase;
    U(imax, j) = std::complex<S>(std::abs(U(imax, j)), S(0));
  }
}

template <typename S, typename Derived>
S svd_residual(const Eigen::MatrixBase<Derived> &a, const ComplexSvd<S> &f) {
  const S norm = a.norm();
  if (norm == S(0))
    return S(0);
  const Index r = f.s.size();
  return (a.template cast<std::complex<S>>() -
          f.U.leftCols(r) * f.s.template cast<std::complex<S>>().asDiagonal() *
              f.V.leftCols(r).adjoint())
             .norm() /
         norm;
}

template <typename Svd> auto factors_of(const Svd &svd) {
  using S = typename Svd::RealScalar;
  return ComplexSvd<S>{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

// Divide-and-conquer first; Eigen's complex BDCSVD is occasionally
// inaccurate, so a failed residual check retries with one-sided Jacobi.
template <typename S, typename Derived>
ComplexSvd<S> checked_svd(const Eigen::MatrixBase<Derived> &a, bool full) {
  using Mat = ComplexMatrixX<S>;
  const int opts = full ? (Eigen::ComputeFullU | Eigen::ComputeFullV)
                        : (Eigen::ComputeThinU | Eigen::ComputeThinV);
  const S limit = S(1e3) * std::numeric_limits<S>::epsilon() *
                  std::max<S>(1, std::sqrt(S(a.size())));
  const Mat m = a.template cast<std::complex<S>>();
  ComplexSvd<S> out = factors_of(Eigen::BDCSVD<Mat>(m, opts));
  S residual = svd_residual(a, out);
  if (!(residual <= limit)) {
    out = factors_of(Eigen::JacobiSVD<Mat>(m, opts));
    residual = svd_residual(a, out);
  }
  if (!(residual <= limit))
    throw SvdConvergenceError("complex_svd: factorization did not converge",
                              static_cast<double>(residual));
  normalize_phases(out.U, out.V);
  return out;
}

} // namespace detail

/// a = U diag(s) V^H with s non-increasing. Each column of U is rotated so its
/// largest-magnitude entry is real and nonnegative. `full` selects square
/// U and V; otherwise the thin factors are returned.
template <typename Derived>
auto complex_svd(const Eigen::MatrixBase<Derived> &a, bool full = true)
    -> ComplexSvd<typename Eigen::NumTraits<typename Derived::Scalar>::Real> {
  using S = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (!a.allFinite())
    throw std::domain_error("complex_svd: non-finite input");
  return detail::checked_svd<S>(a, full);
}

/// Singular values only.
template <typename Derived>
auto singular_values(const Eigen::MatrixBase<Derived> &a)
    -> VectorX<typename Eigen::NumTraits<typename Derived::Scalar>::Real> {
  using PlainMat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic,
                                 Eigen::Dynamic>;
  Eigen::BDCSVD<PlainMat> svd(a.eval());
  return svd.singularValues();
}

} // namespace tlr
