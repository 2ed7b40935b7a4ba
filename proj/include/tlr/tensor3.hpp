#pragma once

// Dense third-order tensors stored frontal-slice-major.
//
// Element (i, j, k) lives at offset k*n1*n2 + i*n2 + j, so every frontal
// slice is a contiguous row-major n1 x n2 block. Indices in the C++ API are
// zero-based.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace tlr {

using Index = Eigen::Index;

struct Dims {
  Index n1 = 0, n2 = 0, n3 = 0;

  constexpr Index size() const { return n1 * n2 * n3; }
  constexpr bool operator==(const Dims &) const = default;
};

inline std::string to_string(const Dims &d) {
  return std::to_string(d.n1) + "x" + std::to_string(d.n2) + "x" +
         std::to_string(d.n3);
}

class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {
inline void require_same(const Dims &a, const Dims &b, const char *what) {
  if (a != b)
    throw DimensionError(std::string(what) + ": dimension mismatch " +
                         to_string(a) + " vs " + to_string(b));
}
} // namespace detail

template <typename Scalar> class Tensor3 {
public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using RowMajorMatrix =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using SliceMap = Eigen::Map<const RowMajorMatrix>;
  using Storage = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  /// Empty 0x0x0 tensor; exists so results can be default-constructed.
  Tensor3() = default;

  /// Zero tensor of the given shape.
  explicit Tensor3(Dims dims) : dims_(check_dims(dims)), data_(Storage::Zero(dims.size())) {}

  Tensor3(Dims dims, const std::vector<Scalar> &data)
      : dims_(check_dims(dims)), data_(dims.size()) {
    if (static_cast<Index>(data.size()) != dims_.size())
      throw DimensionError("Tensor3: data length " +
                           std::to_string(data.size()) +
                           " does not match dims " + to_string(dims_));
    for (Index n = 0; n < dims_.size(); ++n)
      data_(n) = data[static_cast<std::size_t>(n)];
    check_finite();
  }

  /// Builds from a one-dimensional Eigen expression in storage order.
  template <typename Derived>
  Tensor3(Dims dims, const Eigen::DenseBase<Derived> &values)
      : dims_(check_dims(dims)), data_(dims.size()) {
    if (values.size() != dims_.size() ||
        (values.rows() != 1 && values.cols() != 1))
      throw DimensionError("Tensor3: expression size does not match dims " +
                           to_string(dims_));
    data_ = values.derived().reshaped().array().template cast<Scalar>();
    check_finite();
  }

  /// f(i, j, k) evaluated at every entry.
  template <typename F>
    requires std::invocable<F &, Index, Index, Index>
  static Tensor3 generate(Dims dims, F &&f) {
    Storage data(check_dims(dims).size());
    Scalar *p = data.data();
    for (Index k = 0; k < dims.n3; ++k)
      for (Index i = 0; i < dims.n1; ++i)
        for (Index j = 0; j < dims.n2; ++j)
          *p++ = static_cast<Scalar>(f(i, j, k));
    return Tensor3(dims, data);
  }

  static Tensor3 constant(Dims dims, Scalar value) {
    return Tensor3(dims, Storage::Constant(check_dims(dims).size(), value));
  }

  /// Stacks equally shaped matrices as frontal slices.
  template <typename Derived>
  static Tensor3 from_frontal_slices(
      const std::vector<Derived> &slices) {
    if (slices.empty())
      throw DimensionError("Tensor3: no frontal slices given");
    const Dims dims{slices.front().rows(), slices.front().cols(),
                    static_cast<Index>(slices.size())};
    Storage data(check_dims(dims).size());
    for (Index k = 0; k < dims.n3; ++k) {
      const auto &s = slices[k];
      if (s.rows() != dims.n1 || s.cols() != dims.n2)
        throw DimensionError("Tensor3: frontal slices differ in shape");
      Eigen::Map<RowMajorMatrix>(data.data() + k * dims.n1 * dims.n2,
                                 dims.n1, dims.n2) = s.template cast<Scalar>();
    }
    return Tensor3(dims, data);
  }

  const Dims &dims() const { return dims_; }
  Index n1() const { return dims_.n1; }
  Index n2() const { return dims_.n2; }
  Index n3() const { return dims_.n3; }
  Index size() const { return dims_.size(); }
  bool empty() const { return data_.size() == 0; }

  Index offset(Index i, Index j, Index k) const {
    return (k * dims_.n1 + i) * dims_.n2 + j;
  }

  Scalar operator()(Index i, Index j, Index k) const {
    return data_(offset(i, j, k));
  }

  Scalar at(Index i, Index j, Index k) const {
    if (i < 0 || i >= dims_.n1 || j < 0 || j >= dims_.n2 || k < 0 ||
        k >= dims_.n3)
      throw std::out_of_range("Tensor3::at: index out of range");
    return (*this)(i, j, k);
  }

  std::span<const Scalar> data() const {
    return {data_.data(), static_cast<std::size_t>(data_.size())};
  }
  const Storage &array() const { return data_; }

  /// Zero-copy view of frontal slice k.
  SliceMap frontal(Index k) const {
    if (k < 0 || k >= dims_.n3)
      throw std::out_of_range("Tensor3::frontal: slice index out of range");
    return SliceMap(data_.data() + k * dims_.n1 * dims_.n2, dims_.n1,
                    dims_.n2);
  }

  bool operator==(const Tensor3 &other) const {
    return dims_ == other.dims_ && (data_ == other.data_).all();
  }

  template <typename To> Tensor3<To> cast() const {
    return Tensor3<To>(dims_, data_.template cast<To>());
  }

private:
  static Dims check_dims(Dims d) {
    if (d.n1 <= 0 || d.n2 <= 0 || d.n3 <= 0)
      throw DimensionError("Tensor3: dims must be positive, got " +
                           to_string(d));
    return d;
  }

  void check_finite() const {
    if constexpr (std::is_floating_point_v<Scalar>) {
      if (!data_.allFinite())
        throw std::domain_error("Tensor3: non-finite entry");
    }
  }

  Dims dims_{};
  Storage data_;
};

using Tensor3d = Tensor3<double>;
using Tensor3f = Tensor3<float>;
/// Observation set; true marks an observed entry.
using Mask3 = Tensor3<bool>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Elementwise arithmetic.

template <std::floating_point S>
Tensor3<S> operator+(const Tensor3<S> &a, const Tensor3<S> &b) {
  detail::require_same(a.dims(), b.dims(), "operator+");
  return Tensor3<S>(a.dims(), a.array() + b.array());
}

template <std::floating_point S>
Tensor3<S> operator-(const Tensor3<S> &a, const Tensor3<S> &b) {
  detail::require_same(a.dims(), b.dims(), "operator-");
  return Tensor3<S>(a.dims(), a.array() - b.array());
}

template <std::floating_point S> Tensor3<S> operator-(const Tensor3<S> &a) {
  return Tensor3<S>(a.dims(), -a.array());
}

template <std::floating_point S>
Tensor3<S> operator*(S c, const Tensor3<S> &a) {
  return Tensor3<S>(a.dims(), c * a.array());
}

template <std::floating_point S>
Tensor3<S> operator*(const Tensor3<S> &a, S c) {
  return c * a;
}

template <std::floating_point S>
Tensor3<S> operator/(const Tensor3<S> &a, S c) {
  return Tensor3<S>(a.dims(), a.array() / c);
}

/// Largest absolute entry.
template <std::floating_point S> S max_abs(const Tensor3<S> &a) {
  return a.empty() ? S(0) : a.array().abs().maxCoeff();
}

// Slices and fibers.

enum class SliceAxis { horizontal, lateral, frontal };

/// Horizontal slice k is x(k,:,:) as an n2 x n3 matrix, lateral slice k is
/// x(:,k,:) as n1 x n3, frontal slice k is x(:,:,k) as n1 x n2.
template <typename S>
MatrixX<S> slice(const Tensor3<S> &x, SliceAxis axis, Index k) {
  const auto &d = x.dims();
  switch (axis) {
  case SliceAxis::frontal:
    return x.frontal(k);
  case SliceAxis::horizontal: {
    if (k < 0 || k >= d.n1)
      throw std::out_of_range("slice: horizontal index out of range");
    MatrixX<S> m(d.n2, d.n3);
    for (Index t = 0; t < d.n3; ++t)
      for (Index j = 0; j < d.n2; ++j)
        m(j, t) = x(k, j, t);
    return m;
  }
  case SliceAxis::lateral: {
    if (k < 0 || k >= d.n2)
      throw std::out_of_range("slice: lateral index out of range");
    MatrixX<S> m(d.n1, d.n3);
    for (Index t = 0; t < d.n3; ++t)
      for (Index i = 0; i < d.n1; ++i)
        m(i, t) = x(i, k, t);
    return m;
  }
  }
  throw std::invalid_argument("slice: unknown axis");
}

/// Mode-3 fiber x(i, j, :).
template <typename S>
Eigen::Matrix<S, Eigen::Dynamic, 1> tube(const Tensor3<S> &x, Index i,
                                         Index j) {
  Eigen::Matrix<S, Eigen::Dynamic, 1> v(x.n3());
  for (Index k = 0; k < x.n3(); ++k)
    v(k) = x.at(i, j, k);
  return v;
}

// Unfolding. Columns of the mode-l unfolding are the mode-l fibers, ordered
// lexicographically over the remaining two indices with the smaller index
// varying fastest.

namespace detail {
// (row, col) of entry (i, j, k) in the mode-l unfolding.
inline std::pair<Index, Index> unfold_position(const Dims &d, int mode,
                                               Index i, Index j, Index k) {
  switch (mode) {
  case 1:
    return {i, j + k * d.n2};
  case 2:
    return {j, i + k * d.n1};
  case 3:
    return {k, i + j * d.n1};
  default:
    throw std::invalid_argument("unfold: mode must be 1, 2 or 3");
  }
}

inline std::pair<Index, Index> unfold_shape(const Dims &d, int mode) {
  switch (mode) {
  case 1:
    return {d.n1, d.n2 * d.n3};
  case 2:
    return {d.n2, d.n1 * d.n3};
  case 3:
    return {d.n3, d.n1 * d.n2};
  default:
    throw std::invalid_argument("unfold: mode must be 1, 2 or 3");
  }
}
} // namespace detail

template <typename S> MatrixX<S> unfold(const Tensor3<S> &x, int mode) {
  const auto &d = x.dims();
  const auto [rows, cols] = detail::unfold_shape(d, mode);
  MatrixX<S> m(rows, cols);
  for (Index k = 0; k < d.n3; ++k)
    for (Index i = 0; i < d.n1; ++i)
      for (Index j = 0; j < d.n2; ++j) {
        const auto [r, c] = detail::unfold_position(d, mode, i, j, k);
        m(r, c) = x(i, j, k);
      }
  return m;
}

template <typename Derived>
auto fold(const Eigen::MatrixBase<Derived> &m, int mode, Dims dims)
    -> Tensor3<typename Derived::Scalar> {
  using S = typename Derived::Scalar;
  const auto [rows, cols] = detail::unfold_shape(dims, mode);
  if (m.rows() != rows || m.cols() != cols)
    throw DimensionError("fold: matrix shape inconsistent with dims " +
                         to_string(dims));
  return Tensor3<S>::generate(dims, [&](Index i, Index j, Index k) {
    const auto [r, c] = detail::unfold_position(dims, mode, i, j, k);
    return m(r, c);
  });
}

// Block constructions.

/// Block circulant matrix: block (r, c) holds frontal slice (r - c) mod n3.
template <typename S> MatrixX<S> bcirc(const Tensor3<S> &x) {
  const auto &d = x.dims();
  MatrixX<S> m(d.n1 * d.n3, d.n2 * d.n3);
  for (Index r = 0; r < d.n3; ++r)
    for (Index c = 0; c < d.n3; ++c)
      m.block(r * d.n1, c * d.n2, d.n1, d.n2) =
          x.frontal(((r - c) % d.n3 + d.n3) % d.n3);
  return m;
}

/// Frontal slices stacked vertically.
template <typename S> MatrixX<S> bvec(const Tensor3<S> &x) {
  const auto &d = x.dims();
  MatrixX<S> m(d.n1 * d.n3, d.n2);
  for (Index k = 0; k < d.n3; ++k)
    m.middleRows(k * d.n1, d.n1) = x.frontal(k);
  return m;
}

template <typename Derived>
auto bvfold(const Eigen::MatrixBase<Derived> &m, Dims dims)
    -> Tensor3<typename Derived::Scalar> {
  if (m.rows() != dims.n1 * dims.n3 || m.cols() != dims.n2)
    throw DimensionError("bvfold: matrix shape inconsistent with dims " +
                         to_string(dims));
  return Tensor3<typename Derived::Scalar>::generate(
      dims, [&](Index i, Index j, Index k) { return m(k * dims.n1 + i, j); });
}

/// Frontal slices on the block diagonal.
template <typename S> MatrixX<S> bdiag(const Tensor3<S> &x) {
  const auto &d = x.dims();
  MatrixX<S> m = MatrixX<S>::Zero(d.n1 * d.n3, d.n2 * d.n3);
  for (Index k = 0; k < d.n3; ++k)
    m.block(k * d.n1, k * d.n2, d.n1, d.n2) = x.frontal(k);
  return m;
}

template <typename Derived>
auto bdfold(const Eigen::MatrixBase<Derived> &m, Dims dims)
    -> Tensor3<typename Derived::Scalar> {
  if (m.rows() != dims.n1 * dims.n3 || m.cols() != dims.n2 * dims.n3)
    throw DimensionError("bdfold: matrix shape inconsistent with dims " +
                         to_string(dims));
  return Tensor3<typename Derived::Scalar>::generate(
      dims, [&](Index i, Index j, Index k) {
        return m(k * dims.n1 + i, k * dims.n2 + j);
      });
}

/// m x n x t -> m x t x n; lateral slice k of the result is frontal slice k.
template <typename S> Tensor3<S> twist(const Tensor3<S> &x) {
  const auto &d = x.dims();
  return Tensor3<S>::generate({d.n1, d.n3, d.n2},
                              [&](Index i, Index k, Index j) {
                                return x(i, j, k);
                              });
}

/// Inverse of twist.
template <typename S> Tensor3<S> squeeze(const Tensor3<S> &x) {
  const auto &d = x.dims();
  return Tensor3<S>::generate({d.n1, d.n3, d.n2},
                              [&](Index i, Index j, Index k) {
                                return x(i, k, j);
                              });
}

// Norms.

template <std::floating_point S> S frobenius_norm(const Tensor3<S> &x) {
  return x.empty() ? S(0) : x.array().matrix().norm();
}

template <std::floating_point S> S l1_norm(const Tensor3<S> &x) {
  return x.empty() ? S(0) : x.array().abs().sum();
}

template <std::floating_point S>
S inner_product(const Tensor3<S> &x, const Tensor3<S> &y) {
  detail::require_same(x.dims(), y.dims(), "inner_product");
  return x.empty() ? S(0) : (x.array() * y.array()).sum();
}

/// Keeps entries inside the mask and zeroes the rest.
template <std::floating_point S>
Tensor3<S> project_mask(const Tensor3<S> &x, const Mask3 &omega) {
  detail::require_same(x.dims(), omega.dims(), "project_mask");
  return Tensor3<S>(x.dims(),
                    omega.array().template cast<S>() * x.array());
}

inline Index count_true(const Mask3 &m) {
  return m.empty() ? 0 : m.array().template cast<Index>().sum();
}

inline Mask3 complement(const Mask3 &m) {
  return Mask3(m.dims(), !m.array());
}

} // namespace tlr
