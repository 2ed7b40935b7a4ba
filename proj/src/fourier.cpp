#include "fourier.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace tlr::detail {
namespace {

// Transforms every line of `a` along one axis in place.
void transform_axis(ComplexArray &a, const Dims &d, int axis, bool inverse) {
  const Index len = axis == 0 ? d.n1 : axis == 1 ? d.n2 : d.n3;
  if (len == 1)
    return;
  const Index stride = axis == 0 ? d.n2 : axis == 1 ? 1 : d.n1 * d.n2;
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> in(static_cast<std::size_t>(len)), out;
  auto line = [&](Index base) {
    for (Index t = 0; t < len; ++t)
      in[t] = a(base + t * stride);
    if (inverse)
      fft.inv(out, in);
    else
      fft.fwd(out, in);
    for (Index t = 0; t < len; ++t)
      a(base + t * stride) = out[t];
  };
  for (Index k = 0; k < d.n3; ++k)
    for (Index i = 0; i < d.n1; ++i)
      for (Index j = 0; j < d.n2; ++j) {
        const bool first = (axis == 0 && i == 0) || (axis == 1 && j == 0) ||
                           (axis == 2 && k == 0);
        if (first)
          line((k * d.n1 + i) * d.n2 + j);
      }
}

} // namespace

ComplexArray fft3(const Tensor3d &x) {
  ComplexArray a = x.array().cast<std::complex<double>>();
  for (int axis = 0; axis < 3; ++axis)
    transform_axis(a, x.dims(), axis, false);
  return a;
}

Tensor3d ifft3_real(ComplexArray spectrum, Dims dims) {
  for (int axis = 0; axis < 3; ++axis)
    transform_axis(spectrum, dims, axis, true);
  return Tensor3d(dims, spectrum.real());
}

Eigen::ArrayXd difference_symbol(Dims d, bool along_y, bool along_x,
                                 bool along_t) {
  auto sym = [](Index p, Index n) {
    return 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * double(p) / double(n));
  };
  Eigen::ArrayXd out(d.size());
  Index n = 0;
  for (Index k = 0; k < d.n3; ++k)
    for (Index i = 0; i < d.n1; ++i)
      for (Index j = 0; j < d.n2; ++j)
        out(n++) = (along_y ? sym(i, d.n1) : 0.0) +
                   (along_x ? sym(j, d.n2) : 0.0) +
                   (along_t ? sym(k, d.n3) : 0.0);
  return out;
}

} // namespace tlr::detail
