#pragma once

// Multi-axis DFT helpers for the circular-boundary quadratic subproblems.
// Arrays use the Tensor3 storage order (slice, row, column).

#include "tlr/tensor3.hpp"

#include <Eigen/Dense>

namespace tlr::detail {

using ComplexArray = Eigen::ArrayXcd;

/// Unnormalized forward DFT along all three axes.
ComplexArray fft3(const Tensor3d &x);

/// Inverse of fft3; the imaginary residue is dropped.
Tensor3d ifft3_real(ComplexArray spectrum, Dims dims);

/// Eigenvalues of the sum of D^T D over the selected circular forward
/// difference operators, in fft3 layout.
Eigen::ArrayXd difference_symbol(Dims dims, bool along_y, bool along_x,
                                 bool along_t);

} // namespace tlr::detail
