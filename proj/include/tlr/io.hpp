#pragma once

// Binary tensor files.
//
// Layout (all integers little-endian):
//   bytes 0-3    "TLT1"
//   byte  4      dtype: 0 = u8 mask, 1 = f64
//   byte  5      order, always 3
//   bytes 6-7    reserved, zero
//   bytes 8-31   n1, n2, n3 as u64
//   payload      n1*n2*n3 values, frontal-slice-major (k, then i, then j)

#include "tlr/tensor3.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>

namespace tlr {

enum class Dtype : std::uint8_t { mask = 0, f64 = 1 };

class TensorFileError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
class BadMagicError : public TensorFileError {
public:
  using TensorFileError::TensorFileError;
};
class BadOrderError : public TensorFileError {
public:
  using TensorFileError::TensorFileError;
};
class TruncatedError : public TensorFileError {
public:
  using TensorFileError::TensorFileError;
};
class DtypeMismatchError : public TensorFileError {
public:
  using TensorFileError::TensorFileError;
};
/// Reserved bytes set, zero dims, trailing bytes or non-boolean mask bytes.
class MalformedError : public TensorFileError {
public:
  using TensorFileError::TensorFileError;
};

void write_tensor(const Tensor3d &x, const std::filesystem::path &path);
void write_tensor(const Mask3 &x, const std::filesystem::path &path);

/// Throws DtypeMismatchError if the file holds a mask.
Tensor3d read_tensor(const std::filesystem::path &path);
/// Throws DtypeMismatchError if the file holds f64 values.
Mask3 read_mask(const std::filesystem::path &path);

/// Validates the header and returns the stored dtype.
Dtype peek_dtype(const std::filesystem::path &path);

} // namespace tlr
