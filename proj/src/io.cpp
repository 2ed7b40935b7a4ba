#include "tlr/io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace tlr {
namespace {

constexpr std::array<char, 4> kMagic = {'T', 'L', 'T', '1'};
constexpr std::size_t kHeader = 32;

void put_u64(std::vector<unsigned char> &out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b)
    out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

std::uint64_t get_u64(const unsigned char *p) {
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b)
    v = (v << 8) | p[b];
  return v;
}

std::vector<unsigned char> header(Dtype dtype, const Dims &d) {
  std::vector<unsigned char> out(kMagic.begin(), kMagic.end());
  out.push_back(static_cast<unsigned char>(dtype));
  out.push_back(3);
  out.push_back(0);
  out.push_back(0);
  put_u64(out, static_cast<std::uint64_t>(d.n1));
  put_u64(out, static_cast<std::uint64_t>(d.n2));
  put_u64(out, static_cast<std::uint64_t>(d.n3));
  return out;
}

void write_bytes(const std::vector<unsigned char> &bytes,
                 const std::filesystem::path &path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw TensorFileError("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char *>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f)
    throw TensorFileError("failed writing " + path.string());
}

std::vector<unsigned char> read_bytes(const std::filesystem::path &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw TensorFileError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

struct Parsed {
  Dtype dtype;
  Dims dims;
  std::vector<unsigned char> bytes;
};

Parsed parse(const std::filesystem::path &path) {
  Parsed p{Dtype::f64, {}, read_bytes(path)};
  const auto &b = p.bytes;
  const std::string where = path.string() + ": ";
  if (b.size() < 4 || std::memcmp(b.data(), kMagic.data(), 4) != 0)
    throw BadMagicError(where + "not a TLT1 tensor file");
  if (b.size() < kHeader)
    throw TruncatedError(where + "header is truncated");
  if (b[4] > 1)
    throw MalformedError(where + "unknown dtype code " + std::to_string(b[4]));
  p.dtype = static_cast<Dtype>(b[4]);
  if (b[5] != 3)
    throw BadOrderError(where + "order " + std::to_string(b[5]) +
                        " is not 3");
  if (b[6] != 0 || b[7] != 0)
    throw MalformedError(where + "reserved header bytes are not zero");
  std::uint64_t n[3];
  for (int a = 0; a < 3; ++a) {
    n[a] = get_u64(b.data() + 8 + 8 * a);
    if (n[a] == 0 || n[a] > (std::uint64_t(1) << 40))
      throw MalformedError(where + "invalid dimension " + std::to_string(n[a]));
  }
  p.dims = {Index(n[0]), Index(n[1]), Index(n[2])};
  const std::uint64_t width = p.dtype == Dtype::f64 ? 8 : 1;
  const std::uint64_t count = n[0] * n[1] * n[2];
  if (count > (std::uint64_t(1) << 40))
    throw MalformedError(where + "tensor is too large");
  const std::uint64_t expected = kHeader + count * width;
  if (b.size() < expected)
    throw TruncatedError(where + "payload holds " +
                         std::to_string(b.size() - kHeader) + " bytes, expected " +
                         std::to_string(count * width));
  if (b.size() > expected)
    throw MalformedError(where + "trailing bytes after the payload");
  return p;
}

} // namespace

void write_tensor(const Tensor3d &x, const std::filesystem::path &path) {
  auto bytes = header(Dtype::f64, x.dims());
  for (const double v : x.data())
    put_u64(bytes, std::bit_cast<std::uint64_t>(v));
  write_bytes(bytes, path);
}

void write_tensor(const Mask3 &x, const std::filesystem::path &path) {
  auto bytes = header(Dtype::mask, x.dims());
  for (const bool v : x.data())
    bytes.push_back(v ? 1 : 0);
  write_bytes(bytes, path);
}

Tensor3d read_tensor(const std::filesystem::path &path) {
  const auto p = parse(path);
  if (p.dtype != Dtype::f64)
    throw DtypeMismatchError(path.string() + ": holds a mask, expected f64");
  std::vector<double> values(static_cast<std::size_t>(p.dims.size()));
  for (std::size_t n = 0; n < values.size(); ++n)
    values[n] = std::bit_cast<double>(get_u64(p.bytes.data() + kHeader + 8 * n));
  return Tensor3d(p.dims, values);
}

Mask3 read_mask(const std::filesystem::path &path) {
  const auto p = parse(path);
  if (p.dtype != Dtype::mask)
    throw DtypeMismatchError(path.string() + ": holds f64 values, expected a mask");
  Mask3::Storage values(p.dims.size());
  for (Index n = 0; n < p.dims.size(); ++n) {
    const unsigned char v = p.bytes[kHeader + static_cast<std::size_t>(n)];
    if (v > 1)
      throw MalformedError(path.string() + ": mask byte " + std::to_string(v) +
                           " is not 0 or 1");
    values(n) = v == 1;
  }
  return Mask3(p.dims, values);
}

Dtype peek_dtype(const std::filesystem::path &path) {
  return parse(path).dtype;
}

} // namespace tlr
