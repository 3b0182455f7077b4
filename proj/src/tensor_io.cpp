#include "ffc/tensor_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "ffc/errors.hpp"

namespace ffc {

namespace {

static_assert(std::numeric_limits<float>::is_iec559, "binary32 floats required");

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | in[offset + static_cast<std::size_t>(i)];
  return v;
}

std::uint32_t checked_dim(std::size_t d) {
  if (d == 0 || d > std::numeric_limits<std::uint32_t>::max()) {
    throw ShapeError("dimension " + std::to_string(d) + " does not fit the tensor header");
  }
  return static_cast<std::uint32_t>(d);
}

void encode_payload(std::vector<std::uint8_t>& out, std::span<const double> values) {
  out.reserve(out.size() + 4 * values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto narrowed = static_cast<float>(values[i]);
    if (!std::isfinite(values[i]) || !std::isfinite(narrowed)) {
      throw ValidationError("value at flat index " + std::to_string(i) +
                            " is not representable as a finite binary32");
    }
    put_u32(out, std::bit_cast<std::uint32_t>(narrowed));
  }
}

}  // namespace

std::optional<std::size_t> exact_square_root(std::size_t n) {
  auto root = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (root * root > n) --root;
  while ((root + 1) * (root + 1) <= n) ++root;
  if (root * root != n) return std::nullopt;
  return root;
}

std::vector<std::uint8_t> encode_tensor(const Tensor& tensor) {
  std::vector<std::uint8_t> out(std::begin(kTensorMagic), std::end(kTensorMagic));
  put_u32(out, kTensorVersion);
  std::visit(
      [&out](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, TokenSequence>) {
          put_u32(out, 2);
          put_u32(out, checked_dim(t.length()));
          put_u32(out, checked_dim(t.hidden()));
        } else {
          put_u32(out, 3);
          put_u32(out, checked_dim(t.side()));
          put_u32(out, checked_dim(t.side()));
          put_u32(out, checked_dim(t.hidden()));
        }
        put_u32(out, kDtypeFloat32);
        encode_payload(out, t.values());
      },
      tensor);
  return out;
}

Tensor decode_tensor(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 12) throw LengthError("tensor header truncated");
  if (std::memcmp(bytes.data(), kTensorMagic, 4) != 0) throw FormatError("bad magic, expected FVTC");
  if (const auto version = get_u32(bytes, 4); version != kTensorVersion) {
    throw FormatError("unsupported tensor version " + std::to_string(version));
  }
  const auto ndim = get_u32(bytes, 8);
  if (ndim != 2 && ndim != 3) throw FormatError("ndim must be 2 or 3, got " + std::to_string(ndim));

  const std::size_t header = 12 + 4 * ndim + 4;
  if (bytes.size() < header) throw LengthError("tensor header truncated");
  std::vector<std::size_t> dims(ndim);
  std::size_t count = 1;
  for (std::uint32_t i = 0; i < ndim; ++i) {
    dims[i] = get_u32(bytes, 12 + 4 * i);
    if (dims[i] == 0) throw ValidationError("dimension " + std::to_string(i) + " is zero");
    count *= dims[i];
  }
  if (const auto dtype = get_u32(bytes, 12 + 4 * ndim); dtype != kDtypeFloat32) {
    throw FormatError("unsupported dtype code " + std::to_string(dtype));
  }
  if (bytes.size() - header != 4 * count) {
    throw LengthError("payload holds " + std::to_string(bytes.size() - header) +
                      " bytes, header dims require " + std::to_string(4 * count));
  }

  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = std::bit_cast<float>(get_u32(bytes, header + 4 * i));
  }
  require_finite(values, "tensor payload");

  if (ndim == 2) return TokenSequence(dims[0], dims[1], std::move(values));
  if (dims[0] != dims[1]) {
    throw ShapeError("grid tensor must be square, got " + std::to_string(dims[0]) + "x" +
                     std::to_string(dims[1]));
  }
  return FeatureGrid(dims[0], dims[2], std::move(values));
}

void write_tensor(const std::filesystem::path& path, const Tensor& tensor) {
  const auto bytes = encode_tensor(tensor);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PathError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw PathError("write to " + path.string() + " failed");
}

Tensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PathError("cannot open " + path.string() + " for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw PathError("read from " + path.string() + " failed");
  return decode_tensor(bytes);
}

FeatureGrid reshape_to_grid(const TokenSequence& seq) {
  const auto side = exact_square_root(seq.length());
  if (!side) {
    throw ShapeError("token count " + std::to_string(seq.length()) + " is not a perfect square");
  }
  // Token-major sequence and (row, col, channel) grid share a memory layout.
  const auto v = seq.values();
  return FeatureGrid(*side, seq.hidden(), std::vector<double>(v.begin(), v.end()));
}

TokenSequence flatten_grid(const FeatureGrid& grid) {
  const auto v = grid.values();
  return TokenSequence(grid.side() * grid.side(), grid.hidden(), std::vector<double>(v.begin(), v.end()));
}

}  // namespace ffc
