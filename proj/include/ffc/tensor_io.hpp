#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ffc/tensor.hpp"

namespace ffc {

// On-disk layout, all integers little-endian:
//
//   offset  size      field
//   0       4         magic "FVTC"
//   4       4         version (u32, currently 1)
//   8       4         ndim (u32, 2 or 3)
//   12      4*ndim    dims (u32 each, >= 1)
//   ..      4         dtype code (u32, 1 = IEEE-754 binary32)
//   ..      4*prod    payload, row-major binary32
//
// ndim 2 holds a TokenSequence [L, h]; ndim 3 holds a FeatureGrid [N, N, h].

inline constexpr char kTensorMagic[4] = {'F', 'V', 'T', 'C'};
inline constexpr std::uint32_t kTensorVersion = 1;
inline constexpr std::uint32_t kDtypeFloat32 = 1;

using Tensor = std::variant<TokenSequence, FeatureGrid>;

/// Encodes a tensor to the exact byte image written by write_tensor.
/// Values are rounded to the nearest binary32; a value that overflows
/// binary32 or is non-finite raises ValidationError.
std::vector<std::uint8_t> encode_tensor(const Tensor& tensor);

/// Decodes and validates a byte image produced by encode_tensor.
Tensor decode_tensor(const std::vector<std::uint8_t>& bytes);

void write_tensor(const std::filesystem::path& path, const Tensor& tensor);
Tensor read_tensor(const std::filesystem::path& path);

/// Row-major reshape: grid(p, q, :) == seq(p * N + q, :), N = sqrt(L).
FeatureGrid reshape_to_grid(const TokenSequence& seq);

/// Exact inverse of reshape_to_grid.
TokenSequence flatten_grid(const FeatureGrid& grid);

/// Integer square root of n when n is a perfect square.
std::optional<std::size_t> exact_square_root(std::size_t n);

}  // namespace ffc
