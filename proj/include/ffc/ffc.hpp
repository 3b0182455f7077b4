#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "ffc/dct.hpp"
#include "ffc/tensor.hpp"

namespace ffc {

/// Frequency Feature Compressor settings.
struct FfcConfig {
  /// Grid side N of the incoming N^2 tokens. Zero means "infer from the input".
  std::size_t input_side = 0;
  /// Retained side C, 1 <= C <= N.
  std::size_t output_side = 0;
  /// Multiply the output by C/N. The plain transform pair (forward normalized
  /// over N, inverse over C) scales amplitudes by N/C; this undoes it.
  bool rescale_amplitude = false;
  TransformOptions transform{};
};

struct CompressionReport {
  std::size_t tokens_in = 0;
  std::size_t tokens_out = 0;
  double compression_ratio = 0.0;  // 1 - C^2 / N^2
  double energy_retained = 1.0;    // kept / total squared coefficient mass
};

struct FfcResult {
  TokenSequence tokens;
  CompressionReport report;
};

/// Top-left C x C corner of every channel, values untouched.
FrequencyGrid truncate_low_frequency(const FrequencyGrid& fgrid, std::size_t side);

/// Fraction of squared coefficient mass inside the C x C low-frequency
/// corner. Returns 1 for an all-zero grid.
double corner_energy_fraction(const FrequencyGrid& fgrid, std::size_t side);

/// reshape -> 2D DCT -> truncate -> 2D iDCT at size C -> flatten.
FfcResult ffc_compress(const TokenSequence& seq, const FfcConfig& cfg);

/// Same pipeline for an input that is already a grid.
FfcResult ffc_compress(const FeatureGrid& grid, const FfcConfig& cfg);

/// Reads a tensor file (sequence or grid), compresses it and writes the
/// resulting C^2 x h TokenSequence.
CompressionReport ffc_compress_file(const std::filesystem::path& in_path,
                                    const std::filesystem::path& out_path, const FfcConfig& cfg);

/// `tokens_in=576 tokens_out=144 compression_ratio=0.750 energy_retained=0.981234`
std::string format_report_kv(const CompressionReport& report);

/// JSON object with keys tokens_in, tokens_out, compression_ratio, energy_retained.
std::string format_report_json(const CompressionReport& report);

}  // namespace ffc
