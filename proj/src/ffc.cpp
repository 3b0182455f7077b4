#include "ffc/ffc.hpp"

#include <algorithm>
#include <cstdio>
#include <json.hpp>

#include "ffc/errors.hpp"
#include "ffc/tensor_io.hpp"

namespace ffc {

namespace {

void require_side(std::size_t side, std::size_t limit) {
  if (side < 1) throw ShapeError("retained side C must be >= 1");
  if (side > limit) {
    throw ShapeError("retained side C=" + std::to_string(side) + " exceeds grid side N=" +
                     std::to_string(limit));
  }
}

}  // namespace

FrequencyGrid truncate_low_frequency(const FrequencyGrid& fgrid, std::size_t side) {
  require_side(side, std::min(fgrid.rows(), fgrid.cols()));
  FrequencyGrid out(side, side, fgrid.hidden());
  const std::size_t h = fgrid.hidden();
  for (std::size_t m = 0; m < side; ++m) {
    const auto src = fgrid.values().subspan((m * fgrid.cols()) * h, side * h);
    std::copy(src.begin(), src.end(), out.values().begin() + static_cast<std::ptrdiff_t>(m * side * h));
  }
  return out;
}

double corner_energy_fraction(const FrequencyGrid& fgrid, std::size_t side) {
  require_side(side, std::min(fgrid.rows(), fgrid.cols()));
  double kept = 0.0;
  double total = 0.0;
  const std::size_t h = fgrid.hidden();
  for (std::size_t m = 0; m < fgrid.rows(); ++m) {
    for (std::size_t n = 0; n < fgrid.cols(); ++n) {
      double bin = 0.0;
      for (std::size_t c = 0; c < h; ++c) {
        const double v = fgrid.at(m, n, c);
        bin += v * v;
      }
      total += bin;
      if (m < side && n < side) kept += bin;
    }
  }
  if (total == 0.0) return 1.0;
  return std::min(1.0, kept / total);
}

FfcResult ffc_compress(const FeatureGrid& grid, const FfcConfig& cfg) {
  const std::size_t n = grid.side();
  if (cfg.input_side != 0 && cfg.input_side != n) {
    throw ShapeError("input has " + std::to_string(n * n) + " tokens, config expects N=" +
                     std::to_string(cfg.input_side));
  }
  const std::size_t c = cfg.output_side;
  require_side(c, n);

  const FrequencyGrid spectrum = dct2d(grid, cfg.transform);
  const FrequencyGrid corner = truncate_low_frequency(spectrum, c);
  FeatureGrid reconstructed = idct2d(corner, cfg.transform);

  if (cfg.rescale_amplitude) {
    const double scale = static_cast<double>(c) / static_cast<double>(n);
    for (auto& v : reconstructed.values()) v *= scale;
  }

  CompressionReport report;
  report.tokens_in = n * n;
  report.tokens_out = c * c;
  report.compression_ratio = 1.0 - static_cast<double>(c * c) / static_cast<double>(n * n);
  report.energy_retained = c == n ? 1.0 : corner_energy_fraction(spectrum, c);
  return {flatten_grid(reconstructed), report};
}

FfcResult ffc_compress(const TokenSequence& seq, const FfcConfig& cfg) {
  if (cfg.input_side != 0 && seq.length() != cfg.input_side * cfg.input_side) {
    throw ShapeError("sequence length " + std::to_string(seq.length()) + " != N^2 for N=" +
                     std::to_string(cfg.input_side));
  }
  return ffc_compress(reshape_to_grid(seq), cfg);
}

CompressionReport ffc_compress_file(const std::filesystem::path& in_path,
                                    const std::filesystem::path& out_path, const FfcConfig& cfg) {
  const Tensor input = read_tensor(in_path);
  FfcResult result = std::visit([&cfg](const auto& t) { return ffc_compress(t, cfg); }, input);
  write_tensor(out_path, result.tokens);
  return result.report;
}

std::string format_report_kv(const CompressionReport& report) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "tokens_in=%zu tokens_out=%zu compression_ratio=%.3f energy_retained=%.6f",
                report.tokens_in, report.tokens_out, report.compression_ratio, report.energy_retained);
  return buf;
}

std::string format_report_json(const CompressionReport& report) {
  nlohmann::ordered_json j;
  j["tokens_in"] = report.tokens_in;
  j["tokens_out"] = report.tokens_out;
  j["compression_ratio"] = report.compression_ratio;
  j["energy_retained"] = report.energy_retained;
  return j.dump();
}

}  // namespace ffc
