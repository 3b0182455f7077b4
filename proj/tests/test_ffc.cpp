#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "ffc/errors.hpp"
#include "ffc/ffc.hpp"
#include "ffc/spectrum.hpp"
#include "ffc/tensor_io.hpp"
#include "oracle.hpp"

using namespace ffc;

namespace {

// reshape -> 2D DCT double sum -> corner slice -> size-C inverse double sum -> flatten,
// entirely through the long-double oracle.
TokenSequence oracle_compress(const FeatureGrid& g, std::size_t c) {
  const auto f = oracle::dct2d(g);
  FrequencyGrid corner(c, c, g.hidden());
  for (std::size_t m = 0; m < c; ++m)
    for (std::size_t n = 0; n < c; ++n)
      for (std::size_t h = 0; h < g.hidden(); ++h) corner.at(m, n, h) = f.at(m, n, h);
  return flatten_grid(oracle::idct2d(corner));
}

std::vector<double> channel_means(const TokenSequence& s) {
  std::vector<double> m(s.hidden(), 0.0);
  for (std::size_t t = 0; t < s.length(); ++t)
    for (std::size_t c = 0; c < s.hidden(); ++c) m[c] += s.at(t, c);
  for (auto& v : m) v /= static_cast<double>(s.length());
  return m;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ffc_test_" + name);
}

}  // namespace

TEST(Truncate, KeepsTopLeftCorner) {
  const auto values = oracle::random_values(24 * 24 * 3, 1);
  const FrequencyGrid f(24, 24, 3, values);
  const auto t = truncate_low_frequency(f, 12);
  ASSERT_EQ(t.rows(), 12u);
  ASSERT_EQ(t.cols(), 12u);
  for (std::size_t m = 0; m < 12; ++m)
    for (std::size_t n = 0; n < 12; ++n)
      for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(t.at(m, n, c), f.at(m, n, c));
}

TEST(Truncate, FullSideIsIdentity) {
  const FrequencyGrid f(5, 5, 2, oracle::random_values(50, 2));
  EXPECT_EQ(truncate_low_frequency(f, 5), f);
}

TEST(Truncate, DcOnlyEnergyIsFullForEveryC) {
  FrequencyGrid f(8, 8, 4);
  for (std::size_t c = 0; c < 4; ++c) f.at(0, 0, c) = 3.0 + static_cast<double>(c);
  for (std::size_t c = 1; c <= 8; ++c) EXPECT_DOUBLE_EQ(corner_energy_fraction(f, c), 1.0);
}

TEST(Truncate, OutOfRangeSideIsShapeError) {
  const FrequencyGrid f(4, 4, 1);
  EXPECT_THROW(truncate_low_frequency(f, 5), ShapeError);
  EXPECT_THROW(truncate_low_frequency(f, 0), ShapeError);
  EXPECT_THROW(corner_energy_fraction(f, 5), ShapeError);
}

TEST(Compress, FullSideReproducesInput) {
  const auto g = oracle::random_grid(24, 32, 3);
  for (auto impl : {DctImpl::naive, DctImpl::fft}) {
    FfcConfig cfg{.input_side = 24, .output_side = 24};
    cfg.transform.impl = impl;
    const auto r = ffc_compress(flatten_grid(g), cfg);
    EXPECT_LT(oracle::max_abs_diff(r.tokens.values(), g.values()), 1e-9);
    EXPECT_EQ(r.report.compression_ratio, 0.0);
    EXPECT_EQ(r.report.energy_retained, 1.0);
  }
}

TEST(Compress, ConstantGridExposesImplicitAmplitudeScale) {
  const double v = 0.8;
  FeatureGrid g(4, 1);
  for (auto& x : g.values()) x = v;
  const auto expected = oracle_compress(g, 2);
  const auto r = ffc_compress(g, {.input_side = 4, .output_side = 2});
  ASSERT_EQ(r.tokens.length(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(expected.values()[i], 2 * v, 1e-15);
    EXPECT_NEAR(r.tokens.values()[i], 2 * v, 1e-12);
  }
  const auto rescaled = ffc_compress(g, {.input_side = 4, .output_side = 2, .rescale_amplitude = true});
  for (double x : rescaled.tokens.values()) EXPECT_NEAR(x, v, 1e-12);
}

TEST(Compress, MatchesOraclePipelineOnRandomGrid) {
  const auto g = oracle::random_grid(8, 3, 11);
  for (std::size_t c : {1u, 3u, 5u, 8u}) {
    const auto r = ffc_compress(g, {.input_side = 8, .output_side = c});
    EXPECT_LT(oracle::rel_err(r.tokens.values(), oracle_compress(g, c).values()), 1e-9) << c;
  }
}

TEST(Compress, Side6From24Gives36Tokens) {
  const auto r = ffc_compress(TokenSequence(576, 4, oracle::random_values(576 * 4, 2)),
                              {.input_side = 24, .output_side = 6});
  EXPECT_EQ(r.tokens.length(), 36u);
  EXPECT_EQ(r.report.tokens_in, 576u);
  EXPECT_EQ(r.report.tokens_out, 36u);
  EXPECT_DOUBLE_EQ(r.report.compression_ratio, 0.9375);
  EXPECT_GT(r.report.energy_retained, 0.0);
  EXPECT_LT(r.report.energy_retained, 1.0);
}

TEST(Compress, LengthMismatchIsShapeError) {
  EXPECT_THROW(ffc_compress(TokenSequence(577, 1), {.output_side = 4}), ShapeError);
  EXPECT_THROW(ffc_compress(TokenSequence(576, 1), {.input_side = 20, .output_side = 4}), ShapeError);
  EXPECT_THROW(ffc_compress(TokenSequence(16, 1), {.output_side = 5}), ShapeError);
  EXPECT_THROW(ffc_compress(TokenSequence(16, 1), {.output_side = 0}), ShapeError);
}

TEST(Compress, TruncationIsIdempotent) {
  const auto g = oracle::random_grid(24, 8, 5);
  const auto once = ffc_compress(g, {.output_side = 12});
  const auto twice = ffc_compress(once.tokens, {.output_side = 12});
  EXPECT_LT(oracle::max_abs_diff(twice.tokens.values(), once.tokens.values()), 1e-9);
}

TEST(Compress, EnergyRetainedIsMonotoneInC) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto g = generate_synthetic({SyntheticKind::ar1, 0.7}, 16, 16, seed);
    double prev = 0.0;
    for (std::size_t c = 1; c <= 16; ++c) {
      const double e = ffc_compress(g, {.output_side = c}).report.energy_retained;
      EXPECT_GE(e, prev) << c;
      EXPECT_GT(e, 0.0);
      EXPECT_LE(e, 1.0);
      prev = e;
    }
    EXPECT_EQ(prev, 1.0);
  }
}

TEST(Compress, Linearity) {
  const auto g = oracle::random_grid(12, 4, 9);
  FeatureGrid scaled = g;
  for (auto& v : scaled.values()) v *= -3.5;
  const auto a = ffc_compress(g, {.output_side = 7});
  const auto b = ffc_compress(scaled, {.output_side = 7});
  std::vector<double> expected(a.tokens.values().begin(), a.tokens.values().end());
  for (auto& v : expected) v *= -3.5;
  EXPECT_LT(oracle::rel_err(b.tokens.values(), expected), 1e-9);
}

TEST(Compress, DcPreservationPerChannel) {
  const auto g = oracle::random_grid(24, 6, 14);
  const auto in_means = channel_means(flatten_grid(g));
  for (std::size_t c : {6u, 8u, 12u, 16u}) {
    const double scale = 24.0 / static_cast<double>(c);
    const auto plain = channel_means(ffc_compress(g, {.output_side = c}).tokens);
    const auto kept = channel_means(ffc_compress(g, {.output_side = c, .rescale_amplitude = true}).tokens);
    for (std::size_t ch = 0; ch < 6; ++ch) {
      EXPECT_NEAR(plain[ch], scale * in_means[ch], 1e-9);
      EXPECT_NEAR(kept[ch], in_means[ch], 1e-9);
    }
  }
}

TEST(Compress, CompactionBeatsFlatBaselineOnlyForCorrelatedGrids) {
  const auto ar1 = generate_synthetic({SyntheticKind::ar1, 0.9}, 24, 256, 3);
  const auto iid = generate_synthetic({SyntheticKind::iid_gaussian, 0.0}, 24, 256, 3);
  EXPECT_GT(ffc_compress(ar1, {.output_side = 12}).report.energy_retained, 0.25);
  EXPECT_NEAR(ffc_compress(iid, {.output_side = 12}).report.energy_retained, 0.25, 0.05);
}

TEST(CompressFile, LlavaShapedInputs) {
  const auto in = temp_path("feats576.fvt");
  write_tensor(in, TokenSequence(576, 1024, oracle::random_values(576 * 1024, 6)));

  const auto out12 = temp_path("out144.fvt");
  const auto r12 = ffc_compress_file(in, out12, {.output_side = 12});
  const auto t12 = std::get<TokenSequence>(read_tensor(out12));
  EXPECT_EQ(t12.length(), 144u);
  EXPECT_EQ(t12.hidden(), 1024u);
  EXPECT_DOUBLE_EQ(r12.compression_ratio, 0.75);

  const auto out16 = temp_path("out256.fvt");
  const auto r16 = ffc_compress_file(in, out16, {.output_side = 16});
  EXPECT_EQ(std::get<TokenSequence>(read_tensor(out16)).length(), 256u);
  EXPECT_NEAR(100 * r16.compression_ratio, 55.6, 0.05);

  // Deterministic output bytes.
  const auto again = temp_path("out144b.fvt");
  ffc_compress_file(in, again, {.output_side = 12});
  std::ifstream a(out12, std::ios::binary), b(again, std::ios::binary);
  EXPECT_TRUE(std::equal(std::istreambuf_iterator<char>(a), {}, std::istreambuf_iterator<char>(b)));
}

TEST(CompressFile, GridInputAndErrors) {
  const auto in = temp_path("grid.fvt");
  write_tensor(in, oracle::random_grid(8, 2, 1));
  const auto out = temp_path("grid_out.fvt");
  EXPECT_EQ(ffc_compress_file(in, out, {.output_side = 4}).tokens_out, 16u);

  const auto bad = temp_path("feats577.fvt");
  write_tensor(bad, TokenSequence(577, 2));
  EXPECT_THROW(ffc_compress_file(bad, out, {.output_side = 12}), ShapeError);
  EXPECT_THROW(ffc_compress_file(temp_path("missing.fvt"), out, {.output_side = 2}), PathError);
}

TEST(Report, KeyValueAndJson) {
  const CompressionReport r{576, 144, 0.75, 0.5};
  EXPECT_EQ(format_report_kv(r), "tokens_in=576 tokens_out=144 compression_ratio=0.750 energy_retained=0.500000");
  const auto j = nlohmann::json::parse(format_report_json(r));
  EXPECT_EQ(j["tokens_in"], 576);
  EXPECT_EQ(j["tokens_out"], 144);
  EXPECT_DOUBLE_EQ(j["compression_ratio"].get<double>(), 0.75);
  EXPECT_DOUBLE_EQ(j["energy_retained"].get<double>(), 0.5);
  EXPECT_EQ(j.size(), 4u);
}
