#include <gtest/gtest.h>

#include <cmath>

#include "ffc/cost_model.hpp"
#include "ffc/errors.hpp"

using namespace ffc;

namespace {

const CostConfigFile kLlava = llava_v15_7b_config();

CostBreakdown compressed(std::size_t c, std::size_t text = 40) {
  auto v = kLlava.vision;
  v.ffc_enabled = true;
  v.C = c;
  return pipeline_flops(kLlava.llm, v, text);
}

}  // namespace

TEST(FfcOpCount, GoldenValueN24C12) {
  // 5 * 1024 * (576 log2 24 + 144 log2 12), evaluated once in double precision.
  const auto e = ffc_op_count(24, 12, 1024, 1);
  EXPECT_NEAR(e.dominant_ops, 16164725.76265847, 1e-6);
  EXPECT_DOUBLE_EQ(e.linear_ops, 8.0 * 1024 * (576 + 144));
  EXPECT_EQ(e.kind, ModuleKind::ffc);
  EXPECT_FALSE(e.symbolic.empty());
}

TEST(FfcOpCount, FullSideDoublesTheForwardTerm) {
  const auto e = ffc_op_count(24, 24, 1024, 1);
  EXPECT_DOUBLE_EQ(e.dominant_ops, 2 * 5.0 * 1024 * 576 * std::log2(24.0));
  EXPECT_NEAR(e.total(), e.dominant_ops, 0.35 * e.dominant_ops);
}

TEST(FfcOpCount, LinearInHiddenAndBatch) {
  const auto base = ffc_op_count(24, 8, 512, 1);
  EXPECT_DOUBLE_EQ(ffc_op_count(24, 8, 1024, 1).total(), 2 * base.total());
  EXPECT_DOUBLE_EQ(ffc_op_count(24, 8, 512, 2).total(), 2 * base.total());
  EXPECT_THROW(ffc_op_count(8, 9, 1, 1), ShapeError);
}

TEST(ModuleComplexity, ValuesAtLlavaShape) {
  EXPECT_DOUBLE_EQ(module_complexity(ModuleKind::self_attention, 1, 24, 1024).dominant_ops, 339738624.0);
  EXPECT_DOUBLE_EQ(module_complexity(ModuleKind::mlp, 1, 24, 1024).dominant_ops, 603979776.0);
  EXPECT_DOUBLE_EQ(module_complexity(ModuleKind::query_transformer, 1, 24, 1024, 144).dominant_ops, 84934656.0);
  EXPECT_NEAR(module_complexity(ModuleKind::ffc, 1, 24, 1024).dominant_ops, 2704320.922025355, 1e-6);
}

TEST(ModuleComplexity, OrderingInStatedRegime) {
  for (std::size_t m : {36u, 64u, 144u, 256u}) {
    const double f = module_complexity(ModuleKind::ffc, 1, 24, 1024).dominant_ops;
    const double q = module_complexity(ModuleKind::query_transformer, 1, 24, 1024, m).dominant_ops;
    const double p = module_complexity(ModuleKind::mlp, 1, 24, 1024).dominant_ops;
    EXPECT_LT(f, q) << m;
    EXPECT_LT(q, p) << m;
  }
}

TEST(ModuleComplexity, BatchDoublesAndMissingQueries) {
  for (auto kind : {ModuleKind::mlp, ModuleKind::self_attention, ModuleKind::ffc}) {
    EXPECT_DOUBLE_EQ(module_complexity(kind, 2, 24, 1024).dominant_ops,
                     2 * module_complexity(kind, 1, 24, 1024).dominant_ops);
  }
  EXPECT_THROW(module_complexity(ModuleKind::query_transformer, 1, 24, 1024), ParameterError);
  EXPECT_STREQ(module_kind_name(ModuleKind::query_transformer), "query_transformer");
}

TEST(LlmPrefill, LlavaPromptNearEightPointFiveTeraflops) {
  EXPECT_NEAR(llm_prefill_flops(kLlava.llm, 576 + 40), 8.54e12, 0.10 * 8.54e12);
}

TEST(LlmPrefill, SingleTokenIsTwiceParameterCount) {
  // Oracle: the public Llama/Vicuna-7B parameter count, 6,738,415,616.
  EXPECT_NEAR(llm_prefill_flops(kLlava.llm, 1), 2 * 6738415616.0, 0.05 * 2 * 6738415616.0);
  // Every weight is used once per token; the only other term is 4 s^2 d per layer.
  const auto& cfg = kLlava.llm;
  EXPECT_DOUBLE_EQ(llm_prefill_flops(cfg, 1),
                   2 * llm_parameter_count(cfg) + 4.0 * double(cfg.hidden_size) * double(cfg.num_layers));
}

TEST(LlmPrefill, DoublingLayersDoublesPerLayerTerms) {
  auto cfg = kLlava.llm;
  const auto a = llm_prefill_terms(cfg, 300);
  cfg.num_layers *= 2;
  const auto b = llm_prefill_terms(cfg, 300);
  EXPECT_EQ(b.attention_projections, 2 * a.attention_projections);
  EXPECT_EQ(b.attention_scores, 2 * a.attention_scores);
  EXPECT_EQ(b.mlp, 2 * a.mlp);
  EXPECT_EQ(b.lm_head, a.lm_head);
}

TEST(LlmPrefill, UngatedMlpUsesTwoMatmuls) {
  auto cfg = kLlava.llm;
  const double gated = llm_prefill_terms(cfg, 10).mlp;
  cfg.gated_mlp = false;
  EXPECT_DOUBLE_EQ(llm_prefill_terms(cfg, 10).mlp, gated * 2 / 3);
}

TEST(Pipeline, PartsSumToTotal) {
  for (std::size_t c : {6u, 8u, 12u, 16u, 24u}) {
    const auto b = compressed(c);
    EXPECT_EQ(b.flops_total, b.flops_vision + b.flops_projector + b.flops_ffc + b.flops_llm_prefill);
    EXPECT_NEAR(b.share_vision() + b.share_projector() + b.share_ffc() + b.share_llm(), 1.0, 1e-12);
    EXPECT_EQ(b.vision_tokens, c * c);
    EXPECT_EQ(b.llm_seq_len, c * c + 40);
  }
}

TEST(Pipeline, ReductionsAtStandardSides) {
  const auto base = pipeline_flops(kLlava.llm, kLlava.vision, 40);
  EXPECT_NEAR(base.flops_total, 8.54e12, 0.10 * 8.54e12);
  const struct {
    std::size_t c;
    double tflops, reduction;
  } rows[] = {{16, 4.30, 49.6}, {12, 2.81, 67.1}, {8, 1.75, 79.5}, {6, 1.38, 83.8}};
  for (const auto& row : rows) {
    const auto b = compressed(row.c);
    EXPECT_NEAR(100 * flops_reduction(base, b), row.reduction, 1.5) << row.c;
    EXPECT_NEAR(b.flops_total, row.tflops * 1e12, 0.10 * row.tflops * 1e12) << row.c;
  }
}

TEST(Pipeline, DisabledCompressorMatchesBaseline) {
  auto v = kLlava.vision;
  v.ffc_enabled = false;
  v.C = 24;
  const auto a = pipeline_flops(kLlava.llm, v, 40);
  const auto b = pipeline_flops(kLlava.llm, kLlava.vision, 40);
  EXPECT_EQ(a.flops_total, b.flops_total);
  EXPECT_EQ(a.flops_ffc, 0.0);
  EXPECT_EQ(a.kv_cache_bytes, b.kv_cache_bytes);
}

TEST(Pipeline, InvalidSideRejected) {
  auto v = kLlava.vision;
  v.ffc_enabled = true;
  v.C = 25;
  EXPECT_THROW(pipeline_flops(kLlava.llm, v, 40), ConfigError);
}

TEST(KvCache, BytesPerTokenFp16) { EXPECT_EQ(kv_cache_bytes(kLlava.llm, 1), 524288u); }

TEST(KvCache, VisionOnlyAndWithPrompt) {
  const auto& cfg = kLlava.llm;
  EXPECT_DOUBLE_EQ(1.0 - double(kv_cache_bytes(cfg, 36)) / double(kv_cache_bytes(cfg, 576)), 0.9375);
  // (576 - 36) / (576 + 49) = 0.864
  EXPECT_NEAR(1.0 - double(kv_cache_bytes(cfg, 36 + 49)) / double(kv_cache_bytes(cfg, 576 + 49)), 0.864, 1e-12);
  auto wide = cfg;
  wide.kv_bytes_per_element = 4;
  EXPECT_EQ(kv_cache_bytes(wide, 100), 2 * kv_cache_bytes(cfg, 100));
  EXPECT_EQ(kv_cache_bytes(cfg, 200), 2 * kv_cache_bytes(cfg, 100));
}

TEST(CompressionRatio, PrintedPrecision) {
  EXPECT_EQ(format_compression_ratio(576, 256), "55.6%");
  EXPECT_EQ(format_compression_ratio(576, 144), "75.0%");
  EXPECT_EQ(format_compression_ratio(576, 64), "88.9%");
  EXPECT_EQ(format_compression_ratio(576, 36), "93.75%");
  EXPECT_EQ(format_compression_ratio(553, 236), "57.3%");
  EXPECT_EQ(format_compression_ratio(576, 576), "0.0%");
  EXPECT_DOUBLE_EQ(compression_ratio(576, 36), 93.75);
  EXPECT_THROW(compression_ratio(36, 576), ParameterError);
  EXPECT_THROW(compression_ratio(0, 0), ParameterError);
}

TEST(CostConfig, BundledFileMatchesBuiltin) {
  const auto cfg = load_cost_config(std::string(FFC_SOURCE_DIR) + "/configs/llava_v1_5_7b.cfg");
  const auto a = pipeline_flops(cfg.llm, cfg.vision, cfg.text_tokens);
  const auto b = pipeline_flops(kLlava.llm, kLlava.vision, kLlava.text_tokens);
  EXPECT_EQ(a.flops_total, b.flops_total);
  EXPECT_EQ(cfg.vision.projector_dims, (std::vector<std::size_t>{1024, 4096, 4096}));
}

TEST(CostConfig, ErrorsNameTheKey) {
  const std::string base =
      "num_layers=2\nhidden_size=8\nnum_attention_heads=2\nmlp_intermediate_size=16\nvocab_size=10\n"
      "vit_layers=1\nvit_hidden=4\nvit_intermediate=8\nnum_patches=16\nprojector_dims=4,8\n";
  EXPECT_NO_THROW(parse_cost_config(base));
  EXPECT_EQ(parse_cost_config(base).llm.head_dim, 4u);

  auto message = [](const std::string& text) {
    try {
      parse_cost_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(base + "bogus_key=1\n").find("bogus_key"), std::string::npos);
  EXPECT_NE(message(base + "vocab_size=ten\n").find("vocab_size"), std::string::npos);
  EXPECT_NE(message(base + "gated_mlp=maybe\n").find("gated_mlp"), std::string::npos);
  EXPECT_NE(message(base + "head_dim=3\n").find("head_dim"), std::string::npos);
  EXPECT_NE(message("num_layers=2\n").find("missing config key"), std::string::npos);
  EXPECT_NE(message(base + "just some words\n").find("not key=value"), std::string::npos);
  EXPECT_NE(message(base + "ffc_enabled=true\nC=5\n").find("'C'"), std::string::npos);
}
