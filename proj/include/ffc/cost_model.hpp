#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ffc {

// Counting convention throughout: one multiply-accumulate = 2 FLOPs.
// Softmax, normalization layers, activations, biases and the CLS token are
// not counted.

struct TransformerCostConfig {
  std::size_t num_layers = 0;
  std::size_t hidden_size = 0;
  std::size_t num_attention_heads = 0;
  std::size_t head_dim = 0;
  std::size_t num_kv_heads = 0;
  std::size_t mlp_intermediate_size = 0;
  std::size_t vocab_size = 0;
  bool gated_mlp = true;
  std::size_t kv_bytes_per_element = 2;

  /// Throws ConfigError unless every field is positive and
  /// num_attention_heads * head_dim == hidden_size.
  void validate() const;
};

struct VisionPipelineCostConfig {
  std::size_t vit_layers = 0;
  std::size_t vit_hidden = 0;
  std::size_t vit_intermediate = 0;
  std::size_t num_patches = 0;           // N^2
  std::vector<std::size_t> projector_dims;  // e.g. {1024, 4096, 4096}
  bool ffc_enabled = false;
  std::size_t C = 0;
  std::size_t patch_size = 14;
  std::size_t image_channels = 3;

  void validate() const;
};

/// Everything a cost config file can hold.
struct CostConfigFile {
  TransformerCostConfig llm;
  VisionPipelineCostConfig vision;
  std::size_t text_tokens = 40;
};

/// Parses flat `key = value` text. `#` starts a comment. Keys are the field
/// names of TransformerCostConfig, VisionPipelineCostConfig and
/// `text_tokens`; booleans are true/false/1/0 and projector_dims is a comma
/// list. Unknown keys, malformed values and missing required keys raise
/// ConfigError naming the key.
CostConfigFile parse_cost_config(std::string_view text);
CostConfigFile load_cost_config(const std::string& path);

/// Built-in LLaVA-v1.5-7B description (Vicuna-7B + CLIP ViT-L/14-336 + 2-layer MLP).
CostConfigFile llava_v15_7b_config();

enum class ModuleKind { mlp, self_attention, query_transformer, ffc };

struct ComplexityEstimate {
  ModuleKind kind = ModuleKind::ffc;
  std::string symbolic;
  double dominant_ops = 0.0;
  double linear_ops = 0.0;  // lower-order terms, reported separately
  double total() const { return dominant_ops + linear_ops; }
};

/// Real-op constant of a radix-2 complex FFT: 10 ops per butterfly on two
/// points, i.e. 5 per point per stage.
inline constexpr double kFftOpsPerPointStage = 5.0;

/// FFC operation count: kappa * B * h * (N^2 log2 N + C^2 log2 C) dominant,
/// plus reorder/rotation/truncation terms linear in the element count.
ComplexityEstimate ffc_op_count(std::size_t n, std::size_t c, std::size_t hidden, std::size_t batch);

/// Dominant term of each module processing (B, N^2, h) features, unit constants:
/// mlp B h^2 N^2, self_attention B h N^4, query_transformer B h N^2 M,
/// ffc B h N^2 log2 N. `queries` (M) is required for query_transformer.
ComplexityEstimate module_complexity(ModuleKind kind, std::size_t batch, std::size_t n, std::size_t hidden,
                                     std::size_t queries = 0);

const char* module_kind_name(ModuleKind kind);

struct LlmFlopsTerms {
  double attention_projections = 0.0;
  double attention_scores = 0.0;
  double mlp = 0.0;
  double lm_head = 0.0;
  double total() const { return attention_projections + attention_scores + mlp + lm_head; }
};

/// Prefill FLOPs of a decoder-only transformer over `seq_len` tokens, per term:
///   projections  L * 2 s d (d + 2 kv_heads head_dim + d)   (Q, K, V, O)
///   scores       L * 4 s^2 d                              (QK^T and AV)
///   mlp          L * (3 if gated else 2) * 2 s d I
///   lm_head      2 s d V
LlmFlopsTerms llm_prefill_terms(const TransformerCostConfig& cfg, std::size_t seq_len);
double llm_prefill_flops(const TransformerCostConfig& cfg, std::size_t seq_len);

/// Decoder parameters excluding the input embedding table.
double llm_parameter_count(const TransformerCostConfig& cfg);

/// ViT prefill over num_patches tokens, patch embedding counted as one matmul.
double vit_prefill_flops(const VisionPipelineCostConfig& cfg);

/// Projector matmuls over `tokens` tokens.
double projector_flops(const VisionPipelineCostConfig& cfg, std::size_t tokens);

struct CostBreakdown {
  double flops_vision = 0.0;
  double flops_projector = 0.0;
  double flops_ffc = 0.0;
  double flops_llm_prefill = 0.0;
  double flops_total = 0.0;
  std::uint64_t kv_cache_bytes = 0;
  std::size_t vision_tokens = 0;  // tokens handed to the projector / LLM
  std::size_t llm_seq_len = 0;

  double share_vision() const { return flops_vision / flops_total; }
  double share_projector() const { return flops_projector / flops_total; }
  double share_ffc() const { return flops_ffc / flops_total; }
  double share_llm() const { return flops_llm_prefill / flops_total; }
};

/// ViT over N^2 patches -> FFC to C^2 (when enabled) -> projector -> LLM over
/// vision tokens + text_tokens.
CostBreakdown pipeline_flops(const TransformerCostConfig& tcfg, const VisionPipelineCostConfig& vcfg,
                             std::size_t text_tokens);

/// 1 - candidate / baseline, as a fraction.
double flops_reduction(const CostBreakdown& baseline, const CostBreakdown& candidate);

/// 2 * layers * kv_heads * head_dim * seq_len * bytes_per_element.
std::uint64_t kv_cache_bytes(const TransformerCostConfig& cfg, std::size_t seq_len);

/// 100 * (1 - out / in). Throws ParameterError when out > in or in == 0.
double compression_ratio(std::size_t tokens_in, std::size_t tokens_out);

/// Percentage with one decimal, or two when the exact value terminates at the
/// second decimal (93.75%).
std::string format_compression_ratio(std::size_t tokens_in, std::size_t tokens_out);

}  // namespace ffc
