#include "ffc/cost_model.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "ffc/errors.hpp"

namespace ffc {

namespace {

double d(std::size_t v) { return static_cast<double>(v); }

void require_positive(std::size_t v, const char* key) {
  if (v == 0) throw ConfigError(std::string("config key '") + key + "' must be positive");
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || value.empty()) {
    throw ConfigError("config key '" + std::string(key) + "' expects a non-negative integer, got '" +
                      std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + std::string(key) + "' expects true/false, got '" + std::string(value) +
                    "'");
}

std::vector<std::size_t> parse_list(std::string_view key, std::string_view value) {
  std::vector<std::size_t> out;
  while (!value.empty()) {
    const auto comma = value.find(',');
    out.push_back(parse_count(key, trim(value.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ConfigError("config key '" + std::string(key) + "' expects a comma list");
  return out;
}

}  // namespace

void TransformerCostConfig::validate() const {
  require_positive(num_layers, "num_layers");
  require_positive(hidden_size, "hidden_size");
  require_positive(num_attention_heads, "num_attention_heads");
  require_positive(head_dim, "head_dim");
  require_positive(num_kv_heads, "num_kv_heads");
  require_positive(mlp_intermediate_size, "mlp_intermediate_size");
  require_positive(vocab_size, "vocab_size");
  require_positive(kv_bytes_per_element, "kv_bytes_per_element");
  if (num_attention_heads * head_dim != hidden_size) {
    throw ConfigError("config key 'head_dim': num_attention_heads * head_dim must equal hidden_size");
  }
}

void VisionPipelineCostConfig::validate() const {
  require_positive(vit_layers, "vit_layers");
  require_positive(vit_hidden, "vit_hidden");
  require_positive(vit_intermediate, "vit_intermediate");
  require_positive(num_patches, "num_patches");
  require_positive(patch_size, "patch_size");
  require_positive(image_channels, "image_channels");
  if (projector_dims.size() < 2) throw ConfigError("config key 'projector_dims' needs at least two entries");
  for (auto v : projector_dims) require_positive(v, "projector_dims");
  if (ffc_enabled) {
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(d(num_patches))));
    if (side * side != num_patches) throw ConfigError("config key 'num_patches' must be a perfect square");
    if (C < 1 || C > side) throw ConfigError("config key 'C' must satisfy 1 <= C <= sqrt(num_patches)");
  }
}

CostConfigFile parse_cost_config(std::string_view text) {
  CostConfigFile cfg;
  cfg.llm = {};
  cfg.vision = {};
  std::map<std::string, bool> seen;

  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + " is not key=value: '" + std::string(line) +
                        "'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    seen[std::string(key)] = true;

    auto& l = cfg.llm;
    auto& v = cfg.vision;
    if (key == "num_layers") l.num_layers = parse_count(key, value);
    else if (key == "hidden_size") l.hidden_size = parse_count(key, value);
    else if (key == "num_attention_heads") l.num_attention_heads = parse_count(key, value);
    else if (key == "head_dim") l.head_dim = parse_count(key, value);
    else if (key == "num_kv_heads") l.num_kv_heads = parse_count(key, value);
    else if (key == "mlp_intermediate_size") l.mlp_intermediate_size = parse_count(key, value);
    else if (key == "vocab_size") l.vocab_size = parse_count(key, value);
    else if (key == "gated_mlp") l.gated_mlp = parse_bool(key, value);
    else if (key == "kv_bytes_per_element") l.kv_bytes_per_element = parse_count(key, value);
    else if (key == "vit_layers") v.vit_layers = parse_count(key, value);
    else if (key == "vit_hidden") v.vit_hidden = parse_count(key, value);
    else if (key == "vit_intermediate") v.vit_intermediate = parse_count(key, value);
    else if (key == "num_patches") v.num_patches = parse_count(key, value);
    else if (key == "projector_dims") v.projector_dims = parse_list(key, value);
    else if (key == "ffc_enabled") v.ffc_enabled = parse_bool(key, value);
    else if (key == "C") v.C = parse_count(key, value);
    else if (key == "patch_size") v.patch_size = parse_count(key, value);
    else if (key == "image_channels") v.image_channels = parse_count(key, value);
    else if (key == "text_tokens") cfg.text_tokens = parse_count(key, value);
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
  }

  for (const char* required : {"num_layers", "hidden_size", "num_attention_heads", "mlp_intermediate_size",
                               "vocab_size", "vit_layers", "vit_hidden", "vit_intermediate", "num_patches",
                               "projector_dims"}) {
    if (!seen.count(required)) throw ConfigError(std::string("missing config key '") + required + "'");
  }
  if (!seen.count("head_dim") && cfg.llm.num_attention_heads > 0) {
    cfg.llm.head_dim = cfg.llm.hidden_size / cfg.llm.num_attention_heads;
  }
  if (!seen.count("num_kv_heads")) cfg.llm.num_kv_heads = cfg.llm.num_attention_heads;

  cfg.llm.validate();
  cfg.vision.validate();
  return cfg;
}

CostConfigFile load_cost_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PathError("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_cost_config(buf.str());
}

CostConfigFile llava_v15_7b_config() {
  CostConfigFile cfg;
  cfg.llm = {.num_layers = 32,
             .hidden_size = 4096,
             .num_attention_heads = 32,
             .head_dim = 128,
             .num_kv_heads = 32,
             .mlp_intermediate_size = 11008,
             .vocab_size = 32000,
             .gated_mlp = true,
             .kv_bytes_per_element = 2};
  cfg.vision = {.vit_layers = 24,
                .vit_hidden = 1024,
                .vit_intermediate = 4096,
                .num_patches = 576,
                .projector_dims = {1024, 4096, 4096},
                .ffc_enabled = false,
                .C = 24,
                .patch_size = 14,
                .image_channels = 3};
  cfg.text_tokens = 40;
  return cfg;
}

const char* module_kind_name(ModuleKind kind) {
  switch (kind) {
    case ModuleKind::mlp: return "mlp";
    case ModuleKind::self_attention: return "self_attention";
    case ModuleKind::query_transformer: return "query_transformer";
    case ModuleKind::ffc: return "ffc";
  }
  return "unknown";
}

ComplexityEstimate ffc_op_count(std::size_t n, std::size_t c, std::size_t hidden, std::size_t batch) {
  if (n < 1 || hidden < 1 || batch < 1) throw ShapeError("ffc_op_count needs N, h, B >= 1");
  if (c < 1 || c > n) throw ShapeError("ffc_op_count needs 1 <= C <= N");
  const double scale = d(batch) * d(hidden);
  const double n2 = d(n) * d(n);
  const double c2 = d(c) * d(c);
  ComplexityEstimate e;
  e.kind = ModuleKind::ffc;
  e.symbolic = "5*B*h*(N^2*log2(N) + C^2*log2(C)) + 8*B*h*(N^2 + C^2)";
  e.dominant_ops = kFftOpsPerPointStage * scale * (n2 * std::log2(d(n)) + c2 * std::log2(d(c)));
  // Two separable passes per 2D transform, each with a 3-op rotation and a
  // 1-op scale per point.
  e.linear_ops = 8.0 * scale * (n2 + c2);
  return e;
}

ComplexityEstimate module_complexity(ModuleKind kind, std::size_t batch, std::size_t n, std::size_t hidden,
                                     std::size_t queries) {
  if (batch < 1 || n < 1 || hidden < 1) throw ShapeError("module_complexity needs B, N, h >= 1");
  const double b = d(batch), nn = d(n), h = d(hidden);
  ComplexityEstimate e;
  e.kind = kind;
  switch (kind) {
    case ModuleKind::mlp:
      e.symbolic = "B*h^2*N^2";
      e.dominant_ops = b * h * h * nn * nn;
      break;
    case ModuleKind::self_attention:
      e.symbolic = "B*h*N^4";
      e.dominant_ops = b * h * nn * nn * nn * nn;
      break;
    case ModuleKind::query_transformer:
      if (queries < 1) throw ParameterError("query_transformer complexity needs the query count M");
      e.symbolic = "B*h*N^2*M";
      e.dominant_ops = b * h * nn * nn * d(queries);
      break;
    case ModuleKind::ffc:
      e.symbolic = "B*h*N^2*log2(N)";
      e.dominant_ops = b * h * nn * nn * std::log2(nn);
      break;
  }
  return e;
}

LlmFlopsTerms llm_prefill_terms(const TransformerCostConfig& cfg, std::size_t seq_len) {
  cfg.validate();
  if (seq_len < 1) throw ParameterError("seq_len must be >= 1");
  const double s = d(seq_len), dm = d(cfg.hidden_size), layers = d(cfg.num_layers);
  const double kv_width = 2.0 * d(cfg.num_kv_heads) * d(cfg.head_dim);
  LlmFlopsTerms t;
  t.attention_projections = layers * 2.0 * s * dm * (dm + kv_width + dm);
  t.attention_scores = layers * 4.0 * s * s * dm;
  t.mlp = layers * (cfg.gated_mlp ? 3.0 : 2.0) * 2.0 * s * dm * d(cfg.mlp_intermediate_size);
  t.lm_head = 2.0 * s * dm * d(cfg.vocab_size);
  return t;
}

double llm_prefill_flops(const TransformerCostConfig& cfg, std::size_t seq_len) {
  return llm_prefill_terms(cfg, seq_len).total();
}

double llm_parameter_count(const TransformerCostConfig& cfg) {
  cfg.validate();
  const double dm = d(cfg.hidden_size);
  const double attention = dm * (dm + 2.0 * d(cfg.num_kv_heads) * d(cfg.head_dim) + dm);
  const double mlp = (cfg.gated_mlp ? 3.0 : 2.0) * dm * d(cfg.mlp_intermediate_size);
  return d(cfg.num_layers) * (attention + mlp) + dm * d(cfg.vocab_size);
}

double vit_prefill_flops(const VisionPipelineCostConfig& cfg) {
  cfg.validate();
  const double n = d(cfg.num_patches), h = d(cfg.vit_hidden);
  const double per_layer = 2.0 * n * h * 4.0 * h            // Q, K, V, O
                           + 4.0 * n * n * h                // scores and weighted values
                           + 2.0 * 2.0 * n * h * d(cfg.vit_intermediate);  // two MLP matmuls
  const double patch_embed = 2.0 * n * d(cfg.image_channels * cfg.patch_size * cfg.patch_size) * h;
  return d(cfg.vit_layers) * per_layer + patch_embed;
}

double projector_flops(const VisionPipelineCostConfig& cfg, std::size_t tokens) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cfg.projector_dims.size(); ++i) {
    total += 2.0 * d(tokens) * d(cfg.projector_dims[i]) * d(cfg.projector_dims[i + 1]);
  }
  return total;
}

CostBreakdown pipeline_flops(const TransformerCostConfig& tcfg, const VisionPipelineCostConfig& vcfg,
                             std::size_t text_tokens) {
  tcfg.validate();
  vcfg.validate();
  CostBreakdown b;
  b.vision_tokens = vcfg.ffc_enabled ? vcfg.C * vcfg.C : vcfg.num_patches;
  b.llm_seq_len = b.vision_tokens + text_tokens;
  b.flops_vision = vit_prefill_flops(vcfg);
  if (vcfg.ffc_enabled) {
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(d(vcfg.num_patches))));
    b.flops_ffc = ffc_op_count(side, vcfg.C, vcfg.vit_hidden, 1).total();
  }
  b.flops_projector = projector_flops(vcfg, b.vision_tokens);
  b.flops_llm_prefill = llm_prefill_flops(tcfg, b.llm_seq_len);
  b.flops_total = b.flops_vision + b.flops_projector + b.flops_ffc + b.flops_llm_prefill;
  b.kv_cache_bytes = kv_cache_bytes(tcfg, b.llm_seq_len);
  return b;
}

double flops_reduction(const CostBreakdown& baseline, const CostBreakdown& candidate) {
  return 1.0 - candidate.flops_total / baseline.flops_total;
}

std::uint64_t kv_cache_bytes(const TransformerCostConfig& cfg, std::size_t seq_len) {
  cfg.validate();
  if (seq_len < 1) throw ParameterError("seq_len must be >= 1");
  return std::uint64_t{2} * cfg.num_layers * cfg.num_kv_heads * cfg.head_dim * seq_len *
         cfg.kv_bytes_per_element;
}

double compression_ratio(std::size_t tokens_in, std::size_t tokens_out) {
  if (tokens_in == 0) throw ParameterError("tokens_in must be >= 1");
  if (tokens_out > tokens_in) {
    throw ParameterError("tokens_out=" + std::to_string(tokens_out) + " exceeds tokens_in=" +
                         std::to_string(tokens_in));
  }
  return 100.0 * (1.0 - d(tokens_out) / d(tokens_in));
}

std::string format_compression_ratio(std::size_t tokens_in, std::size_t tokens_out) {
  const double pct = compression_ratio(tokens_in, tokens_out);
  const std::uint64_t removed = tokens_in - tokens_out;
  const bool exact_tenths = (removed * 1000) % tokens_in == 0;
  const bool exact_hundredths = (removed * 10000) % tokens_in == 0;
  char buf[32];
  std::snprintf(buf, sizeof buf, exact_hundredths && !exact_tenths ? "%.2f%%" : "%.1f%%", pct);
  return buf;
}

}  // namespace ffc
