#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ffc/cost_model.hpp"
#include "ffc/dct.hpp"
#include "ffc/errors.hpp"
#include "ffc/ffc.hpp"
#include "ffc/random.hpp"
#include "ffc/tensor_io.hpp"
#include "ffc/verify.hpp"

namespace ffc::cli {

namespace {

std::size_t parse_size(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != value.size() || value.empty() || value[0] == '-') {
    throw std::invalid_argument("--gen: " + key + " expects a non-negative integer, got '" + value + "'");
  }
  return static_cast<std::size_t>(v);
}

double parse_real(const std::string& what, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != value.size() || value.empty()) {
    throw std::invalid_argument("--gen: " + what + " expects a number, got '" + value + "'");
  }
  return v;
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

// Loads the grid behind --input or --gen.
FeatureGrid load_source(const std::string& input, const std::string& gen) {
  if (!gen.empty()) {
    const auto req = parse_generator(gen);
    return generate_synthetic(req.spec, req.side, req.hidden, req.seed.value_or(0));
  }
  const Tensor t = read_tensor(input);
  if (const auto* seq = std::get_if<TokenSequence>(&t)) return reshape_to_grid(*seq);
  return std::get<FeatureGrid>(t);
}

// Wraps a subcommand body: library errors become exit 2 with a one-line
// diagnostic; grammar errors in --gen become exit 1.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ffc::Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

struct CompressArgs {
  std::string input, output;
  std::size_t side = 0;
  bool rescale = false;
  bool json = false;
};

int cmd_compress(const CompressArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    FfcConfig cfg;
    cfg.output_side = a.side;
    cfg.rescale_amplitude = a.rescale;
    const auto report = ffc_compress_file(a.input, a.output, cfg);
    if (a.json) {
      out << format_report_json(report) << '\n';
    } else {
      out << "tokens_in=" << report.tokens_in << '\n'
          << "tokens_out=" << report.tokens_out << '\n'
          << "compression_ratio=" << fmt("%.3f", report.compression_ratio) << '\n'
          << "energy_retained=" << fmt("%.6f", report.energy_retained) << '\n';
    }
    return int{kOk};
  });
}

struct SourceArgs {
  std::string input, gen;
};

int require_one_source(const SourceArgs& s, std::ostream& err) {
  if (s.input.empty() == s.gen.empty()) {
    err << "usage error: exactly one of --input or --gen is required\n";
    return kUsage;
  }
  return kOk;
}

int cmd_spectrum(const SourceArgs& src, const std::string& output, std::ostream& out, std::ostream& err) {
  if (const int rc = require_one_source(src, err); rc != kOk) return rc;
  return guarded(err, [&] {
    const FeatureGrid grid = load_source(src.input, src.gen);
    const SpectrumMap map = compute_spectrum(grid);
    export_spectrum_csv(map, output);
    const auto peak = static_cast<std::size_t>(
        std::distance(map.values.begin(), std::max_element(map.values.begin(), map.values.end())));
    const auto above_floor =
        std::count_if(map.values.begin(), map.values.end(), [](double v) { return v > kSpectrumFloor; });
    out << "side=" << map.side << '\n'
        << "bins=" << map.values.size() << '\n'
        << "bins_above_floor=" << above_floor << '\n'
        << "peak_bin=" << peak / map.side << ',' << peak % map.side << '\n'
        << "output=" << output << '\n';
    return int{kOk};
  });
}

int cmd_stats(const SourceArgs& src, std::vector<std::size_t> sides, std::ostream& out, std::ostream& err) {
  if (const int rc = require_one_source(src, err); rc != kOk) return rc;
  return guarded(err, [&] {
    const FeatureGrid grid = load_source(src.input, src.gen);
    if (sides.empty()) sides.push_back(std::max<std::size_t>(1, grid.side() / 2));
    const auto stats = compaction_stats(grid, sides);
    out << "side=" << grid.side() << '\n' << "hidden=" << grid.hidden() << '\n';
    for (std::size_t i = 0; i < stats.sides.size(); ++i) {
      out << "corner_energy_fraction_C" << stats.sides[i] << '=' << fmt("%.6f", stats.corner_energy_fraction[i])
          << '\n';
    }
    out << "flatness=" << fmt("%.6f", stats.flatness) << '\n';
    return int{kOk};
  });
}

int cmd_gen(const std::string& gen, const std::string& output, bool as_tokens, std::ostream& out,
            std::ostream& err) {
  return guarded(err, [&] {
    const auto req = parse_generator(gen);
    const FeatureGrid grid = generate_synthetic(req.spec, req.side, req.hidden, req.seed.value_or(0));
    if (as_tokens) {
      write_tensor(output, flatten_grid(grid));
    } else {
      write_tensor(output, grid);
    }
    out << "side=" << grid.side() << '\n'
        << "hidden=" << grid.hidden() << '\n'
        << "tokens=" << grid.side() * grid.side() << '\n'
        << "layout=" << (as_tokens ? "sequence" : "grid") << '\n'
        << "rng=" << CounterRng::kAlgorithm << '\n'
        << "output=" << output << '\n';
    return int{kOk};
  });
}

struct CostArgs {
  std::string config;
  std::optional<std::size_t> tokens, side, baseline, text_tokens;
  bool table = false;
};

void emit(std::ostream& out, bool table, const std::vector<std::pair<std::string, std::string>>& rows) {
  if (!table) {
    for (const auto& [k, v] : rows) out << k << '=' << v << '\n';
    return;
  }
  std::size_t width = 0;
  for (const auto& row : rows) width = std::max(width, row.first.size());
  for (const auto& [k, v] : rows) out << std::left << std::setw(static_cast<int>(width + 2)) << k << v << '\n';
}

int cmd_cost(const CostArgs& a, std::ostream& out, std::ostream& err) {
  if (a.tokens.has_value() == a.side.has_value()) {
    err << "usage error: exactly one of --tokens or --C is required\n";
    return kUsage;
  }
  return guarded(err, [&] {
    const CostConfigFile cfg = a.config.empty() ? llava_v15_7b_config() : load_cost_config(a.config);
    std::vector<std::pair<std::string, std::string>> rows;
    auto num = [](double v) { return fmt("%.6e", v); };
    auto pct = [](double v) { return fmt("%.2f", 100.0 * v); };

    if (a.tokens) {
      // LLM-only prefill over exactly --tokens positions.
      const double flops = llm_prefill_flops(cfg.llm, *a.tokens);
      const auto kv = kv_cache_bytes(cfg.llm, *a.tokens);
      rows = {{"llm_seq_len", std::to_string(*a.tokens)},
              {"flops_llm_prefill", num(flops)},
              {"llm_parameters", num(llm_parameter_count(cfg.llm))},
              {"flops_per_token", num(flops / static_cast<double>(*a.tokens))},
              {"kv_cache_bytes", std::to_string(kv)}};
      if (a.baseline) {
        const double base = llm_prefill_flops(cfg.llm, *a.baseline);
        const auto base_kv = kv_cache_bytes(cfg.llm, *a.baseline);
        rows.push_back({"baseline_flops_llm_prefill", num(base)});
        rows.push_back({"reduction_flops_percent", pct(1.0 - flops / base)});
        rows.push_back({"reduction_kv_percent",
                        pct(1.0 - static_cast<double>(kv) / static_cast<double>(base_kv))});
      }
      emit(out, a.table, rows);
      return int{kOk};
    }

    const std::size_t text = a.text_tokens.value_or(cfg.text_tokens);
    VisionPipelineCostConfig vcfg = cfg.vision;
    vcfg.ffc_enabled = true;
    vcfg.C = *a.side;
    const CostBreakdown b = pipeline_flops(cfg.llm, vcfg, text);
    rows = {{"vision_tokens", std::to_string(b.vision_tokens)},
            {"text_tokens", std::to_string(text)},
            {"llm_seq_len", std::to_string(b.llm_seq_len)},
            {"flops_vision", num(b.flops_vision)},
            {"flops_ffc", num(b.flops_ffc)},
            {"flops_projector", num(b.flops_projector)},
            {"flops_llm_prefill", num(b.flops_llm_prefill)},
            {"flops_total", num(b.flops_total)},
            {"share_vision", fmt("%.4f", b.share_vision())},
            {"share_ffc", fmt("%.4f", b.share_ffc())},
            {"share_projector", fmt("%.4f", b.share_projector())},
            {"share_llm", fmt("%.4f", b.share_llm())},
            {"kv_cache_bytes", std::to_string(b.kv_cache_bytes)}};
    if (a.baseline) {
      VisionPipelineCostConfig base_cfg = cfg.vision;
      base_cfg.ffc_enabled = false;
      base_cfg.num_patches = *a.baseline;
      const CostBreakdown base = pipeline_flops(cfg.llm, base_cfg, text);
      rows.push_back({"baseline_vision_tokens", std::to_string(base.vision_tokens)});
      rows.push_back({"baseline_flops_total", num(base.flops_total)});
      rows.push_back({"baseline_kv_cache_bytes", std::to_string(base.kv_cache_bytes)});
      rows.push_back({"compression_ratio", format_compression_ratio(base.vision_tokens, b.vision_tokens)});
      rows.push_back({"reduction_flops_percent", pct(flops_reduction(base, b))});
      rows.push_back({"reduction_kv_percent", pct(1.0 - static_cast<double>(b.kv_cache_bytes) /
                                                          static_cast<double>(base.kv_cache_bytes))});
    }
    emit(out, a.table, rows);
    return int{kOk};
  });
}

// Median wall time per call, in microseconds, of `fn` over `repeats` timed
// batches after one warmup batch.
template <typename Fn>
double median_us(std::size_t repeats, std::size_t inner, Fn&& fn) {
  using clock = std::chrono::steady_clock;
  for (std::size_t i = 0; i < inner; ++i) fn();
  std::vector<double> samples;
  for (std::size_t r = 0; r < repeats; ++r) {
    const auto t0 = clock::now();
    for (std::size_t i = 0; i < inner; ++i) fn();
    const auto t1 = clock::now();
    samples.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count() / static_cast<double>(inner));
  }
  std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(samples.size() / 2),
                   samples.end());
  return samples[samples.size() / 2];
}

int cmd_bench(const std::vector<std::size_t>& sizes, std::size_t repeats, bool strict, std::ostream& out,
              std::ostream& err) {
  if (sizes.empty() || repeats == 0) {
    err << "usage error: --sizes needs at least one size\n";
    return kUsage;
  }
  for (auto n : sizes) {
    if (n == 0) {
      err << "usage error: sizes must be >= 1\n";
      return kUsage;
    }
  }
  std::ostringstream table;
  table << std::left << std::setw(8) << "N" << std::right << std::setw(14) << "naive_us" << std::setw(14)
        << "fft_us" << std::setw(12) << "naive/fft" << '\n';
  std::vector<double> ratios;
  double last_naive = 0.0, last_fft = 0.0;
  for (auto n : sizes) {
    const CounterRng rng(n);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rng.normal(i);
    const NaiveDct naive(n);
    const FftDct fast(n);
    std::vector<std::complex<double>> work(fast.workspace_size());
    const std::size_t inner = std::max<std::size_t>(1, (std::size_t{1} << 16) / n);
    volatile double sink = 0.0;
    last_naive = median_us(repeats, inner, [&] {
      naive.forward(x, y);
      sink = sink + y[0];
    });
    last_fft = median_us(repeats, inner, [&] {
      fast.forward(x, y, work);
      sink = sink + y[0];
    });
    ratios.push_back(last_naive / last_fft);
    table << std::left << std::setw(8) << n << std::right << std::fixed << std::setprecision(3) << std::setw(14)
          << last_naive << std::setw(14) << last_fft << std::setw(12) << std::setprecision(2) << ratios.back()
          << '\n';
    table.unsetf(std::ios::fixed);
  }

  const std::size_t largest = sizes.back();
  const bool crossover_ok = largest < 64 || last_fft <= last_naive;
  const bool trend_ok = ratios.size() < 2 || ratios.back() > ratios.front();
  if (strict && (!crossover_ok || !trend_ok)) {
    err << table.str();
    err << "verification failed: " << (!crossover_ok ? "fft slower than naive at N=" + std::to_string(largest)
                                                       : std::string("naive/fft ratio does not grow with N"))
        << '\n';
    return kVerifyFailed;
  }
  if (!crossover_ok) err << "warning: fft slower than naive at N=" << largest << " (noisy machine?)\n";
  out << table.str();
  return kOk;
}

int cmd_verify(std::size_t max_n, std::size_t trials, std::uint64_t seed, const CliHooks& hooks,
               std::ostream& out, std::ostream& err) {
  VerifyOptions options;
  options.max_n = max_n;
  options.trials = trials;
  options.seed = seed;
  options.max_n_2d = std::min<std::size_t>(max_n, 32);
  options.perturb = hooks.verify_perturb;
  const auto results = run_verification(options);
  bool ok = true;
  for (const auto& r : results) {
    out << format_suite_line(r) << '\n';
    ok = ok && r.passed;
  }
  if (!ok) {
    err << "verification failed\n";
    return kVerifyFailed;
  }
  return kOk;
}

}  // namespace

GeneratorRequest parse_generator(const std::string& text) {
  GeneratorRequest req;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) parts.push_back(part);
  if (parts.empty() || parts[0].empty()) throw std::invalid_argument("--gen needs a kind (iid, ar1:rho, dc:v)");

  const auto colon = parts[0].find(':');
  const std::string kind = parts[0].substr(0, colon);
  const std::string param = colon == std::string::npos ? "" : parts[0].substr(colon + 1);
  if (kind == "iid" || kind == "iid_gaussian") {
    req.spec.kind = SyntheticKind::iid_gaussian;
    if (!param.empty()) throw std::invalid_argument("--gen: iid takes no parameter");
  } else if (kind == "ar1") {
    req.spec.kind = SyntheticKind::ar1;
    if (param.empty()) throw std::invalid_argument("--gen: ar1 needs rho, e.g. ar1:0.9");
    req.spec.parameter = parse_real("rho", param);
  } else if (kind == "dc" || kind == "dc_only") {
    req.spec.kind = SyntheticKind::dc_only;
    if (param.empty()) throw std::invalid_argument("--gen: dc needs a value, e.g. dc:1");
    req.spec.parameter = parse_real("dc value", param);
  } else {
    throw std::invalid_argument("--gen: unknown kind '" + kind + "'");
  }

  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--gen: expected key=value, got '" + parts[i] + "'");
    const std::string key = parts[i].substr(0, eq);
    const std::string value = parts[i].substr(eq + 1);
    if (key == "N") req.side = parse_size(key, value);
    else if (key == "h") req.hidden = parse_size(key, value);
    else if (key == "seed") req.seed = parse_size(key, value);
    else throw std::invalid_argument("--gen: unknown key '" + key + "'");
  }
  if (req.side == 0) throw std::invalid_argument("--gen: N=<side> is required");
  if (req.hidden == 0) throw std::invalid_argument("--gen: h=<hidden> is required");
  if (req.spec.kind != SyntheticKind::dc_only && !req.seed) {
    throw std::invalid_argument("--gen: seed=<n> is required for random kinds");
  }
  return req;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliHooks& hooks) {
  CLI::App app{"Frequency-domain vision token compression toolkit", "ffc"};
  app.require_subcommand(1);

  CompressArgs compress_args;
  auto* compress = app.add_subcommand("compress", "Compress an N^2-token feature file to C^2 tokens");
  compress->add_option("--input", compress_args.input, "Input tensor file")->required();
  compress->add_option("--C", compress_args.side, "Retained grid side")->required();
  compress->add_flag("--rescale", compress_args.rescale, "Multiply output by C/N (mean preserving)");
  compress->add_option("--output", compress_args.output, "Output tensor file")->required();
  compress->add_flag("--json", compress_args.json, "Print the report as JSON");

  SourceArgs spectrum_src;
  std::string spectrum_out;
  auto* spectrum = app.add_subcommand("spectrum", "Write the log10 mean-|DCT| spectrum as CSV");
  spectrum->add_option("--input", spectrum_src.input, "Input tensor file");
  spectrum->add_option("--gen", spectrum_src.gen, "Synthetic source, e.g. ar1:0.9,N=24,h=256,seed=7");
  spectrum->add_option("--output", spectrum_out, "CSV path")->required();

  SourceArgs stats_src;
  std::vector<std::size_t> stats_sides;
  auto* stats = app.add_subcommand("stats", "Low-frequency corner energy fractions");
  stats->add_option("--input", stats_src.input, "Input tensor file");
  stats->add_option("--gen", stats_src.gen, "Synthetic source");
  stats->add_option("--C", stats_sides, "Corner sides (comma list); default N/2")->delimiter(',');

  std::string gen_spec, gen_out;
  bool gen_tokens = false;
  auto* gen = app.add_subcommand("gen", "Write a synthetic feature grid");
  gen->add_option("--gen", gen_spec, "Generator, e.g. iid,N=24,h=1024,seed=3")->required();
  gen->add_option("--output", gen_out, "Output tensor file")->required();
  gen->add_flag("--as-tokens", gen_tokens, "Write an N^2 x h token sequence instead of a grid");

  CostArgs cost_args;
  auto* cost = app.add_subcommand("cost", "Analytical FLOPs and KV-cache accounting");
  cost->add_option("--config", cost_args.config, "key=value config file (default: built-in LLaVA-v1.5-7B)");
  cost->add_option("--tokens", cost_args.tokens, "LLM-only prefill over this many tokens");
  cost->add_option("--C", cost_args.side, "Full pipeline with FFC to C^2 vision tokens");
  cost->add_option("--baseline-tokens", cost_args.baseline, "Baseline token count for reductions");
  cost->add_option("--text-tokens", cost_args.text_tokens, "Override text_tokens from the config");
  cost->add_flag("--table", cost_args.table, "Aligned human-readable table");

  std::vector<std::size_t> bench_sizes;
  std::size_t bench_repeats = 9;
  bool bench_strict = false;
  auto* bench = app.add_subcommand("bench", "Time naive vs FFT 1D DCT");
  bench->add_option("--sizes", bench_sizes, "Comma list of lengths")->delimiter(',')->required();
  bench->add_option("--repeats", bench_repeats, "Timed batches per size (median)");
  bench->add_flag("--strict", bench_strict, "Fail (exit 3) if FFT is not faster at the largest N >= 64");

  std::size_t verify_max_n = 64;
  std::size_t verify_trials = 20;
  std::uint64_t verify_seed = 1;
  auto* verify = app.add_subcommand("verify", "Run the oracle, roundtrip, Parseval and identity suites");
  verify->add_option("--max-N", verify_max_n, "Largest transform length");
  verify->add_option("--trials", verify_trials, "Random inputs per length");
  verify->add_option("--seed", verify_seed, "Base seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  if (*compress) return cmd_compress(compress_args, out, err);
  if (*spectrum) return cmd_spectrum(spectrum_src, spectrum_out, out, err);
  if (*stats) return cmd_stats(stats_src, stats_sides, out, err);
  if (*gen) return cmd_gen(gen_spec, gen_out, gen_tokens, out, err);
  if (*cost) return cmd_cost(cost_args, out, err);
  if (*bench) return cmd_bench(bench_sizes, bench_repeats, bench_strict, out, err);
  if (*verify) return cmd_verify(verify_max_n, verify_trials, verify_seed, hooks, out, err);
  return kUsage;
}

}  // namespace ffc::cli
