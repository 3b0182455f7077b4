#include "ffc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ffc/dct.hpp"
#include "ffc/ffc.hpp"
#include "ffc/random.hpp"
#include "ffc/tensor_io.hpp"

namespace ffc {

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  const CounterRng rng(seed * 0x100000001B3ULL + stream);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 2.0 * rng.uniform(i) - 1.0;
  return v;
}

double l2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

class Tracker {
 public:
  Tracker(std::string name, double tolerance) : tolerance_(tolerance) { result_.name = std::move(name); }

  void record(double error, std::size_t n, std::uint64_t seed) {
    ++result_.cases;
    if (!(error <= tolerance_)) result_.passed = false;
    if (result_.cases == 1 || std::isnan(error) || error > result_.worst_error) {
      result_.worst_error = error;
      result_.worst_n = n;
      result_.worst_seed = seed;
    }
  }

  SuiteResult result() const { return result_; }

 private:
  double tolerance_;
  SuiteResult result_;
};

void apply_perturb(const VerifyOptions& options, std::span<double> values) {
  if (options.perturb) options.perturb(values);
}

FeatureGrid random_grid(std::size_t n, std::size_t h, std::uint64_t seed, std::uint64_t stream) {
  return FeatureGrid(n, h, random_vector(n * n * h, seed, stream));
}

}  // namespace

double relative_error(std::span<const double> actual, std::span<const double> expected) {
  if (actual.size() != expected.size()) return INFINITY;
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    diff = std::max(diff, std::abs(actual[i] - expected[i]));
    if (std::isnan(actual[i])) diff = INFINITY;
    scale = std::max(scale, std::abs(expected[i]));
  }
  return diff / std::max(scale, 1e-300);
}

SuiteResult verify_oracle_equivalence(const VerifyOptions& options) {
  Tracker t("oracle_equiv", options.tolerance);
  for (std::size_t n = 1; n <= options.max_n; ++n) {
    const NaiveDct naive(n);
    const FftDct fast(n);
    std::vector<std::complex<double>> work(fast.workspace_size());
    std::vector<double> ref(n), got(n);
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
      const std::uint64_t seed = options.seed + trial;
      const auto x = random_vector(n, seed, n);

      naive.forward(x, ref);
      fast.forward(x, got, work);
      apply_perturb(options, got);
      t.record(relative_error(got, ref), n, seed);

      naive.inverse(x, ref);
      fast.inverse(x, got, work);
      apply_perturb(options, got);
      t.record(relative_error(got, ref), n, seed);
    }
  }
  return t.result();
}

SuiteResult verify_roundtrip(const VerifyOptions& options) {
  Tracker t("roundtrip", options.tolerance);
  for (std::size_t n = 1; n <= options.max_n; ++n) {
    const NaiveDct naive(n);
    const FftDct fast(n);
    std::vector<std::complex<double>> work(fast.workspace_size());
    std::vector<double> f(n), back(n);
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
      const std::uint64_t seed = options.seed + trial;
      const auto x = random_vector(n, seed, n);

      naive.forward(x, f);
      naive.inverse(f, back);
      t.record(relative_error(back, x), n, seed);

      fast.forward(x, f, work);
      apply_perturb(options, f);
      fast.inverse(f, back, work);
      t.record(relative_error(back, x), n, seed);
    }
  }
  for (std::size_t n = 1; n <= options.max_n_2d; ++n) {
    const std::uint64_t seed = options.seed;
    const auto g = random_grid(n, 2, seed, 1000 + n);
    auto f = dct2d(g, {.impl = DctImpl::fft});
    apply_perturb(options, f.values());
    const auto back = idct2d(f, {.impl = DctImpl::fft});
    t.record(relative_error(back.values(), g.values()), n, seed);
  }
  return t.result();
}

SuiteResult verify_parseval(const VerifyOptions& options) {
  Tracker t("parseval", options.tolerance);
  for (std::size_t n = 1; n <= options.max_n; ++n) {
    const FftDct fast(n);
    std::vector<std::complex<double>> work(fast.workspace_size());
    std::vector<double> f(n);
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
      const std::uint64_t seed = options.seed + trial;
      const auto x = random_vector(n, seed, n);
      fast.forward(x, f, work);
      apply_perturb(options, f);
      const double ex = l2(x);
      t.record(std::abs(l2(f) - ex) / std::max(ex, 1e-300), n, seed);
    }
  }
  for (std::size_t n = 1; n <= options.max_n_2d; ++n) {
    const std::uint64_t seed = options.seed;
    const auto g = random_grid(n, 2, seed, 2000 + n);
    auto f = dct2d(g);
    apply_perturb(options, f.values());
    // Per channel.
    for (std::size_t c = 0; c < 2; ++c) {
      double eg = 0.0, ef = 0.0;
      for (std::size_t i = 0; i < n * n; ++i) {
        eg += g.values()[i * 2 + c] * g.values()[i * 2 + c];
        ef += f.values()[i * 2 + c] * f.values()[i * 2 + c];
      }
      t.record(std::abs(std::sqrt(ef) - std::sqrt(eg)) / std::max(std::sqrt(eg), 1e-300), n, seed);
    }
  }
  return t.result();
}

SuiteResult verify_ffc_identity(const VerifyOptions& options) {
  Tracker t("ffc_identity", options.tolerance);
  const std::size_t top = std::min<std::size_t>(options.max_n, 24);
  const std::size_t trials = std::min<std::size_t>(options.trials, 20);
  for (std::size_t n = 1; n <= top; ++n) {
    for (std::size_t trial = 0; trial < trials; ++trial) {
      const std::uint64_t seed = options.seed + trial;
      const auto g = random_grid(n, 8, seed, 3000 + n);
      FfcConfig cfg{.input_side = n, .output_side = n};
      auto out = ffc_compress(g, cfg);
      apply_perturb(options, out.tokens.values());
      const auto in = flatten_grid(g);
      double worst = 0.0;
      for (std::size_t i = 0; i < in.values().size(); ++i) {
        worst = std::max(worst, std::abs(out.tokens.values()[i] - in.values()[i]));
      }
      t.record(worst, n, seed);
    }
  }
  return t.result();
}

SuiteResult verify_separability(const VerifyOptions& options) {
  Tracker t("separability", options.tolerance);
  for (std::size_t n = 1; n <= options.max_n_2d; ++n) {
    const std::uint64_t seed = options.seed;
    const auto g = random_grid(n, 3, seed, 4000 + n);
    auto rows_first = dct2d(g, {.impl = DctImpl::fft, .order = AxisOrder::rows_first});
    auto cols_first = dct2d(g, {.impl = DctImpl::fft, .order = AxisOrder::columns_first});
    const auto naive = dct2d(g, {.impl = DctImpl::naive, .execution = Execution::serial});
    apply_perturb(options, rows_first.values());
    apply_perturb(options, cols_first.values());
    t.record(relative_error(rows_first.values(), cols_first.values()), n, seed);
    t.record(relative_error(rows_first.values(), naive.values()), n, seed);
  }
  return t.result();
}

std::vector<SuiteResult> run_verification(const VerifyOptions& options) {
  return {verify_oracle_equivalence(options), verify_roundtrip(options), verify_parseval(options),
          verify_ffc_identity(options), verify_separability(options)};
}

std::string format_suite_line(const SuiteResult& r) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%s %s worst_error=%.3e N=%zu seed=%llu cases=%zu", r.name.c_str(),
                r.passed ? "PASS" : "FAIL", r.worst_error, r.worst_n,
                static_cast<unsigned long long>(r.worst_seed), r.cases);
  return buf;
}

}  // namespace ffc
