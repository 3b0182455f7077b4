#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ffc {

/// Property suites run in-process by `ffc verify` and the acceptance tests.
struct VerifyOptions {
  std::size_t max_n = 64;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  /// Largest N used by the 2D suites (they cost O(N^3) per naive transform).
  std::size_t max_n_2d = 32;
  /// Test hook: applied to every FFT-path output before comparison. Lets the
  /// negative-control test prove that a wrong kernel is caught.
  std::function<void(std::span<double>)> perturb;
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  double worst_error = 0.0;
  std::size_t worst_n = 0;
  std::uint64_t worst_seed = 0;
  std::size_t cases = 0;
};

/// oracle_equiv: FFT-path DCT/iDCT vs the direct O(N^2) sums, N = 1..max_n.
SuiteResult verify_oracle_equivalence(const VerifyOptions& options);
/// roundtrip: idct(dct(x)) == x, both impls, 1D up to max_n and 2D up to max_n_2d.
SuiteResult verify_roundtrip(const VerifyOptions& options);
/// parseval: ||dct(x)|| == ||x||, 1D and 2D.
SuiteResult verify_parseval(const VerifyOptions& options);
/// ffc_identity: compressing with C == N reproduces the input per element.
SuiteResult verify_ffc_identity(const VerifyOptions& options);
/// separability: rows-first == columns-first == naive 2D.
SuiteResult verify_separability(const VerifyOptions& options);

std::vector<SuiteResult> run_verification(const VerifyOptions& options);

/// `oracle_equiv PASS worst_error=1.2e-15 N=37 seed=4 cases=1280`
std::string format_suite_line(const SuiteResult& result);

/// max |a - b| / max(max |b|, tiny). The norm-relative error used by every suite.
double relative_error(std::span<const double> actual, std::span<const double> expected);

}  // namespace ffc
