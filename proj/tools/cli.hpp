#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ffc/spectrum.hpp"

namespace ffc::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kVerifyFailed = 3 };

/// In-process overrides used by the test suite; the shipped binary passes none.
struct CliHooks {
  std::function<void(std::span<double>)> verify_perturb;
};

/// `--gen` argument, e.g. `ar1:0.9,N=24,h=256,seed=7` or `dc:1,N=4,h=2`.
struct GeneratorRequest {
  SyntheticSpec spec;
  std::size_t side = 0;
  std::size_t hidden = 0;
  std::optional<std::uint64_t> seed;
};

/// Throws std::invalid_argument on grammar errors. Random kinds (iid, ar1)
/// require a seed.
GeneratorRequest parse_generator(const std::string& text);

/// Runs one CLI invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliHooks& hooks = {});

}  // namespace ffc::cli
