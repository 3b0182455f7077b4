#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "ffc/tensor.hpp"

namespace ffc {

/// Bins whose mean magnitude is zero (or at round-off level, see
/// compute_spectrum) are clamped to this value before log10.
inline constexpr double kSpectrumClamp = 1e-30;
inline constexpr double kSpectrumFloor = -30.0;

/// log10 of the mean |coefficient| over hidden channels, per frequency bin.
struct SpectrumMap {
  std::size_t side = 0;
  std::vector<double> values;  // row-major, values[m * side + n]

  double at(std::size_t m, std::size_t n) const { return values[m * side + n]; }
};

struct CompactionStats {
  std::vector<std::size_t> sides;
  std::vector<double> corner_energy_fraction;  // parallel to `sides`
  double flatness = 0.0;  // coefficient of variation of the pre-log bin means
};

/// Orthonormal 2D DCT (fft path), |.|, mean over channels, log10.
///
/// A bin mean smaller than 1e-13 of the largest bin mean is treated as an
/// exact zero: FFT round-off leaves ~1e-16 residue in bins that are
/// analytically empty, and no real spectrum spans thirteen decades.
SpectrumMap compute_spectrum(const FeatureGrid& grid);

/// Mean absolute coefficient per bin, before the log. Row-major.
std::vector<double> mean_abs_coefficients(const FeatureGrid& grid);

CompactionStats compaction_stats(const FeatureGrid& grid, const std::vector<std::size_t>& sides);

enum class SyntheticKind { iid_gaussian, ar1, dc_only };

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::iid_gaussian;
  double parameter = 0.0;  // rho for ar1, value for dc_only
};

/// Deterministic synthetic feature grids.
///
/// iid_gaussian: independent standard normals.
/// ar1(rho): unit-variance separable first-order autoregression, applied
///   along columns then rows, so cov((p,q),(p',q')) = rho^|p-p'| rho^|q-q'|.
///   Channels are independent.
/// dc_only(v): every value equals v.
FeatureGrid generate_synthetic(const SyntheticSpec& spec, std::size_t side, std::size_t hidden,
                               std::uint64_t seed);

/// Header `m,n,log10_mean_abs`, one row per bin in row-major order, values
/// printed with 9 significant digits.
void export_spectrum_csv(const SpectrumMap& map, const std::filesystem::path& path);

SpectrumMap read_spectrum_csv(const std::filesystem::path& path);

}  // namespace ffc
