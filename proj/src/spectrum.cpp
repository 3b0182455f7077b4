#include "ffc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ffc/dct.hpp"
#include "ffc/errors.hpp"
#include "ffc/ffc.hpp"
#include "ffc/random.hpp"

namespace ffc {

namespace {

constexpr double kRelativeZero = 1e-13;

}  // namespace

std::vector<double> mean_abs_coefficients(const FeatureGrid& grid) {
  const FrequencyGrid f = dct2d(grid);
  const std::size_t n = grid.side();
  const std::size_t h = grid.hidden();
  std::vector<double> means(n * n, 0.0);
  for (std::size_t bin = 0; bin < n * n; ++bin) {
    double acc = 0.0;
    for (std::size_t c = 0; c < h; ++c) acc += std::abs(f.values()[bin * h + c]);
    means[bin] = acc / static_cast<double>(h);
  }
  return means;
}

SpectrumMap compute_spectrum(const FeatureGrid& grid) {
  const auto means = mean_abs_coefficients(grid);
  const double peak = *std::max_element(means.begin(), means.end());
  SpectrumMap map{grid.side(), std::vector<double>(means.size())};
  for (std::size_t i = 0; i < means.size(); ++i) {
    const bool empty = means[i] <= kRelativeZero * peak || means[i] < kSpectrumClamp;
    map.values[i] = empty ? kSpectrumFloor : std::log10(means[i]);
  }
  return map;
}

CompactionStats compaction_stats(const FeatureGrid& grid, const std::vector<std::size_t>& sides) {
  for (auto c : sides) {
    if (c < 1 || c > grid.side()) {
      throw ShapeError("corner side " + std::to_string(c) + " outside [1, " + std::to_string(grid.side()) +
                       "]");
    }
  }
  const FrequencyGrid f = dct2d(grid);
  CompactionStats stats;
  stats.sides = sides;
  for (auto c : sides) stats.corner_energy_fraction.push_back(corner_energy_fraction(f, c));

  const std::size_t bins = grid.side() * grid.side();
  const std::size_t h = grid.hidden();
  std::vector<double> means(bins, 0.0);
  for (std::size_t bin = 0; bin < bins; ++bin) {
    for (std::size_t c = 0; c < h; ++c) means[bin] += std::abs(f.values()[bin * h + c]);
    means[bin] /= static_cast<double>(h);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= static_cast<double>(bins);
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= static_cast<double>(bins);
  stats.flatness = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
  return stats;
}

FeatureGrid generate_synthetic(const SyntheticSpec& spec, std::size_t side, std::size_t hidden,
                               std::uint64_t seed) {
  if (side < 1 || hidden < 1) throw ParameterError("synthetic grid needs N >= 1 and h >= 1");
  FeatureGrid grid(side, hidden);
  auto values = grid.values();

  switch (spec.kind) {
    case SyntheticKind::dc_only:
      if (!std::isfinite(spec.parameter)) throw ParameterError("dc value must be finite");
      std::fill(values.begin(), values.end(), spec.parameter);
      return grid;
    case SyntheticKind::iid_gaussian: {
      const CounterRng rng(seed);
      for (std::size_t i = 0; i < values.size(); ++i) values[i] = rng.normal(i);
      return grid;
    }
    case SyntheticKind::ar1:
      break;
  }

  const double rho = spec.parameter;
  if (!(rho >= 0.0 && rho < 1.0)) throw ParameterError("ar1 rho must satisfy 0 <= rho < 1");
  const double innovation = std::sqrt(1.0 - rho * rho);
  const CounterRng rng(seed);
  const auto channels = static_cast<std::ptrdiff_t>(hidden);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ch = 0; ch < channels; ++ch) {
    const auto c = static_cast<std::size_t>(ch);
    for (std::size_t p = 0; p < side; ++p) {
      for (std::size_t q = 0; q < side; ++q) {
        const double w = rng.normal((p * side + q) * hidden + c);
        grid.at(p, q, c) = q == 0 ? w : rho * grid.at(p, q - 1, c) + innovation * w;
      }
    }
    for (std::size_t p = 1; p < side; ++p) {
      for (std::size_t q = 0; q < side; ++q) {
        grid.at(p, q, c) = rho * grid.at(p - 1, q, c) + innovation * grid.at(p, q, c);
      }
    }
  }
  return grid;
}

void export_spectrum_csv(const SpectrumMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw PathError("cannot open " + path.string() + " for writing");
  out << "m,n,log10_mean_abs\n";
  char buf[64];
  for (std::size_t m = 0; m < map.side; ++m) {
    for (std::size_t n = 0; n < map.side; ++n) {
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.9g\n", m, n, map.at(m, n));
      out << buf;
    }
  }
  if (!out) throw PathError("write to " + path.string() + " failed");
}

SpectrumMap read_spectrum_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PathError("cannot open " + path.string() + " for reading");
  std::string line;
  if (!std::getline(in, line) || line != "m,n,log10_mean_abs") {
    throw FormatError("spectrum CSV header must be m,n,log10_mean_abs");
  }
  std::vector<double> values;
  std::size_t max_index = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::size_t m = 0, n = 0;
    char comma1 = 0, comma2 = 0;
    double v = 0.0;
    if (!(row >> m >> comma1 >> n >> comma2 >> v) || comma1 != ',' || comma2 != ',') {
      throw FormatError("malformed spectrum CSV row: " + line);
    }
    max_index = std::max({max_index, m, n});
    values.push_back(v);
  }
  const std::size_t side = max_index + 1;
  if (values.size() != side * side) throw FormatError("spectrum CSV is not a full square of bins");
  return {side, std::move(values)};
}

}  // namespace ffc
