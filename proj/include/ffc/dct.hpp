#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ffc/fft.hpp"
#include "ffc/tensor.hpp"

namespace ffc {

/// Scaling of the type-II DCT.
///
/// `orthonormal`: f_m = a_m * sum_i x_i cos(pi/N * m * (i + 1/2)) with
/// a_0 = sqrt(1/N), a_m = sqrt(2/N). Energy preserving; used everywhere in
/// the compressor.
///
/// `none`: f_m = 2 * sum_i x_i cos(...), the unscaled convention most
/// external DCT references use. Kept for cross-checking only.
enum class DctNorm { orthonormal, none };

/// Which algorithm evaluates a transform.
enum class DctImpl { naive, fft };

struct FrequencySequence {
  std::vector<double> coeffs;
  DctNorm norm = DctNorm::orthonormal;
};

/// Direct O(N^2) evaluation against a precomputed N x N cosine basis.
/// This is the reference path every fast kernel is tested against.
class NaiveDct {
 public:
  explicit NaiveDct(std::size_t n);

  std::size_t size() const { return n_; }

  void forward(std::span<const double> in, std::span<double> out, DctNorm norm = DctNorm::orthonormal) const;
  void inverse(std::span<const double> in, std::span<double> out, DctNorm norm = DctNorm::orthonormal) const;

 private:
  std::size_t n_;
  std::vector<double> basis_;  // basis_[m * n + i] = cos(pi/N * m * (i + 1/2))
};

/// O(N log N) DCT-II / inverse through one length-N complex FFT.
///
/// Forward: even/odd reorder (evens ascending, odds descending), FFT, then
/// rotate by exp(-i pi k / 2N) and keep the real part. Inverse runs the same
/// steps backwards and de-interleaves. Works for every N >= 1.
class FftDct {
 public:
  explicit FftDct(std::size_t n);

  std::size_t size() const { return n_; }

  /// Complex scratch values needed per call.
  std::size_t workspace_size() const { return n_ + fft_.workspace_size(); }

  void forward(std::span<const double> in, std::span<double> out, std::span<std::complex<double>> work,
               DctNorm norm = DctNorm::orthonormal) const;
  void inverse(std::span<const double> in, std::span<double> out, std::span<std::complex<double>> work,
               DctNorm norm = DctNorm::orthonormal) const;

 private:
  std::size_t n_;
  FftPlan fft_;
  std::vector<double> cos_;  // cos(pi k / 2N)
  std::vector<double> sin_;  // sin(pi k / 2N)
};

FrequencySequence dct1d_naive(std::span<const double> x, DctNorm norm = DctNorm::orthonormal);
std::vector<double> idct1d_naive(const FrequencySequence& f);

FrequencySequence dct1d_fft(std::span<const double> x, DctNorm norm = DctNorm::orthonormal);
std::vector<double> idct1d_fft(const FrequencySequence& f);

/// Serial or OpenMP-parallel (over hidden channels) execution of 2D kernels.
/// Both produce bitwise-identical results.
enum class Execution { serial, parallel };

/// Order of the two separable passes. `rows_first` transforms along each
/// row (the column index) first, then along each column.
enum class AxisOrder { rows_first, columns_first };

struct TransformOptions {
  DctImpl impl = DctImpl::fft;
  Execution execution = Execution::parallel;
  AxisOrder order = AxisOrder::rows_first;
};

/// Orthonormal 2D DCT-II applied independently to every hidden channel.
FrequencyGrid dct2d(const FeatureGrid& grid, const TransformOptions& options = {});

/// Orthonormal 2D inverse DCT. Requires a square frequency grid.
FeatureGrid idct2d(const FrequencyGrid& fgrid, const TransformOptions& options = {});

}  // namespace ffc
