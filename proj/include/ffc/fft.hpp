#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ffc {

/// Complex FFT plan for a fixed length n >= 1.
///
/// Lengths whose prime factors are all in {2, 3, 5, 7} run an iterative
/// mixed-radix Cooley-Tukey kernel (radix 4 where possible). Any other length
/// goes through Bluestein's chirp-z reformulation on a padded power-of-two
/// kernel. A plan is immutable after construction, so one plan may be shared
/// by any number of threads as long as each brings its own workspace.
///
/// Sign convention: forward computes X_k = sum_j x_j exp(-2 pi i j k / n);
/// inverse applies the conjugate kernel and divides by n.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }
  bool uses_bluestein() const { return bluestein_; }

  /// Scratch length (in complex values) required by forward/inverse.
  std::size_t workspace_size() const { return bluestein_ ? 2 * kernel_.n : n_; }

  void forward(std::span<std::complex<double>> data, std::span<std::complex<double>> work) const;
  void inverse(std::span<std::complex<double>> data, std::span<std::complex<double>> work) const;

  /// Convenience overloads that allocate their own workspace.
  void forward(std::span<std::complex<double>> data) const;
  void inverse(std::span<std::complex<double>> data) const;

 private:
  struct MixedRadix {
    std::size_t n = 0;
    std::vector<std::size_t> factors;          // outermost split first
    std::vector<std::size_t> order;            // input index feeding each leaf slot
    std::vector<std::complex<double>> roots;   // exp(-2 pi i j / n)

    void init(std::size_t len, std::vector<std::size_t> radices);
    /// dst = DFT(src); src and dst must not overlap.
    void run(std::span<const std::complex<double>> src, std::span<std::complex<double>> dst) const;
  };

  void bluestein(std::span<std::complex<double>> data, std::span<std::complex<double>> work) const;

  std::size_t n_;
  bool bluestein_ = false;
  MixedRadix kernel_;  // length n_, or the padded Bluestein length

  // Bluestein: chirp w_k = exp(-i pi k^2 / n) and the FFT of the padded
  // conjugate chirp.
  std::vector<std::complex<double>> chirp_;
  std::vector<std::complex<double>> chirp_spectrum_;
};

}  // namespace ffc
