#include "ffc/fft.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "ffc/errors.hpp"

namespace ffc {

namespace {

using cd = std::complex<double>;

// Plain complex product. std::complex's operator* guards against inf/nan
// and, without -ffast-math, compiles to a libcall on every butterfly.
inline cd mul(cd a, cd b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// -i * z
inline cd rot(cd z) { return {z.imag(), -z.real()}; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// exp(-2 pi i k / n) with k reduced first, so large k loses no precision.
cd unit_root(std::size_t k, std::size_t n) {
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(k % n) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

// Radices 4, 2, 3, 5, 7 in that order; empty if n has another prime factor.
std::vector<std::size_t> small_factors(std::size_t n) {
  std::vector<std::size_t> out;
  while (n % 4 == 0) out.push_back(4), n /= 4;
  for (std::size_t p : {2u, 3u, 5u, 7u}) {
    while (n % p == 0) out.push_back(p), n /= p;
  }
  if (n != 1) out.clear();
  return out;
}

void leaf_order(std::size_t n, const std::vector<std::size_t>& factors, std::size_t level, std::size_t base,
                std::size_t stride, std::vector<std::size_t>& out) {
  if (n == 1) {
    out.push_back(base);
    return;
  }
  const std::size_t p = factors[level];
  for (std::size_t r = 0; r < p; ++r) leaf_order(n / p, factors, level + 1, base + r * stride, stride * p, out);
}

}  // namespace

void FftPlan::MixedRadix::init(std::size_t len, std::vector<std::size_t> radices) {
  n = len;
  factors = std::move(radices);
  order.clear();
  order.reserve(n);
  leaf_order(n, factors, 0, 0, 1, order);
  roots.resize(n);
  for (std::size_t j = 0; j < n; ++j) roots[j] = unit_root(j, n);
}

void FftPlan::MixedRadix::run(std::span<const cd> src, std::span<cd> dst) const {
  for (std::size_t i = 0; i < n; ++i) dst[i] = src[order[i]];

  // Combine p sub-transforms of length m into one of length p*m, innermost
  // split first: X[k + q m] = sum_r W_p^{rq} (W_{pm}^{rk} Y_r[k]).
  std::size_t m = 1;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    const std::size_t p = *it;
    const std::size_t span = p * m;
    const std::size_t step = n / span;
    for (std::size_t base = 0; base < n; base += span) {
      cd* block = &dst[base];
      for (std::size_t k = 0; k < m; ++k) {
        if (p == 2) {
          const cd a = block[k];
          const cd b = k == 0 ? block[k + m] : mul(block[k + m], roots[k * step]);
          block[k] = a + b;
          block[k + m] = a - b;
        } else if (p == 4) {
          const cd a = block[k];
          const cd b = k == 0 ? block[k + m] : mul(block[k + m], roots[k * step]);
          const cd c = k == 0 ? block[k + 2 * m] : mul(block[k + 2 * m], roots[2 * k * step]);
          const cd d = k == 0 ? block[k + 3 * m] : mul(block[k + 3 * m], roots[3 * k * step]);
          const cd s0 = a + c, s1 = a - c, s2 = b + d, s3 = rot(b - d);
          block[k] = s0 + s2;
          block[k + m] = s1 + s3;
          block[k + 2 * m] = s0 - s2;
          block[k + 3 * m] = s1 - s3;
        } else {
          std::array<cd, 7> t;
          t[0] = block[k];
          for (std::size_t r = 1; r < p; ++r) t[r] = mul(block[k + r * m], roots[r * k * step]);
          const std::size_t unit = n / p;
          for (std::size_t q = 0; q < p; ++q) {
            cd acc = t[0];
            for (std::size_t r = 1; r < p; ++r) acc += mul(t[r], roots[((r * q) % p) * unit]);
            block[k + q * m] = acc;
          }
        }
      }
    }
    m = span;
  }
}

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw ShapeError("FFT length must be >= 1");

  auto factors = small_factors(n);
  if (n == 1 || !factors.empty()) {
    kernel_.init(n, std::move(factors));
    return;
  }

  bluestein_ = true;
  const std::size_t len = next_power_of_two(2 * n - 1);
  kernel_.init(len, small_factors(len));

  // k^2 mod 2n keeps the chirp argument small: exp(-i pi k^2 / n) has period 2n in k^2.
  chirp_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k2 = (k * k) % (2 * n);
    chirp_[k] = unit_root(k2, 2 * n);
  }
  std::vector<cd> padded(len, {0.0, 0.0});
  padded[0] = std::conj(chirp_[0]);
  for (std::size_t k = 1; k < n; ++k) {
    padded[k] = std::conj(chirp_[k]);
    padded[len - k] = std::conj(chirp_[k]);
  }
  chirp_spectrum_.resize(len);
  kernel_.run(padded, chirp_spectrum_);
}

void FftPlan::bluestein(std::span<cd> data, std::span<cd> work) const {
  const std::size_t len = kernel_.n;
  const std::span<cd> a = work.subspan(0, len);
  const std::span<cd> b = work.subspan(len, len);
  for (std::size_t k = 0; k < n_; ++k) a[k] = mul(data[k], chirp_[k]);
  for (std::size_t k = n_; k < len; ++k) a[k] = {0.0, 0.0};

  kernel_.run(a, b);
  // Pointwise product, conjugated so the next forward pass acts as an inverse.
  for (std::size_t k = 0; k < len; ++k) b[k] = std::conj(mul(b[k], chirp_spectrum_[k]));
  kernel_.run(b, a);
  const double scale = 1.0 / static_cast<double>(len);
  for (std::size_t k = 0; k < n_; ++k) data[k] = mul(std::conj(a[k]) * scale, chirp_[k]);
}

void FftPlan::forward(std::span<cd> data, std::span<cd> work) const {
  if (data.size() != n_) throw ShapeError("FFT input length does not match plan");
  if (work.size() < workspace_size()) throw ShapeError("FFT workspace too small");
  if (bluestein_) {
    bluestein(data, work);
  } else {
    const std::span<cd> copy = work.subspan(0, n_);
    std::copy(data.begin(), data.end(), copy.begin());
    kernel_.run(copy, data);
  }
}

void FftPlan::inverse(std::span<cd> data, std::span<cd> work) const {
  for (auto& v : data) v = std::conj(v);
  forward(data, work);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : data) v = std::conj(v) * scale;
}

void FftPlan::forward(std::span<cd> data) const {
  std::vector<cd> work(workspace_size());
  forward(data, work);
}

void FftPlan::inverse(std::span<cd> data) const {
  std::vector<cd> work(workspace_size());
  inverse(data, work);
}

}  // namespace ffc
