#include "ffc/dct.hpp"

#include <cmath>
#include <numbers>

#include "ffc/errors.hpp"

namespace ffc {

namespace {

// cos(pi * num / (2N)) with num reduced modulo 4N first.
double half_angle_cos(std::size_t num, std::size_t n) {
  const std::size_t period = 4 * n;
  return std::cos(std::numbers::pi * static_cast<double>(num % period) / (2.0 * static_cast<double>(n)));
}

void require_length(std::size_t expected, std::size_t in, std::size_t out) {
  if (in != expected || out != expected) throw ShapeError("DCT buffer length does not match plan size");
}

}  // namespace

NaiveDct::NaiveDct(std::size_t n) : n_(n), basis_(n * n) {
  if (n == 0) throw ShapeError("DCT length must be >= 1");
  // pi/N * m * (i + 1/2) == pi * m * (2i + 1) / 2N
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t i = 0; i < n; ++i) basis_[m * n + i] = half_angle_cos(m * (2 * i + 1), n);
  }
}

void NaiveDct::forward(std::span<const double> in, std::span<double> out, DctNorm norm) const {
  require_length(n_, in.size(), out.size());
  const double dc_scale = norm == DctNorm::orthonormal ? std::sqrt(1.0 / static_cast<double>(n_)) : 2.0;
  const double ac_scale = norm == DctNorm::orthonormal ? std::sqrt(2.0 / static_cast<double>(n_)) : 2.0;
  for (std::size_t m = 0; m < n_; ++m) {
    const double* row = &basis_[m * n_];
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) acc += in[i] * row[i];
    out[m] = (m == 0 ? dc_scale : ac_scale) * acc;
  }
}

void NaiveDct::inverse(std::span<const double> in, std::span<double> out, DctNorm norm) const {
  require_length(n_, in.size(), out.size());
  const auto nd = static_cast<double>(n_);
  // Unscaled inverse: x_i = (f_0 / 2 + sum_{k>0} f_k cos(..)) / N.
  const double dc_scale = norm == DctNorm::orthonormal ? std::sqrt(1.0 / nd) : 0.5 / nd;
  const double ac_scale = norm == DctNorm::orthonormal ? std::sqrt(2.0 / nd) : 1.0 / nd;
  for (std::size_t i = 0; i < n_; ++i) out[i] = 0.0;
  for (std::size_t k = 0; k < n_; ++k) {
    const double coeff = (k == 0 ? dc_scale : ac_scale) * in[k];
    const double* row = &basis_[k * n_];
    for (std::size_t i = 0; i < n_; ++i) out[i] += coeff * row[i];
  }
}

FftDct::FftDct(std::size_t n) : n_(n), fft_(n), cos_(n), sin_(n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = std::numbers::pi * static_cast<double>(k) / (2.0 * static_cast<double>(n));
    cos_[k] = std::cos(angle);
    sin_[k] = std::sin(angle);
  }
}

void FftDct::forward(std::span<const double> in, std::span<double> out,
                     std::span<std::complex<double>> work, DctNorm norm) const {
  require_length(n_, in.size(), out.size());
  if (work.size() < workspace_size()) throw ShapeError("DCT workspace too small");
  auto v = work.first(n_);
  auto fft_work = work.subspan(n_);

  // Evens ascending, then odds descending: x0, x2, ..., x5, x3, x1.
  const std::size_t evens = n_ - n_ / 2;
  for (std::size_t k = 0; k < evens; ++k) v[k] = in[2 * k];
  for (std::size_t k = evens; k < n_; ++k) v[k] = in[2 * (n_ - k) - 1];

  fft_.forward(v, fft_work);

  // Re(exp(-i pi k / 2N) * z_k); the trailing factor 2 and the normalization
  // fold into one scale per coefficient.
  const auto nd = static_cast<double>(n_);
  const double dc_scale = norm == DctNorm::orthonormal ? 2.0 / (2.0 * std::sqrt(nd)) : 2.0;
  const double ac_scale = norm == DctNorm::orthonormal ? 2.0 / (2.0 * std::sqrt(nd / 2.0)) : 2.0;
  for (std::size_t k = 0; k < n_; ++k) {
    const double rotated = v[k].real() * cos_[k] + v[k].imag() * sin_[k];
    out[k] = (k == 0 ? dc_scale : ac_scale) * rotated;
  }
}

void FftDct::inverse(std::span<const double> in, std::span<double> out,
                     std::span<std::complex<double>> work, DctNorm norm) const {
  require_length(n_, in.size(), out.size());
  if (work.size() < workspace_size()) throw ShapeError("DCT workspace too small");
  auto z = work.first(n_);
  auto fft_work = work.subspan(n_);

  const auto nd = static_cast<double>(n_);
  const double dc_scale = norm == DctNorm::orthonormal ? 2.0 * std::sqrt(nd) / 2.0 : 0.5;
  const double ac_scale = norm == DctNorm::orthonormal ? 2.0 * std::sqrt(nd / 2.0) / 2.0 : 0.5;

  // Real part X_k, imaginary part -X_{N-k} (zero at k = 0), rotated by
  // exp(+i pi k / 2N).
  for (std::size_t k = 0; k < n_; ++k) {
    const double re = (k == 0 ? dc_scale : ac_scale) * in[k];
    const double im = k == 0 ? 0.0 : -ac_scale * in[n_ - k];
    z[k] = {re * cos_[k] - im * sin_[k], re * sin_[k] + im * cos_[k]};
  }

  fft_.inverse(z, fft_work);

  // Undo the reorder: evens from the front, odds from the back.
  const std::size_t evens = n_ - n_ / 2;
  for (std::size_t k = 0; k < evens; ++k) out[2 * k] = z[k].real();
  for (std::size_t k = 0; k < n_ / 2; ++k) out[2 * k + 1] = z[n_ - 1 - k].real();
}

FrequencySequence dct1d_naive(std::span<const double> x, DctNorm norm) {
  require_finite(x, "DCT input");
  NaiveDct plan(x.size());
  FrequencySequence f{std::vector<double>(x.size()), norm};
  plan.forward(x, f.coeffs, norm);
  return f;
}

std::vector<double> idct1d_naive(const FrequencySequence& f) {
  require_finite(f.coeffs, "iDCT input");
  NaiveDct plan(f.coeffs.size());
  std::vector<double> x(f.coeffs.size());
  plan.inverse(f.coeffs, x, f.norm);
  return x;
}

FrequencySequence dct1d_fft(std::span<const double> x, DctNorm norm) {
  require_finite(x, "DCT input");
  FftDct plan(x.size());
  std::vector<std::complex<double>> work(plan.workspace_size());
  FrequencySequence f{std::vector<double>(x.size()), norm};
  plan.forward(x, f.coeffs, work, norm);
  return f;
}

std::vector<double> idct1d_fft(const FrequencySequence& f) {
  require_finite(f.coeffs, "iDCT input");
  FftDct plan(f.coeffs.size());
  std::vector<std::complex<double>> work(plan.workspace_size());
  std::vector<double> x(f.coeffs.size());
  plan.inverse(f.coeffs, x, work, f.norm);
  return x;
}

}  // namespace ffc
