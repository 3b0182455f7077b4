#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ffc {

/// Flattened L x h sequence of vision tokens, token-major.
///
/// Values are held in binary64; on disk they are binary32 (see tensor_io.hpp).
class TokenSequence {
 public:
  TokenSequence() = default;
  TokenSequence(std::size_t length, std::size_t hidden);
  TokenSequence(std::size_t length, std::size_t hidden, std::vector<double> data);

  std::size_t length() const { return length_; }
  std::size_t hidden() const { return hidden_; }

  double& at(std::size_t token, std::size_t channel) { return data_[token * hidden_ + channel]; }
  double at(std::size_t token, std::size_t channel) const { return data_[token * hidden_ + channel]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const TokenSequence&) const = default;

 private:
  std::size_t length_ = 0;
  std::size_t hidden_ = 0;
  std::vector<double> data_;
};

/// N x N x h spatial grid, laid out (row, column, channel) with the channel
/// index fastest. Element (p, q, :) is token p * N + q of the sequence it was
/// reshaped from.
class FeatureGrid {
 public:
  FeatureGrid() = default;
  FeatureGrid(std::size_t side, std::size_t hidden);
  FeatureGrid(std::size_t side, std::size_t hidden, std::vector<double> data);

  std::size_t side() const { return side_; }
  std::size_t hidden() const { return hidden_; }

  double& at(std::size_t row, std::size_t col, std::size_t channel) {
    return data_[(row * side_ + col) * hidden_ + channel];
  }
  double at(std::size_t row, std::size_t col, std::size_t channel) const {
    return data_[(row * side_ + col) * hidden_ + channel];
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const FeatureGrid&) const = default;

 private:
  std::size_t side_ = 0;
  std::size_t hidden_ = 0;
  std::vector<double> data_;
};

/// Frequency-domain counterpart of FeatureGrid. Same (row, column, channel)
/// layout; extents may be rectangular after slicing.
class FrequencyGrid {
 public:
  FrequencyGrid() = default;
  FrequencyGrid(std::size_t rows, std::size_t cols, std::size_t hidden);
  FrequencyGrid(std::size_t rows, std::size_t cols, std::size_t hidden, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t hidden() const { return hidden_; }

  double& at(std::size_t m, std::size_t n, std::size_t channel) {
    return data_[(m * cols_ + n) * hidden_ + channel];
  }
  double at(std::size_t m, std::size_t n, std::size_t channel) const {
    return data_[(m * cols_ + n) * hidden_ + channel];
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const FrequencyGrid&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t hidden_ = 0;
  std::vector<double> data_;
};

/// Throws ValidationError if any value is NaN or infinite.
void require_finite(std::span<const double> values, const char* what);

}  // namespace ffc
