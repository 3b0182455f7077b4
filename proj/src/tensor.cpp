#include "ffc/tensor.hpp"

#include <cmath>
#include <string>

#include "ffc/errors.hpp"

namespace ffc {

namespace {

void require_extent(std::size_t value, const char* name) {
  if (value == 0) throw ShapeError(std::string(name) + " must be >= 1");
}

void require_size(std::size_t expected, std::size_t actual) {
  if (expected != actual) {
    throw ShapeError("data holds " + std::to_string(actual) + " values, extents require " +
                     std::to_string(expected));
  }
}

}  // namespace

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError(std::string(what) + " holds a non-finite value at flat index " +
                            std::to_string(i));
    }
  }
}

TokenSequence::TokenSequence(std::size_t length, std::size_t hidden)
    : length_(length), hidden_(hidden) {
  require_extent(length, "token count");
  require_extent(hidden, "hidden size");
  data_.assign(length * hidden, 0.0);
}

TokenSequence::TokenSequence(std::size_t length, std::size_t hidden, std::vector<double> data)
    : length_(length), hidden_(hidden), data_(std::move(data)) {
  require_extent(length, "token count");
  require_extent(hidden, "hidden size");
  require_size(length * hidden, data_.size());
}

FeatureGrid::FeatureGrid(std::size_t side, std::size_t hidden) : side_(side), hidden_(hidden) {
  require_extent(side, "grid side");
  require_extent(hidden, "hidden size");
  data_.assign(side * side * hidden, 0.0);
}

FeatureGrid::FeatureGrid(std::size_t side, std::size_t hidden, std::vector<double> data)
    : side_(side), hidden_(hidden), data_(std::move(data)) {
  require_extent(side, "grid side");
  require_extent(hidden, "hidden size");
  require_size(side * side * hidden, data_.size());
}

FrequencyGrid::FrequencyGrid(std::size_t rows, std::size_t cols, std::size_t hidden)
    : rows_(rows), cols_(cols), hidden_(hidden) {
  require_extent(rows, "frequency rows");
  require_extent(cols, "frequency cols");
  require_extent(hidden, "hidden size");
  data_.assign(rows * cols * hidden, 0.0);
}

FrequencyGrid::FrequencyGrid(std::size_t rows, std::size_t cols, std::size_t hidden,
                             std::vector<double> data)
    : rows_(rows), cols_(cols), hidden_(hidden), data_(std::move(data)) {
  require_extent(rows, "frequency rows");
  require_extent(cols, "frequency cols");
  require_extent(hidden, "hidden size");
  require_size(rows * cols * hidden, data_.size());
}

}  // namespace ffc
