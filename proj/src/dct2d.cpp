#include <algorithm>
#include <optional>

#include "ffc/dct.hpp"
#include "ffc/errors.hpp"

namespace ffc {

namespace {

enum class Direction { forward, inverse };

// Applies a 1D transform of length `len` to every contiguous row of a
// row-major block, using whichever implementation the options select.
class RowTransformer {
 public:
  RowTransformer(std::size_t len, DctImpl impl) {
    if (impl == DctImpl::naive) {
      naive_.emplace(len);
    } else {
      fast_.emplace(len);
    }
  }

  std::size_t workspace_size() const { return fast_ ? fast_->workspace_size() : 0; }

  void apply(Direction dir, const double* in, double* out, std::size_t rows, std::size_t len,
             std::span<std::complex<double>> work) const {
    for (std::size_t r = 0; r < rows; ++r) {
      std::span<const double> src(in + r * len, len);
      std::span<double> dst(out + r * len, len);
      if (naive_) {
        dir == Direction::forward ? naive_->forward(src, dst) : naive_->inverse(src, dst);
      } else {
        dir == Direction::forward ? fast_->forward(src, dst, work) : fast_->inverse(src, dst, work);
      }
    }
  }

 private:
  std::optional<NaiveDct> naive_;
  std::optional<FftDct> fast_;
};

void transpose(const double* in, double* out, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out[c * rows + r] = in[r * cols + c];
  }
}

// Separable 2D transform over every channel of a (rows, cols, hidden) block.
// Each channel is gathered into a contiguous rows x cols slab, transformed
// along its rows and columns, and scattered back. Channels are independent,
// which is where the OpenMP loop splits the work.
void transform_channels(Direction dir, std::span<const double> in, std::span<double> out,
                        std::size_t rows, std::size_t cols, std::size_t hidden,
                        const TransformOptions& options) {
  const RowTransformer along_rows(cols, options.impl);
  const RowTransformer along_cols(rows, options.impl);
  const std::size_t slab = rows * cols;
  const std::size_t work_len = std::max(along_rows.workspace_size(), along_cols.workspace_size());
  const auto channels = static_cast<std::ptrdiff_t>(hidden);
  const bool parallel = options.execution == Execution::parallel && options.impl == DctImpl::fft;

#pragma omp parallel if (parallel)
  {
    std::vector<double> a(slab);
    std::vector<double> b(slab);
    std::vector<std::complex<double>> work(work_len);

#pragma omp for schedule(static)
    for (std::ptrdiff_t ch = 0; ch < channels; ++ch) {
      const auto c = static_cast<std::size_t>(ch);
      for (std::size_t i = 0; i < slab; ++i) a[i] = in[i * hidden + c];

      if (options.order == AxisOrder::rows_first) {
        along_rows.apply(dir, a.data(), b.data(), rows, cols, work);
        transpose(b.data(), a.data(), rows, cols);
        along_cols.apply(dir, a.data(), b.data(), cols, rows, work);
        transpose(b.data(), a.data(), cols, rows);
      } else {
        transpose(a.data(), b.data(), rows, cols);
        along_cols.apply(dir, b.data(), a.data(), cols, rows, work);
        transpose(a.data(), b.data(), cols, rows);
        along_rows.apply(dir, b.data(), a.data(), rows, cols, work);
      }

      for (std::size_t i = 0; i < slab; ++i) out[i * hidden + c] = a[i];
    }
  }
}

}  // namespace

FrequencyGrid dct2d(const FeatureGrid& grid, const TransformOptions& options) {
  require_finite(grid.values(), "DCT input grid");
  FrequencyGrid result(grid.side(), grid.side(), grid.hidden());
  transform_channels(Direction::forward, grid.values(), result.values(), grid.side(), grid.side(),
                     grid.hidden(), options);
  return result;
}

FeatureGrid idct2d(const FrequencyGrid& fgrid, const TransformOptions& options) {
  if (fgrid.rows() != fgrid.cols()) {
    throw ShapeError("inverse 2D DCT needs square extents, got " + std::to_string(fgrid.rows()) + "x" +
                     std::to_string(fgrid.cols()));
  }
  require_finite(fgrid.values(), "iDCT input grid");
  FeatureGrid result(fgrid.rows(), fgrid.hidden());
  transform_channels(Direction::inverse, fgrid.values(), result.values(), fgrid.rows(), fgrid.cols(),
                     fgrid.hidden(), options);
  return result;
}

}  // namespace ffc
