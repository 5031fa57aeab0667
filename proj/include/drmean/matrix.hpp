#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace drm {

// Column-major real design matrix. Columns are contiguous so the QR sweeps
// and basis builders can hand them straight to the SIMD kernels.
class DesignMatrix {
 public:
  DesignMatrix() = default;
  DesignMatrix(std::size_t rows, std::size_t cols, bool has_intercept = false);

  // Builds from covariate columns, optionally prepending a constant-1 column.
  static DesignMatrix from_columns(const std::vector<std::vector<double>>& columns,
                                   bool add_intercept);
  static DesignMatrix intercept_only(std::size_t rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool has_intercept() const noexcept { return has_intercept_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[j * rows_ + i]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return values_[j * rows_ + i]; }

  std::span<const double> column(std::size_t j) const noexcept {
    return {values_.data() + j * rows_, rows_};
  }
  std::span<double> column(std::size_t j) noexcept { return {values_.data() + j * rows_, rows_}; }
  std::span<const double> values() const noexcept { return values_; }

  // Appends the columns of `extra` (same row count) on the right.
  DesignMatrix with_columns(const DesignMatrix& extra) const;
  void append_column(std::span<const double> values);

  // Subset of columns, in the given order. Keeps the intercept flag only when
  // column 0 is retained in front.
  DesignMatrix select_columns(std::span<const std::size_t> indices) const;

  // x_i^T beta for every row.
  std::vector<double> multiply(std::span<const double> beta) const;

  // Throws DimensionMismatch/InvalidArgument on non-finite entries or a
  // missing constant intercept column.
  void validate() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  bool has_intercept_ = false;
  std::vector<double> values_;
};

}  // namespace drm
