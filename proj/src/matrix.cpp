#include "drmean/matrix.hpp"

#include <cmath>
#include <string>

#include "drmean/error.hpp"
#include "drmean/simd/kernels.hpp"

namespace drm {

DesignMatrix::DesignMatrix(std::size_t rows, std::size_t cols, bool has_intercept)
    : rows_(rows), cols_(cols), has_intercept_(has_intercept), values_(rows * cols, 0.0) {
  if (has_intercept) {
    if (cols == 0) throw Error(ErrorCode::InvalidArgument, "intercept requested with zero columns");
    for (std::size_t i = 0; i < rows; ++i) values_[i] = 1.0;
  }
}

DesignMatrix DesignMatrix::from_columns(const std::vector<std::vector<double>>& columns,
                                        bool add_intercept) {
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  const std::size_t offset = add_intercept ? 1 : 0;
  DesignMatrix m(rows, columns.size() + offset, add_intercept);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) {
      throw Error(ErrorCode::DimensionMismatch,
                  "column " + std::to_string(j) + " has " + std::to_string(columns[j].size()) +
                      " rows, expected " + std::to_string(rows));
    }
    auto dst = m.column(j + offset);
    for (std::size_t i = 0; i < rows; ++i) dst[i] = columns[j][i];
  }
  return m;
}

DesignMatrix DesignMatrix::intercept_only(std::size_t rows) { return DesignMatrix(rows, 1, true); }

DesignMatrix DesignMatrix::with_columns(const DesignMatrix& extra) const {
  if (extra.rows_ != rows_) {
    throw Error(ErrorCode::DimensionMismatch, "appended block has " + std::to_string(extra.rows_) +
                                                  " rows, expected " + std::to_string(rows_));
  }
  DesignMatrix out = *this;
  out.values_.insert(out.values_.end(), extra.values_.begin(), extra.values_.end());
  out.cols_ += extra.cols_;
  return out;
}

void DesignMatrix::append_column(std::span<const double> values) {
  if (cols_ == 0 && rows_ == 0) rows_ = values.size();
  if (values.size() != rows_) {
    throw Error(ErrorCode::DimensionMismatch, "appended column has " + std::to_string(values.size()) +
                                                  " rows, expected " + std::to_string(rows_));
  }
  values_.insert(values_.end(), values.begin(), values.end());
  ++cols_;
}

DesignMatrix DesignMatrix::select_columns(std::span<const std::size_t> indices) const {
  DesignMatrix out;
  out.rows_ = rows_;
  for (std::size_t j : indices) {
    if (j >= cols_) throw Error(ErrorCode::DimensionMismatch, "column index out of range");
    auto col = column(j);
    out.values_.insert(out.values_.end(), col.begin(), col.end());
    ++out.cols_;
  }
  out.has_intercept_ = has_intercept_ && !indices.empty() && indices.front() == 0;
  return out;
}

std::vector<double> DesignMatrix::multiply(std::span<const double> beta) const {
  if (beta.size() != cols_) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient vector has length " +
                                                  std::to_string(beta.size()) + ", expected " +
                                                  std::to_string(cols_));
  }
  std::vector<double> out(rows_, 0.0);
  for (std::size_t j = 0; j < cols_; ++j) simd::axpy(beta[j], column(j), out);
  return out;
}

void DesignMatrix::validate() const {
  for (std::size_t j = 0; j < cols_; ++j) {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!std::isfinite((*this)(i, j))) {
        throw Error(ErrorCode::InvalidArgument, "non-finite design entry at row " +
                                                    std::to_string(i) + ", column " +
                                                    std::to_string(j));
      }
    }
  }
  if (has_intercept_) {
    for (std::size_t i = 0; i < rows_; ++i) {
      if ((*this)(i, 0) != 1.0) {
        throw Error(ErrorCode::MissingIntercept, "column 0 is flagged as intercept but row " +
                                                     std::to_string(i) + " is not 1");
      }
    }
  }
}

}  // namespace drm
