#pragma once

#include <cstdint>
#include <vector>

namespace gbcost {

using IntVector = std::vector<std::int64_t>;

/// Row-major dense integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVector column(std::size_t c) const;
  /// Checked product A*v; throws OverflowError.
  IntVector times(const IntVector& v) const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

/// Column-style Hermite normal form: A * transform = hnf with `transform`
/// unimodular. The first `rank` columns of `hnf` are the pivot columns and the
/// remaining columns are zero.
struct HermiteForm {
  IntMatrix hnf;
  IntMatrix transform;
  std::size_t rank = 0;
};

/// All arithmetic is checked; intermediate overflow throws OverflowError.
HermiteForm column_hermite_form(const IntMatrix& a);

/// Basis of the integer kernel lattice {v : A v = 0}, of size cols - rank(A).
/// Basis vectors are LLL-size-reduced so that they stay short.
std::vector<IntVector> lattice_kernel(const IntMatrix& a);

std::size_t integer_rank(const IntMatrix& a);

}  // namespace gbcost
