#include "gbcost/lattice.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

#include "gbcost/errors.hpp"

namespace gbcost {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in lattice arithmetic");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in lattice arithmetic");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in lattice arithmetic");
  return r;
}

// col[dst] -= q * col[src] in both matrices
void column_axpy(IntMatrix& h, IntMatrix& u, std::size_t dst, std::size_t src, std::int64_t q) {
  if (q == 0) return;
  for (std::size_t r = 0; r < h.rows(); ++r) h(r, dst) = checked_sub(h(r, dst), checked_mul(q, h(r, src)));
  for (std::size_t r = 0; r < u.rows(); ++r) u(r, dst) = checked_sub(u(r, dst), checked_mul(q, u(r, src)));
}

void column_swap(IntMatrix& h, IntMatrix& u, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < h.rows(); ++r) std::swap(h(r, a), h(r, b));
  for (std::size_t r = 0; r < u.rows(); ++r) std::swap(u(r, a), u(r, b));
}

void column_negate(IntMatrix& h, IntMatrix& u, std::size_t c) {
  for (std::size_t r = 0; r < h.rows(); ++r) h(r, c) = checked_mul(h(r, c), -1);
  for (std::size_t r = 0; r < u.rows(); ++r) u(r, c) = checked_mul(u(r, c), -1);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// LLL with delta = 0.99. Basis updates are exact integer operations, so the
// spanned lattice never changes; floating point only steers the choices.
void lll_reduce(std::vector<IntVector>& basis) {
  const std::size_t k_max = basis.size();
  if (k_max < 2) return;
  const double delta = 0.99;
  const std::size_t dim = basis[0].size();
  std::vector<std::vector<double>> star(k_max, std::vector<double>(dim));
  std::vector<std::vector<double>> mu(k_max, std::vector<double>(k_max, 0.0));
  std::vector<double> norm2(k_max);

  auto gram_schmidt = [&] {
    for (std::size_t i = 0; i < k_max; ++i) {
      for (std::size_t d = 0; d < dim; ++d) star[i][d] = static_cast<double>(basis[i][d]);
      for (std::size_t j = 0; j < i; ++j) {
        double num = 0;
        for (std::size_t d = 0; d < dim; ++d) num += static_cast<double>(basis[i][d]) * star[j][d];
        mu[i][j] = norm2[j] > 0 ? num / norm2[j] : 0.0;
        for (std::size_t d = 0; d < dim; ++d) star[i][d] -= mu[i][j] * star[j][d];
      }
      norm2[i] = 0;
      for (std::size_t d = 0; d < dim; ++d) norm2[i] += star[i][d] * star[i][d];
    }
  };

  gram_schmidt();
  std::size_t k = 1;
  int guard = 0;
  while (k < k_max && guard++ < 100000) {
    for (std::size_t j = k; j-- > 0;) {
      const auto q = static_cast<std::int64_t>(std::llround(mu[k][j]));
      if (q != 0) {
        for (std::size_t d = 0; d < dim; ++d)
          basis[k][d] = checked_sub(basis[k][d], checked_mul(q, basis[j][d]));
        gram_schmidt();
      }
    }
    if (norm2[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norm2[k - 1]) {
      ++k;
    } else {
      std::swap(basis[k], basis[k - 1]);
      gram_schmidt();
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
}

}  // namespace

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntVector IntMatrix::column(std::size_t c) const {
  IntVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

IntVector IntMatrix::times(const IntVector& v) const {
  if (v.size() != cols_) throw DimensionError("matrix-vector shape mismatch");
  IntVector out(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r] = checked_add(out[r], checked_mul((*this)(r, c), v[c]));
  return out;
}

HermiteForm column_hermite_form(const IntMatrix& a) {
  HermiteForm f{a, IntMatrix::identity(a.cols()), 0};
  IntMatrix& h = f.hnf;
  IntMatrix& u = f.transform;
  const std::size_t n = a.cols();
  std::size_t k = 0;
  for (std::size_t row = 0; row < a.rows() && k < n; ++row) {
    // Euclid across columns k..n-1 until only column k is nonzero in this row.
    while (true) {
      std::size_t best = n;
      for (std::size_t c = k; c < n; ++c) {
        if (h(row, c) != 0 && (best == n || std::llabs(h(row, c)) < std::llabs(h(row, best)))) best = c;
      }
      if (best == n) break;
      column_swap(h, u, k, best);
      bool others = false;
      for (std::size_t c = k + 1; c < n; ++c) {
        if (h(row, c) == 0) continue;
        column_axpy(h, u, c, k, floor_div(h(row, c), h(row, k)));
        if (h(row, c) != 0) others = true;
      }
      if (!others) break;
    }
    if (h(row, k) == 0) continue;
    if (h(row, k) < 0) column_negate(h, u, k);
    // Reduce earlier pivot columns' entries in this row modulo the pivot.
    for (std::size_t c = 0; c < k; ++c) column_axpy(h, u, c, k, floor_div(h(row, c), h(row, k)));
    ++k;
  }
  f.rank = k;
  return f;
}

std::vector<IntVector> lattice_kernel(const IntMatrix& a) {
  HermiteForm f = column_hermite_form(a);
  std::vector<IntVector> basis;
  for (std::size_t c = f.rank; c < a.cols(); ++c) basis.push_back(f.transform.column(c));
  lll_reduce(basis);
  for (const IntVector& v : basis) {
    for (std::int64_t x : a.times(v))
      if (x != 0) throw Error("lattice kernel vector failed A*v = 0");
  }
  return basis;
}

std::size_t integer_rank(const IntMatrix& a) { return column_hermite_form(a).rank; }

}  // namespace gbcost
