#pragma once

#include "pchain/ring.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace pchain::linalg {

// Dense row-major matrix over a coefficient ring. Entries are kept in the
// ring's canonical form by every mutating operation below.
class Matrix {
public:
  Matrix() = default;
  Matrix(Ring ring, std::size_t rows, std::size_t cols)
      : ring_(ring), rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(Ring ring, std::size_t n);
  static Matrix zero(Ring ring, std::size_t rows, std::size_t cols) { return Matrix(ring, rows, cols); }
  static Matrix from_rows(Ring ring, const std::vector<std::vector<long>>& rows, std::size_t cols = 0);
  // Columns of a matrix with the given number of rows.
  static Matrix from_columns(Ring ring, std::size_t rows, const std::vector<std::vector<Scalar>>& cols);

  const Ring& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Scalar& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, const Scalar& v) {
    Scalar& x = at(i, j);
    x = v;
    ring_.normalize(x);
  }

  Scalar* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
  const Scalar* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

  std::vector<Scalar> column(std::size_t j) const;
  std::vector<Scalar> row(std::size_t i) const;
  void set_column(std::size_t j, const std::vector<Scalar>& v);

  Matrix transpose() const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix scaled(const Scalar& s) const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }
  bool is_zero() const;
  bool is_identity() const;

  std::vector<Scalar> apply(const std::vector<Scalar>& v) const;

  Matrix columns(const std::vector<std::size_t>& idx) const;
  Matrix col_range(std::size_t begin, std::size_t end) const;
  Matrix row_range(std::size_t begin, std::size_t end) const;
  Matrix rows_subset(const std::vector<std::size_t>& idx) const;
  // Copies a block into this matrix at (r0, c0).
  void paste(const Matrix& block, std::size_t r0, std::size_t c0);
  void add_block(const Matrix& block, std::size_t r0, std::size_t c0, const Scalar& coef);

  static Matrix hcat(const Matrix& a, const Matrix& b);
  static Matrix vcat(const Matrix& a, const Matrix& b);

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  // row_a += c * row_b
  void row_addmul(std::size_t a, std::size_t b, const Scalar& c);
  void col_addmul(std::size_t a, std::size_t b, const Scalar& c);
  void row_negate(std::size_t a);
  void col_negate(std::size_t a);

  // Matrix with one more column appended.
  void append_column(const std::vector<Scalar>& v);

private:
  Ring ring_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Scalar> data_;
};

using Vector = std::vector<Scalar>;

// Sparse vector: strictly increasing indices, no stored zeros.
using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

SparseVec sparse_from_dense(const Vector& v);
Vector dense_from_sparse(const SparseVec& v, std::size_t n);
// acc += c * v
void sparse_axpy(const Ring& ring, SparseVec& acc, const Scalar& c, const SparseVec& v);
const Scalar* sparse_find(const SparseVec& v, std::size_t idx);

// Matrix given by sparse columns; rows = dimension of every column.
struct SparseMatrix {
  Ring ring;
  std::size_t rows = 0;
  std::vector<SparseVec> cols;

  SparseMatrix() = default;
  SparseMatrix(Ring r, std::size_t nrows, std::size_t ncols) : ring(r), rows(nrows), cols(ncols) {}
  static SparseMatrix from_dense(const Matrix& m);
  Matrix to_dense() const;
  std::size_t ncols() const { return cols.size(); }
  SparseMatrix transpose() const;
  // this * other
  SparseMatrix mul(const SparseMatrix& other) const;
  SparseVec apply(const SparseVec& v) const;
};

} // namespace pchain::linalg
