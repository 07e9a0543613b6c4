#pragma once

#include <initializer_list>
#include <vector>

#include "wk/ring.hpp"

namespace wk {

// Dense matrix over a Ring, row-major, entries always canonical.
struct Matrix {
  Ring ring;
  int rows = 0, cols = 0;
  std::vector<Rat> e;

  Matrix() = default;
  Matrix(Ring R, int r, int c) : ring(R), rows(r), cols(c), e(size_t(r) * c) {}
  static Matrix identity(Ring R, int n);
  static Matrix from(Ring R, std::initializer_list<std::initializer_list<long long>> rows);

  Rat& at(int i, int j) { return e[size_t(i) * cols + j]; }
  const Rat& at(int i, int j) const { return e[size_t(i) * cols + j]; }
  void set(int i, int j, const Rat& v) { at(i, j) = ring.reduce(v); }

  bool is_zero() const;
  bool is_identity() const;
  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
  bool operator==(const Matrix& o) const { return ring == o.ring && same_shape(o) && e == o.e; }
};

Matrix matmul_serial(const Matrix& A, const Matrix& B);
Matrix matmul_parallel(const Matrix& A, const Matrix& B);
Matrix matmul(const Matrix& A, const Matrix& B);
Matrix add(const Matrix& A, const Matrix& B);
Matrix sub(const Matrix& A, const Matrix& B);
Matrix neg(const Matrix& A);
Matrix scalar_mul(const Rat& c, const Matrix& A);
Matrix transpose(const Matrix& A);
Matrix hstack(const Matrix& A, const Matrix& B);
Matrix vstack(const Matrix& A, const Matrix& B);
Matrix block2x2(const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& D);
Matrix submatrix(const Matrix& A, int r0, int r1, int c0, int c1);
Matrix column(const Matrix& A, int j);
// Selects the listed columns (resp. rows) in the given order.
Matrix select_columns(const Matrix& A, const std::vector<int>& js);
Matrix select_rows(const Matrix& A, const std::vector<int>& is);
Matrix with_ring(const Matrix& A, const Ring& R);  // re-reduce entries into R

}  // namespace wk
