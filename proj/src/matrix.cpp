#include "wk/matrix.hpp"

namespace wk {

Matrix Matrix::identity(Ring R, int n) {
  Matrix m(R, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = R.reduce(Rat(1));
  return m;
}

Matrix Matrix::from(Ring R, std::initializer_list<std::initializer_list<long long>> rows) {
  int r = int(rows.size());
  int c = r ? int(rows.begin()->size()) : 0;
  Matrix m(R, r, c);
  int i = 0;
  for (auto& row : rows) {
    check(int(row.size()) == c, "ragged matrix literal");
    int j = 0;
    for (long long v : row) m.at(i, j++) = R.reduce(Rat(v));
    ++i;
  }
  return m;
}

bool Matrix::is_zero() const {
  for (const Rat& x : e)
    if (x != 0) return false;
  return true;
}

bool Matrix::is_identity() const {
  if (rows != cols) return false;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

static void require_same_ring(const Matrix& A, const Matrix& B) {
  check(A.ring == B.ring, "ring mismatch");
}

Matrix matmul_serial(const Matrix& A, const Matrix& B) {
  require_same_ring(A, B);
  check(A.cols == B.rows, "matmul: dimension mismatch");
  Matrix C(A.ring, A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const Rat& a = A.at(i, k);
      if (a == 0) continue;
      for (int j = 0; j < B.cols; ++j) {
        const Rat& b = B.at(k, j);
        if (b != 0) C.at(i, j) += a * b;
      }
    }
  for (Rat& x : C.e) x = A.ring.reduce(x);
  return C;
}

Matrix matmul_parallel(const Matrix& A, const Matrix& B) {
  require_same_ring(A, B);
  check(A.cols == B.rows, "matmul: dimension mismatch");
  Matrix C(A.ring, A.rows, B.cols);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < A.rows; ++i) {
    for (int k = 0; k < A.cols; ++k) {
      const Rat& a = A.at(i, k);
      if (a == 0) continue;
      for (int j = 0; j < B.cols; ++j) {
        const Rat& b = B.at(k, j);
        if (b != 0) C.at(i, j) += a * b;
      }
    }
    for (int j = 0; j < B.cols; ++j) C.at(i, j) = A.ring.reduce(C.at(i, j));
  }
  return C;
}

Matrix matmul(const Matrix& A, const Matrix& B) {
  long long work = 1LL * A.rows * A.cols * B.cols;
  return work >= 32768 ? matmul_parallel(A, B) : matmul_serial(A, B);
}

Matrix add(const Matrix& A, const Matrix& B) {
  require_same_ring(A, B);
  check(A.same_shape(B), "add: shape mismatch");
  Matrix C(A.ring, A.rows, A.cols);
  for (size_t i = 0; i < A.e.size(); ++i) C.e[i] = A.ring.reduce(A.e[i] + B.e[i]);
  return C;
}

Matrix sub(const Matrix& A, const Matrix& B) {
  require_same_ring(A, B);
  check(A.same_shape(B), "sub: shape mismatch");
  Matrix C(A.ring, A.rows, A.cols);
  for (size_t i = 0; i < A.e.size(); ++i) C.e[i] = A.ring.reduce(A.e[i] - B.e[i]);
  return C;
}

Matrix neg(const Matrix& A) {
  Matrix C(A.ring, A.rows, A.cols);
  for (size_t i = 0; i < A.e.size(); ++i) C.e[i] = A.ring.reduce(-A.e[i]);
  return C;
}

Matrix scalar_mul(const Rat& c, const Matrix& A) {
  Matrix C(A.ring, A.rows, A.cols);
  for (size_t i = 0; i < A.e.size(); ++i) C.e[i] = A.ring.reduce(c * A.e[i]);
  return C;
}

Matrix transpose(const Matrix& A) {
  Matrix C(A.ring, A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C.at(j, i) = A.at(i, j);
  return C;
}

Matrix hstack(const Matrix& A, const Matrix& B) {
  require_same_ring(A, B);
  check(A.rows == B.rows, "hstack: row mismatch");
  Matrix C(A.ring, A.rows, A.cols + B.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
    for (int j = 0; j < B.cols; ++j) C.at(i, A.cols + j) = B.at(i, j);
  }
  return C;
}

Matrix vstack(const Matrix& A, const Matrix& B) {
  require_same_ring(A, B);
  check(A.cols == B.cols, "vstack: column mismatch");
  Matrix C(A.ring, A.rows + B.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j) C.at(A.rows + i, j) = B.at(i, j);
  return C;
}

Matrix block2x2(const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& D) {
  return vstack(hstack(A, B), hstack(C, D));
}

Matrix submatrix(const Matrix& A, int r0, int r1, int c0, int c1) {
  check(0 <= r0 && r0 <= r1 && r1 <= A.rows && 0 <= c0 && c0 <= c1 && c1 <= A.cols,
        "submatrix: bad range");
  Matrix C(A.ring, r1 - r0, c1 - c0);
  for (int i = r0; i < r1; ++i)
    for (int j = c0; j < c1; ++j) C.at(i - r0, j - c0) = A.at(i, j);
  return C;
}

Matrix column(const Matrix& A, int j) { return submatrix(A, 0, A.rows, j, j + 1); }

Matrix select_columns(const Matrix& A, const std::vector<int>& js) {
  Matrix C(A.ring, A.rows, int(js.size()));
  for (int i = 0; i < A.rows; ++i)
    for (size_t k = 0; k < js.size(); ++k) C.at(i, int(k)) = A.at(i, js[k]);
  return C;
}

Matrix select_rows(const Matrix& A, const std::vector<int>& is) {
  Matrix C(A.ring, int(is.size()), A.cols);
  for (size_t k = 0; k < is.size(); ++k)
    for (int j = 0; j < A.cols; ++j) C.at(int(k), j) = A.at(is[k], j);
  return C;
}

Matrix with_ring(const Matrix& A, const Ring& R) {
  Matrix C(R, A.rows, A.cols);
  for (size_t i = 0; i < A.e.size(); ++i) C.e[i] = R.reduce(A.e[i]);
  return C;
}

}  // namespace wk
