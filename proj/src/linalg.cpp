#include "wk/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace wk {

namespace {

// Reduced row echelon form of [A | B] over a field, in place on a working
// copy; returns pivot columns.
struct Echelon {
  Matrix M;  // rref of the input
  std::vector<int> pivot_col;
};

Echelon rref_field(const Matrix& In) {
  Echelon E{In, {}};
  Matrix& M = E.M;
  const Ring& R = M.ring;
  int r = 0;
  for (int c = 0; c < M.cols && r < M.rows; ++c) {
    int p = -1;
    for (int i = r; i < M.rows; ++i)
      if (M.at(i, c) != 0) { p = i; break; }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < M.cols; ++j) std::swap(M.at(p, j), M.at(r, j));
    Rat inv = *R.inverse(M.at(r, c));
    for (int j = c; j < M.cols; ++j) M.at(r, j) = R.mul(inv, M.at(r, j));
    for (int i = 0; i < M.rows; ++i) {
      if (i == r || M.at(i, c) == 0) continue;
      Rat f = M.at(i, c);
      for (int j = c; j < M.cols; ++j)
        M.at(i, j) = R.sub(M.at(i, j), R.mul(f, M.at(r, j)));
    }
    E.pivot_col.push_back(c);
    ++r;
  }
  return E;
}

// Fast path: prime-field rref on int64 values.
Echelon rref_modp(const Matrix& In) {
  const long long p = In.ring.modulus;
  int rows = In.rows, cols = In.cols;
  std::vector<long long> m(size_t(rows) * cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m[size_t(i) * cols + j] = numerator(In.at(i, j)).convert_to<long long>();
  auto at = [&](int i, int j) -> long long& { return m[size_t(i) * cols + j]; };
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (at(i, c) != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < cols; ++j) std::swap(at(piv, j), at(r, j));
    long long inv = mod_inverse(at(r, c), p);
    for (int j = c; j < cols; ++j) at(r, j) = at(r, j) * inv % p;
    for (int i = 0; i < rows; ++i) {
      if (i == r || at(i, c) == 0) continue;
      long long f = at(i, c);
      for (int j = c; j < cols; ++j) at(i, j) = ((at(i, j) - f * at(r, j)) % p + p) % p;
    }
    pivots.push_back(c);
    ++r;
  }
  Echelon E{Matrix(In.ring, rows, cols), pivots};
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) E.M.at(i, j) = Rat(at(i, j));
  return E;
}

Echelon rref(const Matrix& In) {
  return In.ring.kind == Ring::Kind::PrimeField ? rref_modp(In) : rref_field(In);
}

AffineSolutions solve_affine_field(const Matrix& A, const Matrix& B) {
  const Ring& R = A.ring;
  Echelon E = rref(hstack(A, B));
  AffineSolutions S;
  S.particular = Matrix(R, A.cols, B.cols);
  for (int c : E.pivot_col)
    if (c >= A.cols) return S;  // inconsistent row
  S.solvable = true;
  std::vector<int> pivot_of_col(A.cols, -1);
  for (size_t r = 0; r < E.pivot_col.size(); ++r) pivot_of_col[E.pivot_col[r]] = int(r);
  for (int j = 0; j < A.cols; ++j)
    if (pivot_of_col[j] >= 0)
      for (int k = 0; k < B.cols; ++k)
        S.particular.at(j, k) = E.M.at(pivot_of_col[j], A.cols + k);
  std::vector<int> free_cols;
  for (int j = 0; j < A.cols; ++j)
    if (pivot_of_col[j] < 0) free_cols.push_back(j);
  S.kernel = Matrix(R, A.cols, int(free_cols.size()));
  for (size_t k = 0; k < free_cols.size(); ++k) {
    int f = free_cols[k];
    S.kernel.at(f, int(k)) = R.reduce(Rat(1));
    for (int j = 0; j < A.cols; ++j)
      if (pivot_of_col[j] >= 0)
        S.kernel.at(j, int(k)) = R.neg(E.M.at(pivot_of_col[j], f));
  }
  return S;
}

Int to_int(const Rat& x) {
  check(denominator(x) == 1, "expected an integer entry");
  return numerator(x);
}

struct IntSmith {
  std::vector<std::vector<Int>> D, U, V;
};

void add_row(std::vector<std::vector<Int>>& M, int dst, int src, const Int& f) {
  for (size_t j = 0; j < M[dst].size(); ++j) M[dst][j] += f * M[src][j];
}
void swap_rows(std::vector<std::vector<Int>>& M, int a, int b) { std::swap(M[a], M[b]); }
void negate_row(std::vector<std::vector<Int>>& M, int a) {
  for (Int& x : M[a]) x = -x;
}
void add_col(std::vector<std::vector<Int>>& M, int dst, int src, const Int& f) {
  for (size_t i = 0; i < M.size(); ++i) M[i][dst] += f * M[i][src];
}
void swap_cols(std::vector<std::vector<Int>>& M, int a, int b) {
  for (size_t i = 0; i < M.size(); ++i) std::swap(M[i][a], M[i][b]);
}

IntSmith smith_int(const Matrix& A) {
  int rows = A.rows, cols = A.cols;
  IntSmith S;
  S.D.assign(rows, std::vector<Int>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) S.D[i][j] = to_int(A.at(i, j));
  S.U.assign(rows, std::vector<Int>(rows));
  S.V.assign(cols, std::vector<Int>(cols));
  for (int i = 0; i < rows; ++i) S.U[i][i] = 1;
  for (int j = 0; j < cols; ++j) S.V[j][j] = 1;
  auto& D = S.D;
  int m = std::min(rows, cols);
  for (int t = 0; t < m; ++t) {
    // pivot: smallest nonzero absolute value in the trailing block
    int pi = -1, pj = -1;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j)
        if (D[i][j] != 0 && (pi < 0 || abs(D[i][j]) < abs(D[pi][pj]))) { pi = i; pj = j; }
    if (pi < 0) break;
    if (pi != t) { swap_rows(D, t, pi); swap_rows(S.U, t, pi); }
    if (pj != t) { swap_cols(D, t, pj); swap_cols(S.V, t, pj); }
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (int i = t + 1; i < rows; ++i) {
        if (D[i][t] == 0) continue;
        Int q = D[i][t] / D[t][t];
        add_row(D, i, t, -q); add_row(S.U, i, t, -q);
        if (D[i][t] != 0) {  // remainder smaller than pivot: promote it
          swap_rows(D, t, i); swap_rows(S.U, t, i);
          dirty = true;
        }
      }
      for (int j = t + 1; j < cols; ++j) {
        if (D[t][j] == 0) continue;
        Int q = D[t][j] / D[t][t];
        add_col(D, j, t, -q); add_col(S.V, j, t, -q);
        if (D[t][j] != 0) {
          swap_cols(D, t, j); swap_cols(S.V, t, j);
          dirty = true;
        }
      }
      if (dirty) continue;
      // enforce divisibility of the trailing block by the pivot
      for (int i = t + 1; i < rows && !dirty; ++i)
        for (int j = t + 1; j < cols && !dirty; ++j)
          if (D[i][j] % D[t][t] != 0) {
            add_row(D, t, i, 1); add_row(S.U, t, i, 1);
            dirty = true;
          }
    }
    if (D[t][t] < 0) { negate_row(D, t); negate_row(S.U, t); }
  }
  return S;
}

Matrix from_int_rows(const Ring& R, const std::vector<std::vector<Int>>& M, int rows, int cols) {
  Matrix C(R, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) C.at(i, j) = R.reduce(Rat(M[i][j]));
  return C;
}

AffineSolutions solve_affine_integers(const Matrix& A, const Matrix& B) {
  const Ring& R = A.ring;
  Smith S = smith_normal_form(A);
  Matrix UB = matmul(S.U, B);
  AffineSolutions out;
  out.particular = Matrix(R, A.cols, B.cols);
  int m = std::min(A.rows, A.cols);
  Matrix Y(R, A.cols, B.cols);
  for (int i = 0; i < A.rows; ++i) {
    Rat d = i < m ? S.D.at(i, i) : Rat(0);
    for (int k = 0; k < B.cols; ++k) {
      const Rat& v = UB.at(i, k);
      if (d == 0) {
        if (v != 0) return out;  // unsolvable
      } else {
        if (to_int(v) % to_int(d) != 0) return out;
        Y.at(i, k) = Rat(to_int(v) / to_int(d));
      }
    }
  }
  out.solvable = true;
  out.particular = matmul(S.V, Y);
  std::vector<int> free_cols;
  for (int j = 0; j < A.cols; ++j)
    if (j >= m || S.D.at(j, j) == 0) free_cols.push_back(j);
  out.kernel = select_columns(S.V, free_cols);
  return out;
}

// Diagonalization U*A*V = D over Z/n by elementary operations, entirely in
// int64 with entries kept in [0, n). Elementary transforms are invertible mod
// n, so solving and kernel extraction reduce to the diagonal.
struct LLDiag {
  std::vector<std::vector<long long>> D, U, V;
};

LLDiag zmod_diag(const Matrix& A) {
  const long long n = A.ring.modulus;
  const int rows = A.rows, cols = A.cols;
  using Row = std::vector<long long>;
  auto to_ll = [](const Rat& x) { return numerator(x).convert_to<long long>(); };
  LLDiag S;
  S.D.assign(rows, Row(cols));
  S.U.assign(rows, Row(rows));
  S.V.assign(cols, Row(cols));
  auto &D = S.D, &U = S.U, &V = S.V;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) D[i][j] = to_ll(A.at(i, j));
  for (int i = 0; i < rows; ++i) U[i][i] = 1 % n;
  for (int j = 0; j < cols; ++j) V[j][j] = 1 % n;
  auto addrow = [&](std::vector<Row>& M, int dst, int src, long long f) {
    Row &d = M[dst], &s = M[src];
    for (size_t j = 0; j < d.size(); ++j) d[j] = (d[j] + f * s[j]) % n;
  };
  auto addcol = [&](std::vector<Row>& M, int dst, int src, long long f) {
    for (auto& r : M) r[dst] = (r[dst] + f * r[src]) % n;
  };
  auto swapcol = [&](std::vector<Row>& M, int a, int b) {
    for (auto& r : M) std::swap(r[a], r[b]);
  };
  const int m = std::min(rows, cols);
  for (int t = 0; t < m; ++t) {
    int pi = -1, pj = -1;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j)
        if (D[i][j] != 0 && (pi < 0 || D[i][j] < D[pi][pj])) { pi = i; pj = j; }
    if (pi < 0) break;
    if (pi != t) { std::swap(D[pi], D[t]); std::swap(U[pi], U[t]); }
    if (pj != t) { swapcol(D, t, pj); swapcol(V, t, pj); }
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (int i = t + 1; i < rows; ++i) {
        if (D[i][t] == 0) continue;
        long long q = D[i][t] / D[t][t];
        addrow(D, i, t, n - q % n);
        addrow(U, i, t, n - q % n);
        if (D[i][t] != 0) {  // smaller remainder: promote it to the pivot
          std::swap(D[i], D[t]);
          std::swap(U[i], U[t]);
          dirty = true;
        }
      }
      for (int j = t + 1; j < cols; ++j) {
        if (D[t][j] == 0) continue;
        long long q = D[t][j] / D[t][t];
        addcol(D, j, t, n - q % n);
        addcol(V, j, t, n - q % n);
        if (D[t][j] != 0) {
          swapcol(D, t, j);
          swapcol(V, t, j);
          dirty = true;
        }
      }
    }
  }
  return S;
}

AffineSolutions solve_affine_zmod(const Matrix& A, const Matrix& B) {
  const Ring& R = A.ring;
  const long long n = R.modulus;
  const int rows = A.rows, cols = A.cols;
  using Row = std::vector<long long>;
  auto to_ll = [](const Rat& x) { return numerator(x).convert_to<long long>(); };
  LLDiag S = zmod_diag(A);
  auto &D = S.D, &U = S.U, &V = S.V;
  const int m = std::min(rows, cols);
  AffineSolutions out;
  out.particular = Matrix(R, cols, B.cols);
  // Per-diagonal congruence d*y = (U b) mod n: solvable iff gcd(d, n) divides
  // the right-hand side.
  std::vector<Row> Y(cols, Row(B.cols));
  for (int i = 0; i < rows; ++i) {
    long long d = i < m ? D[i][i] : 0;
    long long g = std::gcd(d, n);
    if (g == 0) g = n;
    for (int k = 0; k < B.cols; ++k) {
      long long c = 0;
      for (int j = 0; j < rows; ++j) c = (c + U[i][j] * to_ll(B.at(j, k))) % n;
      if (c % g != 0) return out;
      if (i < m && g != n) {
        long long nd = n / g;
        Y[i][k] = (c / g) % nd * mod_inverse(d / g % nd, nd) % nd;
      }
    }
  }
  out.solvable = true;
  for (int j = 0; j < cols; ++j)
    for (int k = 0; k < B.cols; ++k) {
      long long x = 0;
      for (int i = 0; i < cols; ++i) x = (x + V[j][i] * Y[i][k]) % n;
      out.particular.at(j, k) = Rat(x);
    }
  // Kernel of the diagonal: component t contributes (n / gcd(d_t, n)) e_t.
  Matrix gens(R, cols, 0);
  for (int t = 0; t < cols; ++t) {
    long long d = t < m ? D[t][t] : 0;
    long long g = std::gcd(d, n);
    if (g == 0) g = n;
    long long coef = n / g;
    if (coef % n == 0) continue;
    Matrix col(R, cols, 1);
    for (int j = 0; j < cols; ++j) col.at(j, 0) = Rat(V[j][t] * coef % n);
    if (!col.is_zero()) gens = hstack(gens, col);
  }
  out.kernel = gens;
  return out;
}

// Two-sided Gaussian elimination over a field with transform tracking; the
// diagonal of D is 1 on the first rank entries and 0 after.
Smith field_diag(const Matrix& A) {
  const Ring& R = A.ring;
  const int rows = A.rows, cols = A.cols;
  Smith S{A, Matrix::identity(R, rows), Matrix::identity(R, cols)};
  Matrix &D = S.D, &U = S.U, &V = S.V;
  auto swap_r = [&](Matrix& M, int a, int b) {
    for (int j = 0; j < M.cols; ++j) std::swap(M.at(a, j), M.at(b, j));
  };
  auto swap_c = [&](Matrix& M, int a, int b) {
    for (int i = 0; i < M.rows; ++i) std::swap(M.at(i, a), M.at(i, b));
  };
  const int m = std::min(rows, cols);
  for (int t = 0; t < m; ++t) {
    int pi = -1, pj = -1;
    for (int i = t; i < rows && pi < 0; ++i)
      for (int j = t; j < cols; ++j)
        if (D.at(i, j) != 0) { pi = i; pj = j; break; }
    if (pi < 0) break;
    if (pi != t) { swap_r(D, t, pi); swap_r(U, t, pi); }
    if (pj != t) { swap_c(D, t, pj); swap_c(V, t, pj); }
    Rat inv = *R.inverse(D.at(t, t));
    for (int j = 0; j < cols; ++j) D.at(t, j) = R.mul(inv, D.at(t, j));
    for (int j = 0; j < rows; ++j) U.at(t, j) = R.mul(inv, U.at(t, j));
    for (int i = t + 1; i < rows; ++i) {
      Rat f = D.at(i, t);
      if (f == 0) continue;
      for (int j = 0; j < cols; ++j) D.at(i, j) = R.sub(D.at(i, j), R.mul(f, D.at(t, j)));
      for (int j = 0; j < rows; ++j) U.at(i, j) = R.sub(U.at(i, j), R.mul(f, U.at(t, j)));
    }
    for (int j = t + 1; j < cols; ++j) {
      Rat f = D.at(t, j);
      if (f == 0) continue;
      for (int i = 0; i < rows; ++i) D.at(i, j) = R.sub(D.at(i, j), R.mul(f, D.at(i, t)));
      for (int i = 0; i < cols; ++i) V.at(i, j) = R.sub(V.at(i, j), R.mul(f, V.at(i, t)));
    }
  }
  return S;
}

}  // namespace

AffineSolutions solve_affine(const Matrix& A, const Matrix& B) {
  check(A.ring == B.ring, "solve: ring mismatch");
  check(A.rows == B.rows, "solve: dimension mismatch");
  switch (A.ring.kind) {
    case Ring::Kind::PrimeField:
    case Ring::Kind::Rationals:
      return solve_affine_field(A, B);
    case Ring::Kind::Integers:
      return solve_affine_integers(A, B);
    case Ring::Kind::IntegersModN:
      return solve_affine_zmod(A, B);
  }
  return {};
}

std::optional<Matrix> solve_linear(const Matrix& A, const Matrix& b) {
  AffineSolutions S = solve_affine(A, b);
  if (!S.solvable) return std::nullopt;
  return S.particular;
}

Matrix kernel_basis(const Matrix& A) {
  AffineSolutions S = solve_affine(A, Matrix(A.ring, A.rows, 1));
  return S.kernel;
}

Smith smith_normal_form(const Matrix& A) {
  check(A.ring.kind == Ring::Kind::Integers, "smith_normal_form requires the integer ring");
  IntSmith S = smith_int(A);
  return Smith{from_int_rows(A.ring, S.D, A.rows, A.cols),
               from_int_rows(A.ring, S.U, A.rows, A.rows),
               from_int_rows(A.ring, S.V, A.cols, A.cols)};
}

Smith diagonalize(const Matrix& A) {
  switch (A.ring.kind) {
    case Ring::Kind::PrimeField:
    case Ring::Kind::Rationals:
      return field_diag(A);
    case Ring::Kind::Integers:
      return smith_normal_form(A);
    case Ring::Kind::IntegersModN: {
      LLDiag S = zmod_diag(A);
      auto wrap = [&](const std::vector<std::vector<long long>>& M, int r, int c) {
        Matrix out(A.ring, r, c);
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < c; ++j) out.at(i, j) = Rat(M[i][j]);
        return out;
      };
      return Smith{wrap(S.D, A.rows, A.cols), wrap(S.U, A.rows, A.rows),
                   wrap(S.V, A.cols, A.cols)};
    }
  }
  check(false, "diagonalize: unsupported ring");
  return Smith{A, A, A};
}

int field_rank(const Matrix& A) {
  check(A.ring.is_field(), "field_rank requires a field");
  return int(rref(A).pivot_col.size());
}

Rat det_exact(const Matrix& A) {
  check(A.rows == A.cols, "det: non-square");
  Matrix M = with_ring(A, Ring::rationals());
  Rat det(1);
  for (int c = 0; c < M.cols; ++c) {
    int p = -1;
    for (int i = c; i < M.rows; ++i)
      if (M.at(i, c) != 0) { p = i; break; }
    if (p < 0) return Rat(0);
    if (p != c) {
      for (int j = 0; j < M.cols; ++j) std::swap(M.at(p, j), M.at(c, j));
      det = -det;
    }
    det *= M.at(c, c);
    Rat inv = Rat(1) / M.at(c, c);
    for (int i = c + 1; i < M.rows; ++i) {
      if (M.at(i, c) == 0) continue;
      Rat f = M.at(i, c) * inv;
      for (int j = c; j < M.cols; ++j) M.at(i, j) -= f * M.at(c, j);
    }
  }
  return det;
}

std::optional<Matrix> matrix_inverse(const Matrix& A) {
  if (A.rows != A.cols) return std::nullopt;
  auto sol = solve_affine(A, Matrix::identity(A.ring, A.rows));
  if (!sol.solvable) return std::nullopt;
  if (!matmul(sol.particular, A).is_identity()) return std::nullopt;
  return sol.particular;
}

}  // namespace wk
