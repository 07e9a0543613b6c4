#pragma once

#include <optional>

#include "wk/matrix.hpp"

namespace wk {

// U*A*V = D with U, V unimodular over the integers and d1 | d2 | ..., di >= 0.
struct Smith {
  Matrix D, U, V;
};

// U*A*V = D diagonal with U, V invertible over the ring: Smith normal form
// over the integers, unit pivots over fields, elementary-operation
// diagonalization over Z/n (no divisibility chain there).
Smith diagonalize(const Matrix& A);

// Full solution set of A*X = B: X = particular + kernel * (free coefficients).
// kernel columns generate {x : A*x = 0} (a basis over fields and the
// integers, a generating set over Z/n).
struct AffineSolutions {
  bool solvable = false;
  Matrix particular;  // A.cols x B.cols
  Matrix kernel;      // A.cols x (number of generators)
};

std::optional<Matrix> solve_linear(const Matrix& A, const Matrix& b);
Matrix kernel_basis(const Matrix& A);
Smith smith_normal_form(const Matrix& A);
AffineSolutions solve_affine(const Matrix& A, const Matrix& B);
int field_rank(const Matrix& A);
Rat det_exact(const Matrix& A);  // via exact rational elimination
// Two-sided inverse over the ring, when one exists (any ring).
std::optional<Matrix> matrix_inverse(const Matrix& A);

}  // namespace wk
