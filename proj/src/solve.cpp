#include "wk/solve.hpp"

namespace wk {

int BlockSystem::new_block(int rows, int cols) {
  check(rows >= 0 && cols >= 0, "bad block shape");
  blocks_.push_back({rows, cols, unknowns_});
  unknowns_ += rows * cols;
  return (int)blocks_.size() - 1;
}

int BlockSystem::new_equation(const Matrix& rhs) {
  check(rhs.ring == ring_, "equation rhs over wrong ring");
  eqs_.push_back({rhs.rows, rhs.cols, eq_rows_, rhs});
  eq_rows_ += rhs.rows * rhs.cols;
  return (int)eqs_.size() - 1;
}

void BlockSystem::add_term(int eq, const Matrix& L, int block, const Matrix& R) {
  const Block& b = blocks_.at(block);
  const Equation& e = eqs_.at(eq);
  check(L.rows == e.rows && L.cols == b.rows, "term left factor shape mismatch");
  check(R.rows == b.cols && R.cols == e.cols, "term right factor shape mismatch");
  terms_.push_back({eq, block, L, R});
}

void BlockSystem::add_term_left(int eq, const Matrix& L, int block) {
  add_term(eq, L, block, Matrix::identity(ring_, blocks_.at(block).cols));
}

void BlockSystem::add_term_right(int eq, int block, const Matrix& R) {
  add_term(eq, Matrix::identity(ring_, blocks_.at(block).rows), block, R);
}

std::vector<Matrix> BlockSystem::unflatten(const Matrix& column) const {
  std::vector<Matrix> out;
  for (const Block& b : blocks_) {
    Matrix m(ring_, b.rows, b.cols);
    for (int i = 0; i < b.rows; ++i)
      for (int j = 0; j < b.cols; ++j) m.at(i, j) = column.at(b.offset + i * b.cols + j, 0);
    out.push_back(m);
  }
  return out;
}

// Entry (p,q) of L·X·R expands to sum_{i,j} L(p,i) X(i,j) R(j,q); the dense
// system has one row per equation entry and one column per unknown entry.
std::optional<std::vector<Matrix>> BlockSystem::solve() const {
  auto all = solve_all();
  if (!all.solvable) return std::nullopt;
  return all.particular;
}

BlockSystem::AllSolutions BlockSystem::solve_all() const {
  Matrix A(ring_, eq_rows_, unknowns_);
  Matrix b(ring_, eq_rows_, 1);
  for (const Term& t : terms_) {
    const Block& bl = blocks_[t.block];
    const Equation& e = eqs_[t.eq];
    for (int p = 0; p < e.rows; ++p)
      for (int i = 0; i < bl.rows; ++i) {
        const Rat& l = t.L.at(p, i);
        if (l == 0) continue;
        for (int j = 0; j < bl.cols; ++j)
          for (int q = 0; q < e.cols; ++q) {
            const Rat& r = t.R.at(j, q);
            if (r == 0) continue;
            Rat& cell = A.at(e.offset + p * e.cols + q, bl.offset + i * bl.cols + j);
            cell = ring_.reduce(cell + l * r);
          }
      }
  }
  for (const Equation& e : eqs_)
    for (int p = 0; p < e.rows; ++p)
      for (int q = 0; q < e.cols; ++q) b.at(e.offset + p * e.cols + q, 0) = e.rhs.at(p, q);

  AllSolutions out;
  auto sol = solve_affine(A, b);
  out.solvable = sol.solvable;
  if (!sol.solvable) return out;
  out.particular = unflatten(sol.particular);
  for (int g = 0; g < sol.kernel.cols; ++g) out.kernel_gens.push_back(unflatten(column(sol.kernel, g)));
  return out;
}

}  // namespace wk
