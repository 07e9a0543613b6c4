#pragma once

#include <optional>
#include <vector>

#include "wk/linalg.hpp"

namespace wk {

// Affine system in unknown matrix blocks X_0, ..., X_{k-1}:
// for each equation e,  sum of terms  L · X_b · R  equals  rhs_e.
// Flattened row-major into one dense solve over the ring, so it inherits
// exact solvability over fields, the integers, and Z/n alike.
class BlockSystem {
 public:
  explicit BlockSystem(const Ring& R) : ring_(R) {}

  int new_block(int rows, int cols);
  int new_equation(const Matrix& rhs);
  // Adds L · X_block · R to equation eq. Shapes must match the equation.
  void add_term(int eq, const Matrix& L, int block, const Matrix& R);
  void add_term_left(int eq, const Matrix& L, int block);   // R = identity
  void add_term_right(int eq, int block, const Matrix& R);  // L = identity

  std::optional<std::vector<Matrix>> solve() const;

  struct AllSolutions {
    bool solvable = false;
    std::vector<Matrix> particular;
    // kernel_gens[g][b] is block b of homogeneous generator g.
    std::vector<std::vector<Matrix>> kernel_gens;
  };
  AllSolutions solve_all() const;

  int block_count() const { return static_cast<int>(blocks_.size()); }

 private:
  struct Block {
    int rows, cols, offset;
  };
  struct Equation {
    int rows, cols, offset;
    Matrix rhs;
  };
  struct Term {
    int eq, block;
    Matrix L, R;
  };

  std::vector<Matrix> unflatten(const Matrix& column) const;

  Ring ring_;
  std::vector<Block> blocks_;
  std::vector<Equation> eqs_;
  std::vector<Term> terms_;
  int unknowns_ = 0;
  int eq_rows_ = 0;
};

}  // namespace wk
