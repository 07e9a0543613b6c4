#include "wk/homotopy.hpp"

#include <set>

namespace wk {

Matrix HomotopyWitness::at(int n, const ChainMap& f) const {
  auto it = h.find(n);
  if (it != h.end()) return it->second;
  return Matrix(f.X.ring, f.Y.rank(n - 1), f.X.rank(n));
}

Matrix WeakHomotopyWitness::s_at(int n, const ChainMap& f) const {
  auto it = s.find(n);
  if (it != s.end()) return it->second;
  return Matrix(f.X.ring, f.Y.rank(n - 1), f.X.rank(n));
}

Matrix WeakHomotopyWitness::t_at(int n, const ChainMap& f) const {
  auto it = t.find(n);
  if (it != t.end()) return it->second;
  return Matrix(f.X.ring, f.Y.rank(n - 1), f.X.rank(n));
}

static std::set<int> joint_degrees(const ChainMap& f) {
  std::set<int> degs;
  for (auto& [n, r] : f.X.ranks) degs.insert(n);
  for (auto& [n, r] : f.Y.ranks) degs.insert(n);
  return degs;
}

bool check_homotopy(const ChainMap& f, const ChainMap& g, const HomotopyWitness& w) {
  if (!(f.X == g.X && f.Y == g.Y)) return false;
  for (auto& [n, m] : w.h)
    if (m.rows != f.Y.rank(n - 1) || m.cols != f.X.rank(n)) return false;
  for (int n : joint_degrees(f)) {
    Matrix lhs = sub(f.at(n), g.at(n));
    Matrix rhs = add(matmul(f.Y.d(n - 1), w.at(n, f)), matmul(w.at(n + 1, f), f.X.d(n)));
    if (!(lhs == rhs)) return false;
  }
  return true;
}

bool check_weak_homotopy(const ChainMap& f, const ChainMap& g, const WeakHomotopyWitness& w) {
  if (!(f.X == g.X && f.Y == g.Y)) return false;
  for (auto& [n, m] : w.s)
    if (m.rows != f.Y.rank(n - 1) || m.cols != f.X.rank(n)) return false;
  for (auto& [n, m] : w.t)
    if (m.rows != f.Y.rank(n - 1) || m.cols != f.X.rank(n)) return false;
  for (int n : joint_degrees(f)) {
    Matrix lhs = sub(f.at(n), g.at(n));
    Matrix rhs = add(matmul(f.Y.d(n - 1), w.s_at(n, f)), matmul(w.t_at(n + 1, f), f.X.d(n)));
    if (!(lhs == rhs)) return false;
  }
  return true;
}

std::optional<HomotopyWitness> homotopy_witness(const ChainMap& f, const ChainMap& g) {
  check(f.X == g.X && f.Y == g.Y, "homotopy between maps with different endpoints");
  const Complex& X = f.X;
  const Complex& Y = f.Y;
  BlockSystem sys(X.ring);
  std::map<int, int> hb;
  for (int n : joint_degrees(f))
    if (Y.rank(n - 1) > 0 && X.rank(n) > 0) hb[n] = sys.new_block(Y.rank(n - 1), X.rank(n));
  for (int n : joint_degrees(f)) {
    if (X.rank(n) == 0 || Y.rank(n) == 0) continue;
    int eq = sys.new_equation(sub(f.at(n), g.at(n)));
    if (hb.count(n)) sys.add_term_left(eq, Y.d(n - 1), hb[n]);
    if (hb.count(n + 1)) sys.add_term_right(eq, hb[n + 1], X.d(n));
  }
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  HomotopyWitness w;
  for (auto& [n, b] : hb)
    if (!(*sol)[b].is_zero()) w.h[n] = (*sol)[b];
  check(check_homotopy(f, g, w), "homotopy witness failed verification");
  return w;
}

std::optional<WeakHomotopyWitness> weak_homotopy_witness(const ChainMap& f, const ChainMap& g) {
  check(f.X == g.X && f.Y == g.Y, "weak homotopy between maps with different endpoints");
  const Complex& X = f.X;
  const Complex& Y = f.Y;
  BlockSystem sys(X.ring);
  std::map<int, int> sb, tb;
  for (int n : joint_degrees(f))
    if (Y.rank(n - 1) > 0 && X.rank(n) > 0) {
      sb[n] = sys.new_block(Y.rank(n - 1), X.rank(n));
      tb[n] = sys.new_block(Y.rank(n - 1), X.rank(n));
    }
  for (int n : joint_degrees(f)) {
    if (X.rank(n) == 0 || Y.rank(n) == 0) continue;
    int eq = sys.new_equation(sub(f.at(n), g.at(n)));
    if (sb.count(n)) sys.add_term_left(eq, Y.d(n - 1), sb[n]);
    if (tb.count(n + 1)) sys.add_term_right(eq, tb[n + 1], X.d(n));
  }
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  WeakHomotopyWitness w;
  for (auto& [n, b] : sb)
    if (!(*sol)[b].is_zero()) w.s[n] = (*sol)[b];
  for (auto& [n, b] : tb)
    if (!(*sol)[b].is_zero()) w.t[n] = (*sol)[b];
  check(check_weak_homotopy(f, g, w), "weak homotopy witness failed verification");
  return w;
}

std::optional<HomotopyWitness> null_homotopy(const ChainMap& f) {
  return homotopy_witness(f, zero_map(f.X, f.Y));
}

bool EquivalenceWitness::check() const {
  if (!(fwd.X == bwd.Y && fwd.Y == bwd.X)) return false;
  return check_homotopy(identity_map(fwd.X), compose(bwd, fwd), to_id_src) &&
         check_homotopy(identity_map(fwd.Y), compose(fwd, bwd), to_id_tgt);
}

// Unknowns: g : Y -> X plus both homotopies, solved jointly so that the
// found inverse is compatible with its own witnesses by construction.
std::optional<EquivalenceWitness> equivalence_witness(const ChainMap& f) {
  const Complex& X = f.X;
  const Complex& Y = f.Y;
  const Ring& R = X.ring;
  BlockSystem sys(R);
  std::map<int, int> gb, h1b, h2b;
  std::set<int> degs = joint_degrees(f);
  for (int n : degs) {
    if (Y.rank(n) > 0 && X.rank(n) > 0) gb[n] = sys.new_block(X.rank(n), Y.rank(n));
    if (X.rank(n - 1) > 0 && X.rank(n) > 0) h1b[n] = sys.new_block(X.rank(n - 1), X.rank(n));
    if (Y.rank(n - 1) > 0 && Y.rank(n) > 0) h2b[n] = sys.new_block(Y.rank(n - 1), Y.rank(n));
  }
  for (int n : degs) {
    // d_X g - g d_Y = 0
    if (X.rank(n + 1) > 0 && Y.rank(n) > 0) {
      int eq = sys.new_equation(Matrix(R, X.rank(n + 1), Y.rank(n)));
      if (gb.count(n)) sys.add_term_left(eq, X.d(n), gb[n]);
      if (gb.count(n + 1)) sys.add_term_right(eq, gb[n + 1], neg(Y.d(n)));
    }
    // g f + d h1 + h1 d = id_X
    if (X.rank(n) > 0) {
      int eq = sys.new_equation(Matrix::identity(R, X.rank(n)));
      if (gb.count(n) && Y.rank(n) > 0) sys.add_term(eq, Matrix::identity(R, X.rank(n)), gb[n], f.at(n));
      if (h1b.count(n)) sys.add_term_left(eq, X.d(n - 1), h1b[n]);
      if (h1b.count(n + 1)) sys.add_term_right(eq, h1b[n + 1], X.d(n));
    }
    // f g + d h2 + h2 d = id_Y
    if (Y.rank(n) > 0) {
      int eq = sys.new_equation(Matrix::identity(R, Y.rank(n)));
      if (gb.count(n) && X.rank(n) > 0) sys.add_term_left(eq, f.at(n), gb[n]);
      if (h2b.count(n)) sys.add_term_left(eq, Y.d(n - 1), h2b[n]);
      if (h2b.count(n + 1)) sys.add_term_right(eq, h2b[n + 1], Y.d(n));
    }
  }
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  EquivalenceWitness w;
  w.fwd = f;
  w.bwd = zero_map(Y, X);
  for (auto& [n, b] : gb) w.bwd.set(n, (*sol)[b]);
  for (auto& [n, b] : h1b)
    if (!(*sol)[b].is_zero()) w.to_id_src.h[n] = (*sol)[b];
  for (auto& [n, b] : h2b)
    if (!(*sol)[b].is_zero()) w.to_id_tgt.h[n] = (*sol)[b];
  w.bwd.validate();
  check(w.check(), "equivalence witness failed verification");
  return w;
}

std::optional<HomotopyWitness> contraction(const Complex& X) {
  return homotopy_witness(identity_map(X), zero_map(X, X));
}

// Degreewise bases: the complement C^{n-1} of the cocycles is chosen first,
// so B^n := d(C^{n-1}) is a basis of the coboundaries and the contraction
// sends d(c) back to c. All identities below hold exactly, not just up to
// rank counts, and are asserted before returning.
CohomologySplitting cohomology(const Complex& X) {
  check(X.ring.is_field(), "cohomology splitting requires a field");
  X.validate();
  const Ring& R = X.ring;
  CohomologySplitting out;
  out.H = Complex(R);
  out.proj = zero_map(X, out.H);
  out.sect = zero_map(out.H, X);
  if (X.is_empty()) return out;

  auto extend = [&](Matrix& M, const Matrix& cand) {
    // Appends the columns of cand that grow the column space of M.
    for (int j = 0; j < cand.cols; ++j) {
      Matrix col = column(cand, j);
      Matrix test = M.cols == 0 ? col : hstack(M, col);
      if (field_rank(test) > M.cols) M = test;
    }
  };

  int lo = X.min_degree(), hi = X.max_degree();
  std::map<int, Matrix> sectm, projm, hm;
  std::map<int, int> dims;
  Matrix Cprev(R, 0, 0);
  for (int n = lo; n <= hi; ++n) {
    int rn = X.rank(n);
    if (rn == 0) {
      Cprev = Matrix(R, 0, 0);
      continue;
    }
    Matrix B = Cprev.cols > 0 ? matmul(X.d(n - 1), Cprev) : Matrix(R, rn, 0);
    Matrix Z = kernel_basis(X.d(n));
    Matrix BH = B;
    extend(BH, Z);
    int bc = B.cols, hc = BH.cols - bc;
    Matrix P = BH;
    extend(P, Matrix::identity(R, rn));
    check(P.cols == rn, "basis completion failed");
    Matrix Pinv = *matrix_inverse(P);
    int cc = rn - bc - hc;
    if (hc > 0) {
      dims[n] = hc;
      sectm[n] = submatrix(BH, 0, rn, bc, bc + hc);
      projm[n] = submatrix(Pinv, bc, bc + hc, 0, rn);
    }
    if (bc > 0) hm[n] = matmul(Cprev, submatrix(Pinv, 0, bc, 0, rn));
    Cprev = cc > 0 ? submatrix(P, 0, rn, bc + hc, rn) : Matrix(R, rn, 0);
  }
  for (auto& [n, d] : dims) out.H.set_rank(n, d);
  out.proj = zero_map(X, out.H);
  out.sect = zero_map(out.H, X);
  for (auto& [n, m] : projm) out.proj.set(n, m);
  for (auto& [n, m] : sectm) out.sect.set(n, m);
  for (auto& [n, m] : hm)
    if (!m.is_zero()) out.htpy.h[n] = m;
  out.proj.validate();
  out.sect.validate();
  check(compose(out.proj, out.sect) == identity_map(out.H), "proj∘sect != id");
  check(check_homotopy(identity_map(X), compose(out.sect, out.proj), out.htpy),
        "cohomology contraction failed verification");
  return out;
}

std::map<int, int> degree_blocks(BlockSystem& sys, const Complex& A, const Complex& B) {
  std::map<int, int> out;
  for (auto& [n, r] : A.ranks)
    if (B.rank(n) > 0) out[n] = sys.new_block(B.rank(n), r);
  return out;
}

std::map<int, int> witness_blocks(BlockSystem& sys, const Complex& A, const Complex& B) {
  std::map<int, int> out;
  for (auto& [n, r] : A.ranks)
    if (B.rank(n - 1) > 0) out[n] = sys.new_block(B.rank(n - 1), r);
  return out;
}

void add_chain_map_constraints(BlockSystem& sys, const std::map<int, int>& blocks,
                               const Complex& A, const Complex& B) {
  for (auto& [n, r] : A.ranks) {
    if (B.rank(n + 1) == 0) continue;
    int eq = sys.new_equation(Matrix(A.ring, B.rank(n + 1), r));
    if (blocks.count(n)) sys.add_term_left(eq, B.d(n), blocks.at(n));
    if (blocks.count(n + 1)) sys.add_term_right(eq, blocks.at(n + 1), neg(A.d(n)));
  }
}

void add_homotopy_terms(BlockSystem& sys, int eq, int n, const std::map<int, int>& wit,
                        const Complex& A, const Complex& B, bool negate) {
  Matrix db = B.d(n - 1), da = A.d(n);
  if (negate) {
    db = neg(db);
    da = neg(da);
  }
  if (wit.count(n)) sys.add_term_left(eq, db, wit.at(n));
  if (wit.count(n + 1)) sys.add_term_right(eq, wit.at(n + 1), da);
}

ChainMap read_chain_map(const std::vector<Matrix>& sol, const std::map<int, int>& blocks,
                        const Complex& A, const Complex& B) {
  ChainMap f = zero_map(A, B);
  for (auto& [n, b] : blocks) f.set(n, sol[b]);
  return f;
}

HomotopyWitness read_witness(const std::vector<Matrix>& sol, const std::map<int, int>& wit) {
  HomotopyWitness w;
  for (auto& [n, b] : wit)
    if (!sol[b].is_zero()) w.h[n] = sol[b];
  return w;
}

std::map<int, int> cohomology_dims(const Complex& X) {
  check(X.ring.is_field(), "cohomology dimensions require a field");
  std::map<int, int> out;
  if (X.is_empty()) return out;
  for (int n = X.min_degree(); n <= X.max_degree(); ++n) {
    int rn = X.rank(n);
    if (rn == 0) continue;
    int z = rn - field_rank(X.d(n));
    int b = field_rank(X.d(n - 1));
    if (z - b > 0) out[n] = z - b;
  }
  return out;
}

}  // namespace wk
