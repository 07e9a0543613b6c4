#include "wk/complex.hpp"

#include <algorithm>

#include "wk/solve.hpp"

namespace wk {

int Complex::rank(int n) const {
  auto it = ranks.find(n);
  return it == ranks.end() ? 0 : it->second;
}

Matrix Complex::d(int n) const {
  auto it = diffs.find(n);
  if (it != diffs.end()) return it->second;
  return Matrix(ring, rank(n + 1), rank(n));
}

std::vector<int> Complex::support() const {
  std::vector<int> out;
  for (auto& [n, r] : ranks) out.push_back(n);
  return out;
}

int Complex::min_degree() const {
  check(!ranks.empty(), "min_degree of empty complex");
  return ranks.begin()->first;
}

int Complex::max_degree() const {
  check(!ranks.empty(), "max_degree of empty complex");
  return ranks.rbegin()->first;
}

int Complex::total_rank() const {
  int t = 0;
  for (auto& [n, r] : ranks) t += r;
  return t;
}

void Complex::set_rank(int n, int r) {
  check(r >= 0, "negative rank");
  if (r == 0)
    ranks.erase(n);
  else
    ranks[n] = r;
}

void Complex::set_diff(int n, const Matrix& m) {
  check(m.rows == rank(n + 1) && m.cols == rank(n), "differential shape mismatch");
  if (m.is_zero())
    diffs.erase(n);
  else
    diffs[n] = m;
}

void Complex::normalize() {
  for (auto it = ranks.begin(); it != ranks.end();) {
    check(it->second >= 0, "negative rank");
    it = it->second == 0 ? ranks.erase(it) : std::next(it);
  }
  for (auto it = diffs.begin(); it != diffs.end();) {
    int n = it->first;
    if (rank(n) == 0 || rank(n + 1) == 0 || it->second.is_zero())
      it = diffs.erase(it);
    else
      ++it;
  }
}

void Complex::validate() const {
  for (auto& [n, r] : ranks) check(r > 0, "stored rank must be positive");
  for (auto& [n, m] : diffs) {
    check(m.ring == ring, "differential over wrong ring");
    check(m.rows == rank(n + 1) && m.cols == rank(n), "differential shape mismatch");
  }
  for (auto& [n, m] : diffs) {
    if (rank(n + 2) == 0) continue;
    check(matmul(d(n + 1), m).is_zero(), "d∘d != 0");
  }
}

Complex zero_complex(const Ring& R) { return Complex(R); }

Complex stalk(const Ring& R, int degree, int rank) {
  Complex X(R);
  X.set_rank(degree, rank);
  return X;
}

Complex two_term(const Ring& R, int deg, const Matrix& m) {
  Complex X(R);
  X.set_rank(deg, m.cols);
  X.set_rank(deg + 1, m.rows);
  if (m.rows > 0 && m.cols > 0) X.set_diff(deg, m);
  return X;
}

Complex shift(const Complex& X, int k) {
  Complex Y(X.ring);
  for (auto& [n, r] : X.ranks) Y.set_rank(n - k, r);
  bool flip = ((k % 2) + 2) % 2 == 1;
  for (auto& [n, m] : X.diffs) Y.set_diff(n - k, flip ? neg(m) : m);
  return Y;
}

Complex negate_differentials(const Complex& X) {
  Complex Y = X;
  for (auto& [n, m] : Y.diffs) m = neg(m);
  return Y;
}

Matrix ChainMap::at(int n) const {
  auto it = comps.find(n);
  if (it != comps.end()) return it->second;
  return Matrix(X.ring, Y.rank(n), X.rank(n));
}

void ChainMap::set(int n, const Matrix& m) {
  check(m.rows == Y.rank(n) && m.cols == X.rank(n), "chain map component shape mismatch");
  if (m.is_zero())
    comps.erase(n);
  else
    comps[n] = m;
}

void ChainMap::normalize() {
  for (auto it = comps.begin(); it != comps.end();) {
    int n = it->first;
    if (X.rank(n) == 0 || Y.rank(n) == 0 || it->second.is_zero())
      it = comps.erase(it);
    else
      ++it;
  }
}

void ChainMap::validate() const {
  check(X.ring == Y.ring, "chain map between different rings");
  X.validate();
  Y.validate();
  for (auto& [n, m] : comps)
    check(m.rows == Y.rank(n) && m.cols == X.rank(n), "chain map component shape mismatch");
  std::vector<int> degs;
  for (auto& [n, r] : X.ranks) degs.push_back(n);
  for (auto& [n, r] : Y.ranks) degs.push_back(n);
  for (int n : degs) {
    if (X.rank(n) == 0 || Y.rank(n + 1) == 0) continue;
    check(matmul(Y.d(n), at(n)) == matmul(at(n + 1), X.d(n)), "does not commute with d");
  }
}

ChainMap make_map(const Complex& X, const Complex& Y, std::map<int, Matrix> comps) {
  ChainMap f;
  f.X = X;
  f.Y = Y;
  f.comps = std::move(comps);
  f.normalize();
  return f;
}

ChainMap identity_map(const Complex& X) {
  ChainMap f;
  f.X = X;
  f.Y = X;
  for (auto& [n, r] : X.ranks) f.comps.emplace(n, Matrix::identity(X.ring, r));
  return f;
}

ChainMap zero_map(const Complex& X, const Complex& Y) {
  ChainMap f;
  f.X = X;
  f.Y = Y;
  return f;
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
  check(f.Y == g.X, "composition mismatch");
  ChainMap h;
  h.X = f.X;
  h.Y = g.Y;
  for (auto& [n, r] : f.X.ranks) {
    if (g.Y.rank(n) == 0) continue;
    h.comps.emplace(n, matmul(g.at(n), f.at(n)));
  }
  h.normalize();
  return h;
}

static ChainMap combine(const ChainMap& f, const ChainMap& g, bool subtract) {
  check(f.X == g.X && f.Y == g.Y, "chain map arithmetic shape mismatch");
  ChainMap h;
  h.X = f.X;
  h.Y = f.Y;
  for (auto& [n, r] : f.X.ranks) {
    if (f.Y.rank(n) == 0) continue;
    h.comps.emplace(n, subtract ? sub(f.at(n), g.at(n)) : add(f.at(n), g.at(n)));
  }
  h.normalize();
  return h;
}

ChainMap cm_add(const ChainMap& f, const ChainMap& g) { return combine(f, g, false); }
ChainMap cm_sub(const ChainMap& f, const ChainMap& g) { return combine(f, g, true); }

ChainMap cm_neg(const ChainMap& f) {
  ChainMap h = f;
  for (auto& [n, m] : h.comps) m = neg(m);
  return h;
}

ChainMap cm_scale(const Rat& c, const ChainMap& f) {
  ChainMap h = f;
  for (auto& [n, m] : h.comps) m = scalar_mul(c, m);
  h.normalize();
  return h;
}

ChainMap shift_map(const ChainMap& f, int k) {
  ChainMap h;
  h.X = shift(f.X, k);
  h.Y = shift(f.Y, k);
  for (auto& [n, m] : f.comps) h.comps.emplace(n - k, m);
  return h;
}

ChainMap negate_diff_map(const ChainMap& f) {
  ChainMap h = f;
  h.X = negate_differentials(f.X);
  h.Y = negate_differentials(f.Y);
  return h;
}

Cone cone(const ChainMap& m) {
  m.validate();
  const Complex& Mc = m.X;
  const Complex& N = m.Y;
  const Ring& R = N.ring;
  Complex C(R);
  for (auto& [n, r] : N.ranks) C.set_rank(n, C.rank(n) + r);
  for (auto& [n, r] : Mc.ranks) C.set_rank(n - 1, C.rank(n - 1) + r);
  for (auto& [n, r] : C.ranks) {
    if (C.rank(n + 1) == 0) continue;
    Matrix dn = block2x2(N.d(n), m.at(n + 1), Matrix(R, Mc.rank(n + 2), N.rank(n)),
                         neg(Mc.d(n + 1)));
    C.set_diff(n, dn);
  }
  Cone out;
  out.C = C;
  out.iota.X = N;
  out.iota.Y = C;
  for (auto& [n, r] : N.ranks) {
    Matrix m0 = vstack(Matrix::identity(R, r), Matrix(R, Mc.rank(n + 1), r));
    out.iota.set(n, m0);
  }
  out.pi.X = C;
  out.pi.Y = shift(Mc, 1);
  for (auto& [n, r] : Mc.ranks) {
    Matrix m0 = hstack(Matrix(R, r, N.rank(n - 1)), Matrix::identity(R, r));
    out.pi.set(n - 1, m0);
  }
  return out;
}

DirectSum direct_sum(const Complex& A, const Complex& B) {
  check(A.ring == B.ring, "direct sum over different rings");
  const Ring& R = A.ring;
  Complex S(R);
  for (auto& [n, r] : A.ranks) S.set_rank(n, S.rank(n) + r);
  for (auto& [n, r] : B.ranks) S.set_rank(n, S.rank(n) + r);
  for (auto& [n, r] : S.ranks) {
    if (S.rank(n + 1) == 0) continue;
    Matrix dn = block2x2(A.d(n), Matrix(R, A.rank(n + 1), B.rank(n)),
                         Matrix(R, B.rank(n + 1), A.rank(n)), B.d(n));
    S.set_diff(n, dn);
  }
  DirectSum out;
  out.S = S;
  out.i1.X = A;
  out.i1.Y = S;
  out.i2.X = B;
  out.i2.Y = S;
  out.p1.X = S;
  out.p1.Y = A;
  out.p2.X = S;
  out.p2.Y = B;
  for (auto& [n, r] : S.ranks) {
    int ra = A.rank(n), rb = B.rank(n);
    Matrix ia = vstack(Matrix::identity(R, ra), Matrix(R, rb, ra));
    Matrix ib = vstack(Matrix(R, ra, rb), Matrix::identity(R, rb));
    if (ra > 0) {
      out.i1.set(n, ia);
      out.p1.set(n, transpose(ia));
    }
    if (rb > 0) {
      out.i2.set(n, ib);
      out.p2.set(n, transpose(ib));
    }
  }
  return out;
}

// Rows of d^n must multiply d^{n-1} to zero, i.e. lie in ker((d^{n-1})^T).
// Drawing random combinations of kernel generators keeps d∘d = 0 exact.
Complex random_complex(Rng& rng, const Ring& R, int lo, int hi, int max_rank) {
  check(lo <= hi && max_rank >= 1, "bad random_complex parameters");
  Complex X(R);
  for (int n = lo; n <= hi; ++n) X.set_rank(n, (int)rng.below((uint64_t)max_rank + 1));
  for (int n = lo; n < hi; ++n) {
    int rows = X.rank(n + 1), cols = X.rank(n);
    if (rows == 0 || cols == 0) continue;
    Matrix prev = X.d(n - 1);
    Matrix dn(R, rows, cols);
    if (n == lo || prev.cols == 0) {
      dn = random_matrix(rng, R, rows, cols, 3);
    } else {
      Matrix K = kernel_basis(transpose(prev));
      if (K.cols > 0) {
        Matrix C = random_matrix(rng, R, rows, K.cols, 3);
        dn = matmul(C, transpose(K));
      }
    }
    X.set_diff(n, dn);
  }
  X.normalize();
  X.validate();
  return X;
}

ChainMap random_chain_map(Rng& rng, const Complex& X, const Complex& Y) {
  check(X.ring == Y.ring, "random_chain_map over different rings");
  const Ring& R = X.ring;
  BlockSystem sys(R);
  std::map<int, int> blocks;
  for (auto& [n, r] : X.ranks)
    if (Y.rank(n) > 0) blocks[n] = sys.new_block(Y.rank(n), r);
  for (auto& [n, r] : X.ranks) {
    if (Y.rank(n + 1) == 0) continue;
    int eq = sys.new_equation(Matrix(R, Y.rank(n + 1), r));
    if (blocks.count(n)) sys.add_term_left(eq, Y.d(n), blocks[n]);
    if (blocks.count(n + 1)) sys.add_term_right(eq, blocks[n + 1], neg(X.d(n)));
  }
  auto all = sys.solve_all();
  check(all.solvable, "homogeneous system must be solvable");
  ChainMap f = zero_map(X, Y);
  for (auto& gen : all.kernel_gens) {
    Rat c = random_scalar(rng, R, 3);
    int bi = 0;
    for (auto& [n, b] : blocks) {
      Matrix piece = scalar_mul(c, gen[b]);
      f.set(n, add(f.at(n), piece));
      (void)bi;
    }
  }
  f.normalize();
  f.validate();
  return f;
}

}  // namespace wk
