#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "wk/homotopy.hpp"

using namespace wk;

namespace {

Complex gf2_pair(int r0, int r1, uint64_t seed) {
  Rng rng(seed);
  return random_complex(rng, Ring::gf(2), 0, 1, std::max(r0, r1));
}

// Exhaustive GF(2) oracle: tries every homotopy candidate bit pattern.
bool brute_force_homotopic(const ChainMap& f, const ChainMap& g) {
  const Complex& X = f.X;
  const Complex& Y = f.Y;
  std::vector<std::pair<int, std::pair<int, int>>> shapes;
  int total = 0;
  std::set<int> degs;
  for (auto& [n, r] : X.ranks) degs.insert(n);
  for (auto& [n, r] : Y.ranks) degs.insert(n);
  for (int n : degs) {
    int rows = Y.rank(n - 1), cols = X.rank(n);
    if (rows > 0 && cols > 0) {
      shapes.push_back({n, {rows, cols}});
      total += rows * cols;
    }
  }
  REQUIRE(total <= 20);
  for (uint64_t mask = 0; mask < (uint64_t(1) << total); ++mask) {
    HomotopyWitness w;
    int bit = 0;
    for (auto& [n, sh] : shapes) {
      Matrix m(X.ring, sh.first, sh.second);
      for (int i = 0; i < sh.first; ++i)
        for (int j = 0; j < sh.second; ++j) m.at(i, j) = Rat((mask >> bit++) & 1);
      if (!m.is_zero()) w.h[n] = m;
    }
    if (check_homotopy(f, g, w)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("shift and negate identities") {
  Rng rng(11);
  for (auto R : {Ring::gf(2), Ring::integers(), Ring::zmod(4)}) {
    Complex X = random_complex(rng, R, -1, 2, 3);
    CHECK(shift(shift(X, 1), -1) == X);
    CHECK(shift(X, 0) == X);
    CHECK(negate_differentials(negate_differentials(X)) == X);
    // [1] after sign functor, then sign functor again, is plain [1] on data.
    CHECK(negate_differentials(shift(negate_differentials(X), 1)) == shift(X, 1));
    Complex S2 = shift(X, 2);
    for (auto& [n, m] : S2.diffs) CHECK(m == X.d(n + 2));
    shift(X, 3).validate();
  }
}

TEST_CASE("cone shapes, d^2, and triangle maps") {
  Rng rng(23);
  for (auto R : {Ring::gf(3), Ring::integers(), Ring::zmod(6)}) {
    for (int it = 0; it < 10; ++it) {
      Complex M = random_complex(rng, R, 0, 2, 3);
      Complex N = random_complex(rng, R, 0, 2, 3);
      ChainMap f = random_chain_map(rng, M, N);
      Cone c = cone(f);
      c.C.validate();
      c.iota.validate();
      c.pi.validate();
      for (auto& [n, r] : c.C.ranks) CHECK(r == N.rank(n) + M.rank(n + 1));
      CHECK(compose(c.pi, c.iota) == zero_map(N, shift(M, 1)));
    }
  }
}

TEST_CASE("direct sum laws") {
  Rng rng(31);
  Ring R = Ring::zmod(4);
  Complex A = random_complex(rng, R, 0, 2, 3);
  Complex B = random_complex(rng, R, 1, 3, 3);
  DirectSum s = direct_sum(A, B);
  s.S.validate();
  CHECK(compose(s.p1, s.i1) == identity_map(A));
  CHECK(compose(s.p2, s.i2) == identity_map(B));
  CHECK(compose(s.p1, s.i2) == zero_map(B, A));
  CHECK(cm_add(compose(s.i1, s.p1), compose(s.i2, s.p2)) == identity_map(s.S));
}

TEST_CASE("homotopy witness solver vs exhaustive GF(2) oracle") {
  int seen_yes = 0, seen_no = 0;
  for (uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed * 7 + 1);
    Complex X = gf2_pair(2, 2, seed * 2 + 100);
    Complex Y = gf2_pair(2, 2, seed * 2 + 101);
    if (Y.rank(-1) * X.rank(0) + Y.rank(0) * X.rank(1) > 20) continue;
    ChainMap f = random_chain_map(rng, X, Y);
    ChainMap g = random_chain_map(rng, X, Y);
    bool oracle = brute_force_homotopic(f, g);
    auto wit = homotopy_witness(f, g);
    CHECK(oracle == wit.has_value());
    if (wit) {
      CHECK(check_homotopy(f, g, *wit));
      ++seen_yes;
    } else {
      ++seen_no;
    }
  }
  CHECK(seen_yes > 0);
  CHECK(seen_no > 0);
}

TEST_CASE("frozen weakly-but-not-strictly homotopic pair over Z/4") {
  Ring R = Ring::zmod(4);
  Complex X = two_term(R, 0, Matrix::from(R, {{2}}));
  ChainMap f = zero_map(X, X);
  ChainMap g = zero_map(X, X);
  g.set(0, Matrix::from(R, {{2}}));
  g.validate();
  CHECK(!homotopy_witness(f, g).has_value());
  auto w = weak_homotopy_witness(f, g);
  REQUIRE(w.has_value());
  CHECK(check_weak_homotopy(f, g, *w));
}

TEST_CASE("homotopy is a congruence for composition") {
  Rng rng(47);
  for (auto R : {Ring::gf(2), Ring::zmod(4), Ring::integers()}) {
    for (int it = 0; it < 5; ++it) {
      Complex X = random_complex(rng, R, 0, 2, 2);
      Complex Y = random_complex(rng, R, 0, 2, 2);
      Complex Z = random_complex(rng, R, 0, 2, 2);
      ChainMap f = random_chain_map(rng, X, Y);
      CHECK(homotopic(f, f));
      // Perturb f by the boundary of a random degree -1 map: homotopic by construction.
      ChainMap g = f;
      std::map<int, Matrix> smap;
      for (auto& [n, r] : X.ranks)
        if (Y.rank(n - 1) > 0) smap[n] = random_matrix(rng, R, Y.rank(n - 1), r, 3);
      HomotopyWitness w;
      for (auto& [n, m] : smap)
        if (!m.is_zero()) w.h[n] = m;
      for (auto& [n, r] : X.ranks) {
        if (Y.rank(n) == 0) continue;
        Matrix delta = add(matmul(Y.d(n - 1), w.at(n, f)), matmul(w.at(n + 1, f), X.d(n)));
        g.set(n, sub(g.at(n), delta));
      }
      g.validate();
      CHECK(check_homotopy(f, g, w));
      CHECK(homotopic(f, g));
      ChainMap u = random_chain_map(rng, Y, Z);
      CHECK(homotopic(compose(u, f), compose(u, g)));
      ChainMap v = random_chain_map(rng, Z, X);
      CHECK(homotopic(compose(f, v), compose(g, v)));
    }
  }
}

TEST_CASE("cone of identity is contractible, cone rotation is an equivalence") {
  Rng rng(53);
  for (auto R : {Ring::gf(2), Ring::integers(), Ring::zmod(4)}) {
    Complex M = random_complex(rng, R, 0, 2, 2);
    Complex N = random_complex(rng, R, 0, 2, 2);
    ChainMap f = random_chain_map(rng, M, N);
    CHECK(contraction(cone(identity_map(M)).C).has_value());
    // Projection Cone(iota_f) -> [1]M is a homotopy equivalence.
    Cone c1 = cone(f);
    Cone c2 = cone(c1.iota);
    ChainMap proj = zero_map(c2.C, shift(M, 1));
    for (auto& [n, r] : shift(M, 1).ranks) {
      Matrix m(R, r, c2.C.rank(n));
      for (int i = 0; i < r; ++i) m.at(i, N.rank(n) + i) = R.reduce(Rat(1));
      proj.set(n, m);
    }
    proj.validate();
    auto eq = equivalence_witness(proj);
    REQUIRE(eq.has_value());
    CHECK(eq->check());
  }
}

TEST_CASE("inclusion into sum with contractible summand is an equivalence") {
  Rng rng(59);
  for (auto R : {Ring::gf(5), Ring::zmod(6), Ring::integers()}) {
    Complex X = random_complex(rng, R, 0, 2, 2);
    Complex A = cone(identity_map(random_complex(rng, R, 0, 1, 2))).C;
    DirectSum s = direct_sum(X, A);
    auto eq = equivalence_witness(s.i1);
    REQUIRE(eq.has_value());
    CHECK(eq->check());
  }
}

TEST_CASE("cohomology splitting frozen examples") {
  Ring F2 = Ring::gf(2);
  // Identity two-term complex: no cohomology.
  Complex C1 = two_term(F2, 0, Matrix::from(F2, {{1}}));
  auto s1 = cohomology(C1);
  CHECK(s1.H.is_empty());
  // Stalk: cohomology is itself.
  Complex C2 = stalk(F2, 3, 2);
  auto s2 = cohomology(C2);
  CHECK(s2.H == C2);
  CHECK(compose(s2.sect, s2.proj) == identity_map(C2));
  // Rank-2 -> rank-1 surjection: one-dimensional kernel in degree 0.
  Complex C3 = two_term(F2, 0, Matrix::from(F2, {{1, 1}}));
  auto s3 = cohomology(C3);
  CHECK(s3.dim(0) == 1);
  CHECK(s3.dim(1) == 0);
  // Over Q, multiplication by 2 is invertible.
  Ring Q = Ring::rationals();
  auto s4 = cohomology(two_term(Q, 0, Matrix::from(Q, {{2}})));
  CHECK(s4.H.is_empty());
}

TEST_CASE("cohomology splitting seeded suite") {
  for (auto R : {Ring::gf(2), Ring::gf(3), Ring::gf(5), Ring::rationals()}) {
    Rng rng(1000 + (uint64_t)R.modulus);
    for (int it = 0; it < 25; ++it) {
      Complex X = random_complex(rng, R, -2, 3, 3);
      auto s = cohomology(X);  // internal assertions cover the witness identities
      auto dims = cohomology_dims(X);
      for (auto& [n, d] : dims) CHECK(s.dim(n) == d);
      for (auto& [n, d] : s.H.ranks) CHECK(dims[n] == d);
      // Euler characteristic is homotopy invariant.
      long long chi_x = 0, chi_h = 0;
      for (auto& [n, r] : X.ranks) chi_x += (n % 2 == 0 ? r : -r);
      for (auto& [n, r] : s.H.ranks) chi_h += (n % 2 == 0 ? r : -r);
      CHECK(chi_x == chi_h);
    }
  }
}

TEST_CASE("seeded generators are deterministic and valid") {
  for (auto R : {Ring::gf(2), Ring::gf(3), Ring::rationals(), Ring::integers(), Ring::zmod(4),
                 Ring::zmod(6)}) {
    Rng a(77), b(77);
    Complex X1 = random_complex(a, R, -1, 3, 3);
    Complex X2 = random_complex(b, R, -1, 3, 3);
    CHECK(X1 == X2);
    X1.validate();
    Complex Y = random_complex(a, R, 0, 2, 3);
    ChainMap f = random_chain_map(a, X1, Y);
    f.validate();
  }
}
