#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <utility>

#include "wk/weight_complex.hpp"

using namespace wk;

namespace {

const Ring GF2 = *Ring::parse("gf2");
const Ring GF3 = *Ring::parse("gf3");
const Ring QQ = *Ring::parse("q");
const Ring ZZ = *Ring::parse("z");
const Ring Z4 = *Ring::parse("z4");

Complex mod4_two_term() { return two_term(Z4, 0, Matrix::from(Z4, {{2}})); }

// Index of the candidate whose two components are the 1x1 matrices x and y.
int find_xy(const LiftEnumeration& L, long long x, long long y) {
  Matrix mx = Matrix::from(Z4, {{x}});
  Matrix my = Matrix::from(Z4, {{y}});
  for (size_t i = 0; i < L.candidates.size(); ++i)
    if (L.candidates[i].at(0) == mx && L.candidates[i].at(1) == my)
      return static_cast<int>(i);
  return -1;
}

bool has_pair(const LiftEnumeration& L, int a, int b) {
  if (a > b) std::swap(a, b);
  for (auto [i, j] : L.non_homotopic_pairs)
    if (i == a && j == b) return true;
  return false;
}

}  // namespace

TEST_CASE("octahedron: stalk complexes give degenerate data") {
  Complex X = stalk(GF3, 2, 2);
  for (int n = 0; n <= 4; ++n) {
    OctahedronData O = octahedron_standard(X, n);
    CHECK(O.verify());
    if (n == 2) {
      CHECK(O.w_n == X);
      CHECK(O.w_hi1.is_empty());
      CHECK(O.w_lo1.is_empty());
      CHECK(O.w_hi == X);
      CHECK(O.w_lo == X);
      CHECK(O.e_n.at(2) == Matrix::identity(GF3, 2));
      CHECK(O.a_n.at(2) == Matrix::identity(GF3, 2));
    } else {
      CHECK(O.w_n.is_empty());
    }
  }
}

TEST_CASE("octahedron: pinned mod-4 example at cut zero") {
  Complex X = mod4_two_term();
  OctahedronData O = octahedron_standard(X, 0);
  CHECK(O.verify());
  CHECK(O.w_n == stalk(Z4, 0, 1));
  CHECK(O.w_hi1 == stalk(Z4, 1, 1));
  CHECK(O.w_hi == X);
  CHECK(O.w_lo == stalk(Z4, 0, 1));
  CHECK(O.w_lo1.is_empty());
  // Connecting maps carry the negated differential, and -2 = 2 mod 4.
  CHECK(O.v_n.at(0) == Matrix::from(Z4, {{2}}));
  CHECK(O.c_n.at(0) == Matrix::from(Z4, {{2}}));
  CHECK(O.e_n.at(0) == Matrix::identity(Z4, 1));
  CHECK(O.a_n.at(0) == Matrix::identity(Z4, 1));
  CHECK(O.g_hi1.at(1) == Matrix::identity(Z4, 1));
}

TEST_CASE("octahedron: random complexes verify across rings and cuts") {
  Rng root(20260711);
  int built = 0;
  for (Ring R : {GF2, GF3, QQ, ZZ, Z4}) {
    for (int rep = 0; rep < 4; ++rep) {
      Rng rng = root.child(31 * rep + R.modulus + (R.is_field() ? 7 : 0));
      Complex X = random_complex(rng, R, -2, 2, 3);
      int lo = X.is_empty() ? 0 : X.min_degree() - 1;
      int hi = X.is_empty() ? 0 : X.max_degree() + 1;
      for (int n = lo; n <= hi; ++n) {
        OctahedronData O = octahedron_standard(X, n);
        CHECK(O.verify());
        ++built;
      }
    }
  }
  CHECK(built >= 60);
}

TEST_CASE("octahedron: composite differential matches the sign functor") {
  Rng root(404);
  for (Ring R : {GF3, ZZ, Z4}) {
    for (int rep = 0; rep < 4; ++rep) {
      Rng rng = root.child(17 * rep + R.modulus);
      Complex X = random_complex(rng, R, -1, 2, 3);
      Complex S = wc_standard(X);
      for (int n : X.support()) {
        OctahedronData On = octahedron_standard(X, n);
        OctahedronData On1 = octahedron_standard(X, n + 1);
        // b^{n+1} ∘ a^n lands the heart term in the shifted next heart term;
        // its only component is the weight-complex differential.
        ChainMap D = compose(On1.b_n, On.a_n);
        CHECK(D.at(n) == S.d(n));
      }
    }
  }
}

TEST_CASE("weight complex: objectwise values and strict functoriality") {
  // Characteristic 2: negation is the identity.
  Rng rng(5150);
  Complex A = random_complex(rng, GF2, -2, 2, 3);
  CHECK(wc_standard(A) == A);

  Complex X = mod4_two_term();
  CHECK(wc_standard(X) == X);  // -2 = 2 mod 4
  CHECK(wc_standard(zero_complex(QQ)) == zero_complex(QQ));

  for (Ring R : {GF3, QQ, ZZ, Z4}) {
    Rng r2 = rng.child(R.modulus + (R.is_field() ? 3 : 0));
    Complex B = random_complex(r2, R, -2, 2, 3);
    Complex S = wc_standard(B);
    S.validate();
    CHECK(S.support() == B.support());
    CHECK(wc_standard(S) == B);
    CHECK(wc_standard(shift(B, 1)) == shift(wc_standard(B), 1));
    CHECK(wc_standard(shift(B, -2)) == shift(wc_standard(B), -2));

    Complex C = random_complex(r2, R, -1, 1, 2);
    Complex D = random_complex(r2, R, -1, 1, 2);
    ChainMap f = random_chain_map(r2, B, C);
    ChainMap g = random_chain_map(r2, C, D);
    wc_standard_map(f).validate();
    CHECK(wc_standard_map(compose(g, f)) == compose(wc_standard_map(g), wc_standard_map(f)));
    CHECK(wc_standard_map(identity_map(B)) == identity_map(wc_standard(B)));
  }
}

TEST_CASE("lift enumeration: pinned mod-4 example") {
  Complex X = mod4_two_term();
  LiftEnumeration L = enumerate_lifts_and_check(zero_map(X, X), 0);
  REQUIRE(L.ok);
  CHECK(L.cut == 0);
  REQUIRE(L.candidates.size() == 4);
  CHECK(L.weak_pairs_checked == 6);

  int c00 = find_xy(L, 0, 0), c02 = find_xy(L, 0, 2);
  int c20 = find_xy(L, 2, 0), c22 = find_xy(L, 2, 2);
  REQUIRE(c00 >= 0);
  REQUIRE(c02 >= 0);
  REQUIRE(c20 >= 0);
  REQUIRE(c22 >= 0);

  // Weak homotopy holds for every pair, plain homotopy only along the
  // diagonal matches.
  CHECK(L.non_homotopic_pairs.size() == 4);
  CHECK(has_pair(L, c00, c20));
  CHECK(has_pair(L, c00, c02));
  CHECK(has_pair(L, c20, c22));
  CHECK(has_pair(L, c02, c22));
  CHECK(!has_pair(L, c00, c22));
  CHECK(!has_pair(L, c20, c02));
}

TEST_CASE("lift enumeration: identity map recovers the identity lift") {
  Complex X = mod4_two_term();
  LiftEnumeration L = enumerate_lifts_and_check(identity_map(X), 0);
  REQUIRE(L.ok);
  ChainMap idS = identity_map(wc_standard(X));
  bool found = false;
  for (const ChainMap& c : L.candidates) found = found || c == idS;
  CHECK(found);
  CHECK(L.candidates.size() == 4);
}

TEST_CASE("lift enumeration: random finite-field instances stay weakly homotopic") {
  Rng root(90210);
  int nonzero = 0;
  for (int rep = 0; rep < 6; ++rep) {
    Rng rng = root.child(rep);
    Ring R = rep % 3 == 2 ? GF3 : GF2;
    Complex X = random_complex(rng, R, 0, 1, 2);
    Complex Y = random_complex(rng, R, 0, 1, 2);
    ChainMap f = random_chain_map(rng, X, Y);
    LiftEnumeration L = enumerate_lifts_and_check(f, 0, 1 << 20);
    REQUIRE(L.ok);
    CHECK(L.candidates.size() >= 1);
    for (const ChainMap& c : L.candidates) c.validate();
    if (L.candidates.size() > 1) ++nonzero;
  }
  CHECK(nonzero >= 1);
}

TEST_CASE("lift enumeration: infinite rings are refused") {
  for (Ring R : {QQ, ZZ}) {
    Complex X = stalk(R, 0, 1);
    LiftEnumeration L = enumerate_lifts_and_check(identity_map(X), 0);
    CHECK(!L.ok);
    CHECK(L.note.find("finite") != std::string::npos);
    CHECK(L.candidates.empty());
  }
}

TEST_CASE("lift enumeration: candidate bound is enforced") {
  Complex X = mod4_two_term();
  LiftEnumeration L = enumerate_lifts_and_check(zero_map(X, X), 0, 3);
  CHECK(!L.ok);
  CHECK(L.note.find("bound exceeded") != std::string::npos);
}

TEST_CASE("strong weight complex: object and map data match the weak functor") {
  Rng rng(808);
  Complex X = random_complex(rng, ZZ, -1, 2, 3);
  CHECK(strong_wc_standard(X) == wc_standard(X));
  ChainMap f = random_chain_map(rng, X, X);
  CHECK(strong_wc_standard_map(f) == wc_standard_map(f));
}

TEST_CASE("strong weight complex: cone triangles become certified anti-triangles") {
  Rng root(314159);
  int done = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Rng rng = root.child(rep);
    Ring R = rep < 50 ? GF2 : GF3;
    Complex X = random_complex(rng, R, -1, 1, 2);
    Complex Y = random_complex(rng, R, -1, 1, 2);
    ChainMap m = random_chain_map(rng, X, Y);
    TriangleCertificate tc = cone_certificate(m);
    CertifyResult r = strong_wc_triangle(tc.t);
    CHECK(r.status == CertifyStatus::Certified);
    ++done;
  }
  CHECK(done == 100);
}

TEST_CASE("strong weight complex: split triangles pass with zero connecting map") {
  Rng root(27182);
  for (Ring R : {GF2, GF3, QQ}) {
    Rng rng = root.child(R.modulus);
    Complex X = random_complex(rng, R, 0, 1, 2);
    Complex Z = random_complex(rng, R, 0, 1, 2);
    DirectSum ds = direct_sum(X, Z);
    auto cand = make_candidate(X, ds.S, Z, ds.i1, ds.p2, zero_map(Z, shift(X, 1)));
    REQUIRE(cand.has_value());
    CertifyResult r = strong_wc_triangle(*cand);
    CHECK(r.status == CertifyStatus::Certified);
  }
}

TEST_CASE("strong weight complex: images that are not triangles are rejected") {
  Complex X = stalk(GF2, 0, 1);
  CandidateTriangle t;
  t.X = X;
  t.Y = X;
  t.Z = X;
  t.u = identity_map(X);
  t.v = identity_map(X);
  t.w = zero_map(X, shift(X, 1));
  CertifyResult r = strong_wc_triangle(t);
  CHECK(r.status == CertifyStatus::NotTriangle);
}
