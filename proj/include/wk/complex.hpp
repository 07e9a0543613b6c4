#pragma once

#include <map>
#include <vector>

#include "wk/matrix.hpp"
#include "wk/rng.hpp"

namespace wk {

// Bounded cochain complex of finite free modules. Only degrees of nonzero
// rank are stored; d(n) has shape rank(n+1) x rank(n) and is present exactly
// when both ranks are nonzero. Matrices act on column coordinate vectors.
struct Complex {
  Ring ring;
  std::map<int, int> ranks;
  std::map<int, Matrix> diffs;

  Complex() = default;
  explicit Complex(const Ring& R) : ring(R) {}

  int rank(int n) const;
  Matrix d(int n) const;  // zero matrix of the right shape when absent
  std::vector<int> support() const;
  bool is_empty() const { return ranks.empty(); }
  int min_degree() const;
  int max_degree() const;
  int total_rank() const;
  void set_rank(int n, int r);
  void set_diff(int n, const Matrix& m);
  void normalize();
  void validate() const;  // shapes and d∘d = 0
  bool operator==(const Complex&) const = default;
};

Complex zero_complex(const Ring& R);
Complex stalk(const Ring& R, int degree, int rank);
// Two-term complex: rank r in degree deg and degree deg+1, differential m.
Complex two_term(const Ring& R, int deg, const Matrix& m);
Complex shift(const Complex& X, int k);               // ([k]X)^n = X^{n+k}, d -> (-1)^k d
Complex negate_differentials(const Complex& X);       // the sign functor

struct ChainMap {
  Complex X, Y;  // source, target
  std::map<int, Matrix> comps;

  Matrix at(int n) const;
  void set(int n, const Matrix& m);
  void normalize();
  void validate() const;  // shapes and d_Y f = f d_X
  bool operator==(const ChainMap&) const = default;
};

ChainMap make_map(const Complex& X, const Complex& Y, std::map<int, Matrix> comps);
ChainMap identity_map(const Complex& X);
ChainMap zero_map(const Complex& X, const Complex& Y);
ChainMap compose(const ChainMap& g, const ChainMap& f);  // g after f
ChainMap cm_add(const ChainMap& f, const ChainMap& g);
ChainMap cm_sub(const ChainMap& f, const ChainMap& g);
ChainMap cm_neg(const ChainMap& f);
ChainMap cm_scale(const Rat& c, const ChainMap& f);
ChainMap shift_map(const ChainMap& f, int k);  // [k]f : [k]X -> [k]Y
ChainMap negate_diff_map(const ChainMap& f);   // same components between negated complexes

struct Cone {
  Complex C;     // N ⊕ [1]M with differential [[d_N, m],[0, -d_M]]
  ChainMap iota; // N -> C
  ChainMap pi;   // C -> [1]M
};
Cone cone(const ChainMap& m);

struct DirectSum {
  Complex S;
  ChainMap i1, i2;  // inclusions
  ChainMap p1, p2;  // projections
};
DirectSum direct_sum(const Complex& A, const Complex& B);

// Seeded generators used by the property suites. Differentials (and chain
// maps) are drawn uniformly from the exact solution space of their defining
// linear constraints, so they are valid over every supported ring.
Complex random_complex(Rng& rng, const Ring& R, int lo, int hi, int max_rank);
ChainMap random_chain_map(Rng& rng, const Complex& X, const Complex& Y);

}  // namespace wk
