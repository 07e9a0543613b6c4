#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wk/triangles.hpp"
#include "wk/weights.hpp"

namespace wk {

// Weight-truncation octahedron at cut n for the standard weight structure:
// the two adjacent stupid-truncation triangles of X, the heart term
// w_n = X^n placed in degree n, and the two triangles relating them,
//
//   t_n  : w>=n+1 X --g_hi1--> X --k_n--> w<=n X --v_n--> [1] w>=n+1 X
//   t_n1 : w>=n   X --g_hi --> X --k_n1-> w<=n-1 X --v_n1-> [1] w>=n X
//   t_ge : w>=n+1 X --h_n--> w>=n X --e_n--> w_n --c_n--> [1] w>=n+1 X
//   t_le : w_n --a_n--> w<=n X --l_n--> w<=n-1 X --b_n--> [1] w_n
//
// Every square commutes strictly except ([1]h_n)∘v_n against v_n1∘l_n,
// which commutes up to the stored homotopy nabla.
struct OctahedronData {
  int cut = 0;
  Complex X;
  Complex w_hi1, w_hi, w_lo, w_lo1, w_n;  // w>=n+1, w>=n, w<=n, w<=n-1, heart term
  ChainMap g_hi1, k_n, v_n;
  ChainMap g_hi, k_n1, v_n1;
  ChainMap h_n, e_n, c_n;
  ChainMap a_n, l_n, b_n;
  TriangleCertificate t_n, t_n1, t_ge, t_le;
  HomotopyWitness nabla;  // ([1]h_n)∘v_n ≃ v_n1∘l_n
  bool verify() const;
};
OctahedronData octahedron_standard(const Complex& X, int n);

// Weight complex of X for the standard weight structure: X with all
// differentials negated. The composite b_{n+1}∘a_n of adjacent octahedra
// evaluates to this differential in each degree. Strictly functorial.
Complex wc_standard(const Complex& X);
ChainMap wc_standard_map(const ChainMap& f);

// Exhaustive lift analysis at one cut: every way of extending f across the
// truncation triangles at n assembles to a weight-complex candidate
// wc(X) -> wc(Y); any two candidates must be weakly homotopic, while plain
// homotopy can genuinely fail (the pairs where it does are recorded).
struct LiftEnumeration {
  bool ok = false;
  int cut = 0;
  long long kernel_dim = 0;     // assembled generators of the solution space
  long long combinations = 0;   // coefficient tuples enumerated
  std::vector<ChainMap> candidates;  // distinct assembled lifts wc(X) -> wc(Y)
  long long weak_pairs_checked = 0;
  std::vector<std::pair<int, int>> non_homotopic_pairs;  // indices into candidates
  std::string note;
};
LiftEnumeration enumerate_lifts_and_check(const ChainMap& f, int n,
                                          long long max_candidates = 1 << 16);

// Strong form: same data as wc_standard, and certified triangles are carried
// to certified anti-triangles (the image with connecting map negated is again
// a certified triangle).
Complex strong_wc_standard(const Complex& X);
ChainMap strong_wc_standard_map(const ChainMap& f);
CertifyResult strong_wc_triangle(const CandidateTriangle& t);

}  // namespace wk
