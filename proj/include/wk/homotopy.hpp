#pragma once

#include <map>
#include <optional>

#include "wk/complex.hpp"
#include "wk/solve.hpp"

namespace wk {

// h^n : X^n -> Y^{n-1}, witnessing f - g = d_Y h + h d_X.
struct HomotopyWitness {
  std::map<int, Matrix> h;
  Matrix at(int n, const ChainMap& f) const;  // stored value or zero of right shape
};

// Independent s, t of the same shape as h, witnessing f - g = d_Y s + t d_X.
struct WeakHomotopyWitness {
  std::map<int, Matrix> s, t;
  Matrix s_at(int n, const ChainMap& f) const;
  Matrix t_at(int n, const ChainMap& f) const;
};

bool check_homotopy(const ChainMap& f, const ChainMap& g, const HomotopyWitness& w);
bool check_weak_homotopy(const ChainMap& f, const ChainMap& g, const WeakHomotopyWitness& w);

std::optional<HomotopyWitness> homotopy_witness(const ChainMap& f, const ChainMap& g);
std::optional<WeakHomotopyWitness> weak_homotopy_witness(const ChainMap& f, const ChainMap& g);

inline bool homotopic(const ChainMap& f, const ChainMap& g) {
  return homotopy_witness(f, g).has_value();
}
std::optional<HomotopyWitness> null_homotopy(const ChainMap& f);

// Homotopy-equivalence certificate: g∘f ≃ id_X and f∘g ≃ id_Y.
struct EquivalenceWitness {
  ChainMap fwd, bwd;
  HomotopyWitness to_id_src, to_id_tgt;
  bool check() const;
};
// Given f, searches for an inverse-up-to-homotopy together with its witnesses.
std::optional<EquivalenceWitness> equivalence_witness(const ChainMap& f);
// Witness that X is contractible (id_X ≃ 0).
std::optional<HomotopyWitness> contraction(const Complex& X);

// Field-only strict splitting of a complex into its cohomology stalks.
// proj∘sect = id_H on the nose; sect∘proj ≃ id_X via htpy.
struct CohomologySplitting {
  Complex H;  // zero differentials, rank dim H^n in degree n
  ChainMap proj;  // X -> H
  ChainMap sect;  // H -> X
  HomotopyWitness htpy;
  int dim(int n) const { return H.rank(n); }
};
CohomologySplitting cohomology(const Complex& X);

std::map<int, int> cohomology_dims(const Complex& X);  // field only

// BlockSystem plumbing shared by all certificate solvers. Unknown chain maps
// A -> B get one block of shape B.rank(n) x A.rank(n) per degree; unknown
// homotopies get B.rank(n-1) x A.rank(n).
std::map<int, int> degree_blocks(BlockSystem& sys, const Complex& A, const Complex& B);
std::map<int, int> witness_blocks(BlockSystem& sys, const Complex& A, const Complex& B);
void add_chain_map_constraints(BlockSystem& sys, const std::map<int, int>& blocks,
                               const Complex& A, const Complex& B);
// Adds ±(d_B∘k_n + k_{n+1}∘d_A) to an equation whose degree-n shape is
// B.rank(n) x A.rank(n).
void add_homotopy_terms(BlockSystem& sys, int eq, int n, const std::map<int, int>& wit,
                        const Complex& A, const Complex& B, bool negate);
ChainMap read_chain_map(const std::vector<Matrix>& sol, const std::map<int, int>& blocks,
                        const Complex& A, const Complex& B);
HomotopyWitness read_witness(const std::vector<Matrix>& sol, const std::map<int, int>& wit);

}  // namespace wk
