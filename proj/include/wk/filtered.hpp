#pragma once
// Filtered complexes over a small commutative ring: a based complex together
// with one filtration level per generator.  Differential entries may only
// keep or raise the level, so the level-p-and-above generators span a
// subcomplex for every p.  On top of the model sit the associated graded
// functor gr, the level shift s with its natural map alpha, the forgetful
// functor omega, level truncations sigma, the associated-graded complex
// functor c, lifts of plain complexes, and the cone-of-alpha construction.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wk/complex.hpp"
#include "wk/homotopy.hpp"
#include "wk/rng.hpp"
#include "wk/triangles.hpp"
#include "wk/weights.hpp"

namespace wk {

struct FilteredComplex {
  Complex base;
  // levels[n][j] is the level of the j-th degree-n generator; keys match
  // base.ranks after normalize().
  std::map<int, std::vector<int>> levels;

  FilteredComplex() = default;
  explicit FilteredComplex(const Ring& R) : base(R) {}

  const Ring& ring() const { return base.ring; }
  int rank(int n) const { return base.rank(n); }
  int level(int n, int j) const;
  bool has_generators() const { return !base.is_empty(); }
  int min_level() const;  // requires generators
  int max_level() const;
  std::set<int> level_support() const;  // levels carried by at least one generator

  void normalize();       // normalizes the base and drops level rows for empty degrees
  void validate() const;  // base validity, level alignment, level-triangular differential
  bool operator==(const FilteredComplex&) const = default;
};

FilteredComplex make_filtered(const Complex& base, const std::map<int, std::vector<int>>& levels);
FilteredComplex filtered_zero(const Ring& R);
// All levels zero: the trivial filtration on a plain complex.
FilteredComplex i_trivial(const Complex& L);
// Level of every degree-p generator is p.  gr^p is then a stalk in degree p,
// so the lift is pure-diagonal over any ring.
FilteredComplex stupid_lift(const Complex& Y);
// Degree shift: base = shift(base, k), level rows re-keyed the same way.
FilteredComplex shift_filtered(const FilteredComplex& X, int k);

// A chain map whose matrix entries never lower the level.
struct FilteredMap {
  FilteredComplex X, Y;  // source and target with their filtrations
  ChainMap f;            // between the bases

  void normalize();
  void validate() const;
  bool operator==(const FilteredMap&) const = default;
};

FilteredMap make_filtered_map(const FilteredComplex& X, const FilteredComplex& Y,
                              const std::map<int, Matrix>& comps);
FilteredMap filtered_identity(const FilteredComplex& X);
FilteredMap filtered_zero_map(const FilteredComplex& X, const FilteredComplex& Y);
FilteredMap fcompose(const FilteredMap& g, const FilteredMap& f);
FilteredMap fadd(const FilteredMap& f, const FilteredMap& g);
FilteredMap fneg(const FilteredMap& f);

// Associated graded: the exactly-level-n generators with the level-preserving
// differential block.  A genuine complex because levels never decrease.
Complex gr(const FilteredComplex& X, int n);
ChainMap gr_map(const FilteredMap& f, int n);

// Level shift s^k: same base, all levels moved up by k.  Invertible.
FilteredComplex shift_filtration(const FilteredComplex& X, int k = 1);
FilteredMap shift_filtration_map(const FilteredMap& f, int k = 1);
// alpha_X : X -> s(X), identity matrices on the base.  omega(alpha_X) = id.
FilteredMap alpha(const FilteredComplex& X);

// Forget the filtration.
Complex omega(const FilteredComplex& X);
ChainMap omega_map(const FilteredMap& f);

// Level truncation at cut n: `above` keeps the generators of level >= n
// (a subcomplex), `below` is the quotient on levels <= n-1, and `data`
// carries the certified triangle above -> X -> below -> [1]above on bases.
struct SigmaTruncation {
  int cut = 0;
  FilteredComplex above;
  FilteredComplex below;
  SplitTriangleData data;
};
SigmaTruncation sigma_truncate(const FilteredComplex& X, int n);

// Filtered quasi-isomorphism test: over a field, f is one iff every gr^n(f)
// has an acyclic cone.  Over other rings the test reports Undecided.
struct FilteredQisoResult {
  Decision decision = Decision::Undecided;
  std::string note;
};
FilteredQisoResult filtered_qiso(const FilteredMap& f);

// Class membership report for a filtered complex.
//  - exact: true when computed from cohomology over a field; otherwise the
//    support and window are generator-level bounds and pure_diag is a
//    sufficient strict certificate (gr^a concentrated in degree a).
//  - support: levels with nonvanishing gr.
//  - pure_diag: every gr^a is cohomologically concentrated in degree a.
//  - window [win_lo, win_hi]: span of {i + j : H^i(gr^j X) != 0}, the weight
//    window induced by the compatible weight structure of the model.
struct FilteredMembership {
  bool exact = false;
  std::set<int> support;
  bool pure_diag = false;
  bool has_window = false;
  int win_lo = 0, win_hi = 0;
  std::string note;

  bool in_df_le(int n) const;  // support bounded above by n
  bool in_df_ge(int n) const;  // support bounded below by n
};
FilteredMembership memberships(const FilteredComplex& X);

// The complex-of-graded-pieces functor.
//  - Heart form (field + pure_diag): a single complex with c^n = H^n(gr^n X)
//    and connecting differential P_{n+1} o (-mix^n) o S_n, which squares to
//    zero strictly.  For stupid lifts this equals wc_standard(omega X) on the
//    nose.
//  - General form (any ring): pieces[n] = [n] gr^n(X) with connecting chain
//    maps from the negated level-raising block; consecutive composites are
//    null-homotopic with solved witnesses.
struct CFunctorResult {
  bool heart_form = false;
  Complex heart;
  std::map<int, Complex> pieces;
  std::map<int, ChainMap> connecting;        // pieces[n] -> pieces[n+1]
  std::map<int, HomotopyWitness> dd_null;    // witnesses for consecutive composites
  std::string note;
};
CFunctorResult c_functor(const FilteredComplex& X);
// Heart-form functor on maps: c(f)^n = P^Y_n o gr^n(f)^n o S^X_n.
// Strictly compatible with composition and identities.
ChainMap c_functor_map(const FilteredMap& f);

// Lift of a plain complex to a pure-diagonal filtered complex with
// omega(lift) == Y strictly.
struct LiftResult {
  FilteredComplex lift;
  bool pure_diag = false;
  int steps = 0;  // binary-splitting merges performed (0 for the direct lift)
  std::string note;
};
LiftResult lift_object(const Complex& Y);
// Same lift produced by binary splitting: truncate, lift both halves,
// reassemble via cone_alpha on the negated connecting map.  Agrees with
// lift_object strictly; the merge count is recorded.
LiftResult lift_object_inductive(const Complex& Y);

// Q = [-1] Cone(-(alpha_N o m)) for m : M -> N, with the certified triangle
// [-1]s(N) -> Q -> M -> s(N) on bases.  gr^n(Q) splits block-diagonally as
// gr^n([-1]s(N)) (+) gr^n(M).  When both ends admit heart-form c over a
// field, c(Q) is compared against the model [-1]Cone(-c(m)): first by the
// closed-form strict isomorphism, then by a generic solver; the note records
// which path succeeded.
struct ConeAlphaResult {
  FilteredComplex Q;
  FilteredMap incl;  // [-1]s(N) -> Q
  FilteredMap proj;  // Q -> M
  FilteredMap conn;  // M -> s(N), matrices of -m (the rotated connecting map)
  TriangleCertificate cert;  // triangle on bases, fully certified

  bool heart_compare = false;  // comparison against the model ran and passed
  Complex c_model;             // [-1]Cone(-c(m))
  ChainMap iso_to_model;       // strict isomorphism c(Q) -> c_model
  ChainMap iso_from_model;
  std::optional<HomotopyWitness> id_null_witness;  // id_{c(Q)} ~ 0 when m = id
  std::string note;
};
ConeAlphaResult cone_alpha(const FilteredMap& m);

// Weight decomposition of a filtered complex at weight n for the compatible
// weight structure: `above` spans the generators with degree + level >= n+1
// (a subcomplex), `below` is the quotient, and the triangle on bases is
// certified.  gr^j(above) has strict support in degrees >= n+1-j and
// gr^j(below) in degrees <= n-j, so every membership certificate is strict
// over any ring.  omega(above) and omega(below) satisfy the induced degree
// bounds.  The same decomposition is re-derived by induction on the level
// range, gluing sigma-truncation halves through a verified morphism of
// triangles and a completed 3x3 diagram kept as evidence.
struct LiftWeightDecomposition {
  int n = 0;
  FilteredComplex above;
  FilteredComplex below;
  SplitTriangleData data;
  std::map<int, MembershipResult> gr_above;  // level j -> gr^j(above) in w >= n+1-j
  std::map<int, MembershipResult> gr_below;  // level j -> gr^j(below) in w <= n-j
  bool omega_bounds = false;
  int steps = 0;                         // sigma-split merges in the evidence run
  std::optional<ThreeByThree> evidence;  // top-level completed 3x3
  std::string note;
};
LiftWeightDecomposition lift_weight_decomposition(const FilteredComplex& X, int n);

// Strong weight complex through the filtered model: lift omega-strictly,
// apply c.  For the pure-diagonal lift this reproduces wc_standard(Y)
// exactly, and the equivalence witness records it.
struct StrongWcResult {
  LiftResult lift;
  CFunctorResult c;
  Complex value;
  EquivalenceWitness equiv;  // value ~ strong_wc_standard(Y)
  std::string note;
};
StrongWcResult strong_wc_via_fcat(const Complex& Y);

// Random level-respecting data: levels drawn per generator, differentials
// drawn uniformly from the solution space of the level-pattern and
// square-zero constraints, maps likewise.
FilteredComplex random_filtered_complex(Rng& rng, const Ring& R, int lo, int hi, int max_rank,
                                        int level_lo, int level_hi);
FilteredMap random_filtered_map(Rng& rng, const FilteredComplex& X, const FilteredComplex& Y);

}  // namespace wk
