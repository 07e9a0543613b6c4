#pragma once

#include <string>
#include <vector>

#include "wk/triangles.hpp"

namespace wk {

// Integer weight window [lo, hi] with optional infinite ends; finite ends
// with lo > hi name the zero class.
struct WeightWindow {
  bool has_lo = false, has_hi = false;
  int lo = 0, hi = 0;
  static WeightWindow all();
  static WeightWindow at_least(int a);
  static WeightWindow at_most(int b);
  static WeightWindow between(int a, int b);
  bool is_zero_class() const;
  bool contains(int degree) const;
  bool contains_support(const Complex& X) const;
  std::string describe() const;
};

// Degrees-in-window part of X, keeping the differentials internal to the
// window: the two-sided stupid truncation.
Complex window_restrict(const Complex& X, const WeightWindow& W);

// Stupid truncation at n: the certified strict triangle
//   w>=n+1 X --incl--> X --proj--> w<=n X --(-d^n)--> [1] w>=n+1 X.
struct StupidTruncation {
  int cut = 0;
  Complex below, above;    // w<=n X and w>=n+1 X
  SplitTriangleData data;  // triangle (above, X, below) with certificate
};
StupidTruncation stupid_truncate(const Complex& X, int n);

enum class Decision { Yes, No, Undecided };

struct MembershipResult {
  Decision decision = Decision::Undecided;
  WeightWindow window;
  // On Yes: a model supported inside the window together with X ≃ model.
  Complex model;
  EquivalenceWitness witness;
  std::string note;
};
// Window membership of the class of X: contractible complexes lie in every
// window, strict support decides affirmatively over any ring, cohomology
// support decides both ways over a field; otherwise Undecided.
MembershipResult membership(const Complex& X, const WeightWindow& W);

// X as a summand of its window truncation: i : X -> w_[a,b] X and p back
// with p∘i ≃ id_X. Available whenever membership is Yes.
struct RetractWitness {
  WeightWindow window;
  Complex target;
  ChainMap i, p;
  HomotopyWitness pi_id;
  bool verify(const Complex& X) const;
};
struct RetractResult {
  bool ok = false;
  RetractWitness witness;
  std::string note;
};
RetractResult retract_witness(const Complex& X, const WeightWindow& W);

// ---- torsion-pair truncation ----

enum class TorsionSide { Kernel, Cokernel };

// Complex of finitely presented modules: degree n has gens(n) generators
// subject to the column span of rel(n). A complex of frees is the special
// case with no relation columns anywhere.
struct PresentedComplex {
  Ring ring;
  std::map<int, long long> gens;
  std::map<int, Matrix> rel;
  std::map<int, Matrix> diff;

  PresentedComplex() = default;
  explicit PresentedComplex(const Ring& R) : ring(R) {}
  long long gens_at(int n) const;
  Matrix rel_at(int n) const;  // gens(n) x (#relations), zero columns dropped
  Matrix d(int n) const;       // gens(n+1) x gens(n)
  void set_gens(int n, long long g);
  void set_rel(int n, const Matrix& R);
  void set_diff(int n, const Matrix& M);
  void normalize();
  void validate() const;
  bool is_free() const;
  Complex to_complex() const;  // requires is_free
  static PresentedComplex from_complex(const Complex& X);
};

// Column-span congruence A ≡ B modulo rel.
bool congruent_mod(const Matrix& A, const Matrix& B, const Matrix& rel);

// Certified truncation triangle X' --u--> A --v--> Y' --w--> [1]X' in the
// presented-module category, with a closed-form homotopy equivalence between
// Y' and the cone of u. All squares that are not strict carry witnesses.
struct TorsionCertificate {
  PresentedComplex xp, base, yp;
  std::map<int, Matrix> u, v, w;
  std::map<int, Matrix> vu_h, wv_h, uw_h;  // null-homotopies of the composites
  std::map<int, Matrix> psi, phi;          // Y' <-> Cone(u) comparison maps
  std::map<int, Matrix> sq_to_v_h;         // psi∘v ≃ iota
  std::map<int, Matrix> sq_from_w_h;       // w∘phi ≃ pi
  std::map<int, Matrix> inv_C_h;           // psi∘phi ≃ id_Cone
  bool verify() const;
};

struct TorsionTruncation {
  int cut = 0;
  TorsionSide side = TorsionSide::Kernel;
  bool free_form = false;  // truncated pieces are complexes of frees
  // Free path: plain complexes with the standard certificate.
  Complex xp, yp;
  TriangleCertificate cert;
  // Presented path: declared presentations with the mod-relation certificate.
  TorsionCertificate pcert;
  std::string note;
};
// Kernel mode at n replaces A^{n-1} by ker(d^{n-1}) placed at degree n-1,
// cutting off everything above; cokernel mode at n replaces A^n by
// coker(d^{n-1}) placed at degree n+1 of the lower piece. Either way the
// certified triangle X' -> A -> Y' -> [1]X' is returned.
TorsionTruncation torsion_truncate(const Complex& A, int n, TorsionSide side);

// ---- axiom suite ----

struct WsSuiteReport {
  Ring ring;
  unsigned long long seed = 0;
  int samples = 0;
  int ws1_checked = 0, ws2_checked = 0, ws3_checked = 0, ws4_checked = 0;
  int failures = 0;
  std::vector<std::string> notes;
  bool pass() const { return failures == 0; }
};
// Samples complexes in degrees [lo, hi] and exercises: retract closure of
// windows (fields), inclusion of adjacent windows, Hom-vanishing with
// by-construction staircase homotopies, and certified weight decompositions.
WsSuiteReport ws_axiom_suite(const Ring& ring, int lo, int hi, int samples,
                             unsigned long long seed);

}  // namespace wk
