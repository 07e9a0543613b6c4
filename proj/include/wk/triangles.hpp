#pragma once

#include <array>
#include <optional>
#include <string>

#include "wk/homotopy.hpp"

namespace wk {

// X --u--> Y --v--> Z --w--> [1]X with stored null-homotopies of the three
// consecutive composites.
struct CandidateTriangle {
  Complex X, Y, Z;
  ChainMap u, v, w;
  HomotopyWitness vu_null, wv_null, uw_null;  // v∘u ≃ 0, w∘v ≃ 0, ([1]u)∘w ≃ 0
  bool verify() const;
};

// Tries to assemble a candidate: fails when some composite is not
// null-homotopic.
std::optional<CandidateTriangle> make_candidate(const Complex& X, const Complex& Y,
                                                const Complex& Z, const ChainMap& u,
                                                const ChainMap& v, const ChainMap& w);

// A homotopy equivalence between a candidate and the mapping-cone triangle of
// its own u, commuting with the triangle structure maps up to the stored
// homotopies.
struct TriangleCertificate {
  CandidateTriangle t;
  Cone cone_data;             // cone of t.u together with iota, pi
  ChainMap to_cone;           // ψ : Z -> Cone(u)
  ChainMap from_cone;         // φ : Cone(u) -> Z
  HomotopyWitness sq_to_v;    // ψ∘v ≃ iota
  HomotopyWitness sq_to_w;    // pi∘ψ ≃ w
  HomotopyWitness sq_from_v;  // φ∘iota ≃ v
  HomotopyWitness sq_from_w;  // w∘φ ≃ pi
  HomotopyWitness inv_Z;      // φ∘ψ ≃ id_Z
  HomotopyWitness inv_C;      // ψ∘φ ≃ id_Cone
  bool verify() const;
};

enum class CertifyStatus { Certified, NotTriangle, Undecided };

struct CertifyResult {
  CertifyStatus status = CertifyStatus::Undecided;
  std::optional<TriangleCertificate> cert;
  std::string note;
};

// Over a field this is a decision procedure; over other rings a certificate
// is definitive, NotTriangle is definitive (no comparison map exists at all),
// and Undecided means the particular comparison found was not invertible.
CertifyResult certify_triangle(const CandidateTriangle& t);
// Checking mode: both comparison maps supplied, only homotopies are solved.
std::optional<TriangleCertificate> certify_with_maps(const CandidateTriangle& t,
                                                     const ChainMap& to_cone,
                                                     const ChainMap& from_cone);
// The mapping-cone triangle of m, certified by identity comparisons.
TriangleCertificate cone_certificate(const ChainMap& m);

CertifyResult anti_triangle_check(const CandidateTriangle& t);

// Split triangle data (triangle with null connecting map): delta plus the
// mutually inverse comparison maps Y <-> X ⊕ Z.
struct SplitCompletion {
  ChainMap delta;               // Z -> Y with ε∘delta ≃ 0, v∘delta ≃ id_Z
  HomotopyWitness eps_delta_null, v_delta_id;
  ChainMap fwd;                 // [ε; v] : Y -> X ⊕ Z
  ChainMap bwd;                 // [u, delta] : X ⊕ Z -> Y
  HomotopyWitness fwd_bwd_id, bwd_fwd_id;
  bool verify(const CandidateTriangle& t, const ChainMap& eps) const;
};
std::optional<SplitCompletion> split_triangle_completion(const TriangleCertificate& cert,
                                                         const ChainMap& eps);
// Full solution set of the (delta, homotopies) system, for uniqueness tests.
struct SplitCompletionSet {
  bool solvable = false;
  ChainMap particular;
  std::vector<ChainMap> kernel;  // delta-components of the homogeneous solutions
};
SplitCompletionSet split_triangle_completion_all(const TriangleCertificate& cert,
                                                 const ChainMap& eps);

struct IdempotentSplitting {
  Complex Y;
  ChainMap p;  // X -> Y
  ChainMap i;  // Y -> X
  HomotopyWitness ip_matches;  // i∘p ≃ e
  HomotopyWitness pi_id;       // p∘i ≃ id_Y
  bool verify(const Complex& X, const ChainMap& e) const;
};

struct ComplementSplitting {
  Complex Z;
  ChainMap q;  // X -> Z
  ChainMap j;  // Z -> X
  HomotopyWitness jq_matches;  // j∘q ≃ 1 - e
  HomotopyWitness qj_id;       // q∘j ≃ id_Z
  bool verify(const Complex& X, const ChainMap& e) const;
};
ComplementSplitting complement_splitting(const Complex& X, const ChainMap& e,
                                         const IdempotentSplitting& s);

// Morphism of triangles (f, g, h) extending a given g, together with the
// homotopies for all three squares.
struct TriangleMorphism {
  ChainMap f, g, h;
  HomotopyWitness sq_u;  // g∘u ≃ u′∘f
  HomotopyWitness sq_v;  // h∘v ≃ v′∘g
  HomotopyWitness sq_w;  // ([1]f)∘w ≃ w′∘h
  bool verify(const CandidateTriangle& t, const CandidateTriangle& tp) const;
};
std::optional<TriangleMorphism> fill_triangle_morphism(const ChainMap& g,
                                                       const TriangleCertificate& t,
                                                       const TriangleCertificate& tp);
struct TriangleMorphismSet {
  bool solvable = false;
  TriangleMorphism particular;
  std::vector<TriangleMorphism> kernel;
};
TriangleMorphismSet fill_triangle_morphism_all(const ChainMap& g, const CandidateTriangle& t,
                                               const CandidateTriangle& tp);

// Homotopy-commutative square: a and b vertical, f on top, fp on the bottom,
// with s witnessing f∘a ≃ b∘fp.
struct HtpySquare {
  ChainMap f;   // X -> Y
  ChainMap fp;  // Xp -> Yp
  ChainMap a;   // Xp -> X
  ChainMap b;   // Yp -> Y
  HomotopyWitness s;
  bool verify() const;
};

// Nine objects arranged as rows[0] = (Xp, Yp, Zp) the input row, rows[1] =
// (X, Y, Z), rows[2] the cones-of-verticals row; cols likewise. The eight
// unmarked squares commute strictly except the input square (witnessed);
// the top-right square of connecting maps anti-commutes strictly.
struct ThreeByThree {
  std::array<TriangleCertificate, 3> rows;
  std::array<TriangleCertificate, 3> cols;
  HomotopyWitness input_square;
  bool verify() const;
};
ThreeByThree complete_3x3(const HtpySquare& sq);

enum class SplitStatus { Split, Obstructed, Undecided };
struct SplitIdempotentResult {
  SplitStatus status = SplitStatus::Undecided;
  std::optional<IdempotentSplitting> splitting;
  std::string note;
};
// parity_constrained declares the ambient additive category to be the
// even-dimensional vector spaces; splitting then has a parity obstruction.
SplitIdempotentResult split_idempotent(const Complex& X, const ChainMap& e,
                                       bool parity_constrained = false);

// Degreewise coordinate split: sub lists, per degree, the coordinate indices
// spanning a subcomplex (d must be block-triangular for the split). Produces
// the strict triangle S -> X -> Q -> [1]S with a closed-form certificate.
struct SplitTriangleData {
  CandidateTriangle t;  // (S, X, Q, incl, proj, w = -mixed block)
  TriangleCertificate cert;
  std::map<int, Matrix> section;  // Q -> X degreewise right inverse of proj
  std::map<int, Matrix> retract;  // X -> S degreewise left inverse of incl
};
SplitTriangleData coordinate_split_triangle(const Complex& X,
                                            const std::map<int, std::vector<int>>& sub);

}  // namespace wk
