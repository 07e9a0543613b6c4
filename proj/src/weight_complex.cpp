#include "wk/weight_complex.hpp"

#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace wk {

namespace {

// Canonical key for deduplication: components are normalized, so equal maps
// serialize identically.
std::string map_key(const ChainMap& f) {
  std::ostringstream os;
  for (const auto& [deg, m] : f.comps) {
    os << deg << '|';
    for (int i = 0; i < m.rows; ++i)
      for (int j = 0; j < m.cols; ++j) os << m.at(i, j) << ',';
    os << ';';
  }
  return os.str();
}

}  // namespace

bool OctahedronData::verify() const {
  if (!(t_n.verify() && t_n1.verify() && t_ge.verify() && t_le.verify())) return false;
  // The four certified triangles connect the stated objects by the stated maps.
  if (!(t_n.t.X == w_hi1 && t_n.t.Y == X && t_n.t.Z == w_lo)) return false;
  if (!(t_n1.t.X == w_hi && t_n1.t.Y == X && t_n1.t.Z == w_lo1)) return false;
  if (!(t_ge.t.X == w_hi1 && t_ge.t.Y == w_hi && t_ge.t.Z == w_n)) return false;
  if (!(t_le.t.X == w_n && t_le.t.Y == w_lo && t_le.t.Z == w_lo1)) return false;
  if (!(t_n.t.u == g_hi1 && t_n.t.v == k_n && t_n.t.w == v_n)) return false;
  if (!(t_n1.t.u == g_hi && t_n1.t.v == k_n1 && t_n1.t.w == v_n1)) return false;
  if (!(t_ge.t.u == h_n && t_ge.t.v == e_n && t_ge.t.w == c_n)) return false;
  if (!(t_le.t.u == a_n && t_le.t.v == l_n && t_le.t.w == b_n)) return false;
  // Strictly commuting faces.
  if (!(compose(g_hi, h_n) == g_hi1)) return false;
  if (!(compose(l_n, k_n) == k_n1)) return false;
  if (!(compose(a_n, e_n) == compose(k_n, g_hi))) return false;
  if (!(b_n == compose(shift_map(e_n, 1), v_n1))) return false;
  if (!(c_n == compose(v_n, a_n))) return false;
  // The one genuinely homotopic face.
  return check_homotopy(compose(shift_map(h_n, 1), v_n), compose(v_n1, l_n), nabla);
}

OctahedronData octahedron_standard(const Complex& X, int n) {
  OctahedronData O;
  O.cut = n;
  O.X = X;
  StupidTruncation Tn = stupid_truncate(X, n);
  StupidTruncation Tn1 = stupid_truncate(X, n - 1);
  O.w_hi1 = Tn.above;
  O.w_lo = Tn.below;
  O.w_hi = Tn1.above;
  O.w_lo1 = Tn1.below;
  O.w_n = stalk(X.ring, n, X.rank(n));
  O.g_hi1 = Tn.data.t.u;
  O.k_n = Tn.data.t.v;
  O.v_n = Tn.data.t.w;
  O.g_hi = Tn1.data.t.u;
  O.k_n1 = Tn1.data.t.v;
  O.v_n1 = Tn1.data.t.w;
  StupidTruncation Tge = stupid_truncate(O.w_hi, n);
  StupidTruncation Tle = stupid_truncate(O.w_lo, n - 1);
  O.h_n = Tge.data.t.u;
  O.e_n = Tge.data.t.v;
  O.c_n = Tge.data.t.w;
  O.a_n = Tle.data.t.u;
  O.l_n = Tle.data.t.v;
  O.b_n = Tle.data.t.w;
  O.t_n = Tn.data.cert;
  O.t_n1 = Tn1.data.cert;
  O.t_ge = Tge.data.cert;
  O.t_le = Tle.data.cert;
  // ([1]h_n)∘v_n - v_n1∘l_n is -d^n at n and +d^{n-1} at n-1; the identity
  // in the witness slot at n produces exactly that boundary.
  if (X.rank(n) > 0) O.nabla.h[n] = Matrix::identity(X.ring, X.rank(n));
  check(O.verify(), "octahedron construction must verify");
  return O;
}

Complex wc_standard(const Complex& X) { return negate_differentials(X); }

ChainMap wc_standard_map(const ChainMap& f) { return negate_diff_map(f); }

LiftEnumeration enumerate_lifts_and_check(const ChainMap& f, int n, long long max_candidates) {
  LiftEnumeration out;
  out.cut = n;
  const Ring R = f.X.ring;
  if (!(R.kind == Ring::Kind::PrimeField || R.kind == Ring::Kind::IntegersModN)) {
    out.note = "lift enumeration needs a finite coefficient ring, not " + R.name();
    return out;
  }
  const long long q = R.modulus;

  StupidTruncation TX = stupid_truncate(f.X, n);
  StupidTruncation TY = stupid_truncate(f.Y, n);
  TriangleMorphismSet set = fill_triangle_morphism_all(f, TX.data.t, TY.data.t);
  if (!set.solvable) {
    out.note = "no triangle morphism extends the given map";
    return out;
  }

  Complex SX = wc_standard(f.X);
  Complex SY = wc_standard(f.Y);
  // A triangle morphism glues to a chain map on the nose: below the cut it is
  // the w<=n component, above the cut the w>=n+1 component, and the square
  // with the connecting maps is strict because its witness space is empty.
  auto assemble = [&](const TriangleMorphism& tm) {
    std::map<int, Matrix> comps;
    for (const auto& [deg, r] : SX.ranks) {
      (void)r;
      Matrix c = deg <= n ? tm.h.at(deg) : tm.f.at(deg);
      comps[deg] = c;
    }
    ChainMap g = make_map(SX, SY, std::move(comps));
    g.validate();
    return g;
  };

  ChainMap base = assemble(set.particular);
  std::vector<ChainMap> deltas;
  for (const TriangleMorphism& tm : set.kernel) {
    ChainMap d = assemble(tm);
    if (!d.comps.empty()) deltas.push_back(d);
  }
  out.kernel_dim = static_cast<long long>(deltas.size());

  long long total = 1;
  for (size_t i = 0; i < deltas.size(); ++i) {
    if (total > max_candidates / q) {
      out.note = "candidate bound exceeded: " + std::to_string(q) + "^" +
                 std::to_string(deltas.size()) + " coefficient tuples, cap " +
                 std::to_string(max_candidates);
      return out;
    }
    total *= q;
  }

  std::set<std::string> seen;
  std::vector<long long> coeff(deltas.size(), 0);
  while (true) {
    ChainMap cand = base;
    for (size_t i = 0; i < deltas.size(); ++i)
      if (coeff[i] != 0) cand = cm_add(cand, cm_scale(Rat(coeff[i]), deltas[i]));
    ++out.combinations;
    if (seen.insert(map_key(cand)).second) out.candidates.push_back(cand);
    size_t pos = 0;
    while (pos < coeff.size()) {
      if (++coeff[pos] < q) break;
      coeff[pos] = 0;
      ++pos;
    }
    if (pos == coeff.size()) break;
  }

  out.ok = true;
  for (size_t i = 0; i < out.candidates.size(); ++i) {
    for (size_t j = i + 1; j < out.candidates.size(); ++j) {
      ++out.weak_pairs_checked;
      auto weak = weak_homotopy_witness(out.candidates[i], out.candidates[j]);
      if (!weak) {
        out.ok = false;
        out.note = "candidates " + std::to_string(i) + " and " + std::to_string(j) +
                   " are not weakly homotopic";
        return out;
      }
      check(check_weak_homotopy(out.candidates[i], out.candidates[j], *weak),
            "weak homotopy witness must check");
      if (!homotopy_witness(out.candidates[i], out.candidates[j]))
        out.non_homotopic_pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  out.note = std::to_string(out.candidates.size()) + " candidate(s), " +
             std::to_string(out.weak_pairs_checked) + " weak pair(s) witnessed, " +
             std::to_string(out.non_homotopic_pairs.size()) + " non-homotopic pair(s)";
  return out;
}

Complex strong_wc_standard(const Complex& X) { return wc_standard(X); }

ChainMap strong_wc_standard_map(const ChainMap& f) { return wc_standard_map(f); }

CertifyResult strong_wc_triangle(const CandidateTriangle& t) {
  Complex SX = wc_standard(t.X), SY = wc_standard(t.Y), SZ = wc_standard(t.Z);
  ChainMap su = make_map(SX, SY, t.u.comps);
  ChainMap sv = make_map(SY, SZ, t.v.comps);
  // [1] and the sign functor commute strictly, so t.w's components also give
  // the connecting map wc(Z) -> [1]wc(X).
  ChainMap sw = make_map(SZ, shift(SX, 1), t.w.comps);
  std::optional<CandidateTriangle> cand = make_candidate(SX, SY, SZ, su, sv, sw);
  if (!cand) {
    CertifyResult r;
    r.status = CertifyStatus::NotTriangle;
    r.note = "image composites are not null-homotopic";
    return r;
  }
  return anti_triangle_check(*cand);
}

}  // namespace wk
