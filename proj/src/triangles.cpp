#include "wk/triangles.hpp"

namespace wk {

namespace {

bool is_chain_map(const ChainMap& f) {
  try {
    f.validate();
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

Matrix zero_m(const Ring& R, int r, int c) { return Matrix(R, r, c); }

}  // namespace

bool CandidateTriangle::verify() const {
  if (!is_chain_map(u) || !is_chain_map(v) || !is_chain_map(w)) return false;
  if (!(u.X == X && u.Y == Y && v.X == Y && v.Y == Z)) return false;
  if (!(w.X == Z && w.Y == shift(X, 1))) return false;
  return check_homotopy(compose(v, u), zero_map(X, Z), vu_null) &&
         check_homotopy(compose(w, v), zero_map(Y, shift(X, 1)), wv_null) &&
         check_homotopy(compose(shift_map(u, 1), w), zero_map(Z, shift(Y, 1)), uw_null);
}

std::optional<CandidateTriangle> make_candidate(const Complex& X, const Complex& Y,
                                                const Complex& Z, const ChainMap& u,
                                                const ChainMap& v, const ChainMap& w) {
  CandidateTriangle t;
  t.X = X;
  t.Y = Y;
  t.Z = Z;
  t.u = u;
  t.v = v;
  t.w = w;
  if (!is_chain_map(u) || !is_chain_map(v) || !is_chain_map(w)) return std::nullopt;
  if (!(u.X == X && u.Y == Y && v.X == Y && v.Y == Z && w.X == Z && w.Y == shift(X, 1)))
    return std::nullopt;
  auto a = null_homotopy(compose(v, u));
  auto b = null_homotopy(compose(w, v));
  auto c = null_homotopy(compose(shift_map(u, 1), w));
  if (!a || !b || !c) return std::nullopt;
  t.vu_null = *a;
  t.wv_null = *b;
  t.uw_null = *c;
  return t;
}

bool TriangleCertificate::verify() const {
  if (!t.verify()) return false;
  Cone c = cone(t.u);
  if (!(c.C == cone_data.C && c.iota == cone_data.iota && c.pi == cone_data.pi)) return false;
  if (!is_chain_map(to_cone) || !is_chain_map(from_cone)) return false;
  if (!(to_cone.X == t.Z && to_cone.Y == c.C && from_cone.X == c.C && from_cone.Y == t.Z))
    return false;
  return check_homotopy(compose(to_cone, t.v), c.iota, sq_to_v) &&
         check_homotopy(compose(c.pi, to_cone), t.w, sq_to_w) &&
         check_homotopy(compose(from_cone, c.iota), t.v, sq_from_v) &&
         check_homotopy(compose(t.w, from_cone), c.pi, sq_from_w) &&
         check_homotopy(compose(from_cone, to_cone), identity_map(t.Z), inv_Z) &&
         check_homotopy(compose(to_cone, from_cone), identity_map(c.C), inv_C);
}

TriangleCertificate cone_certificate(const ChainMap& m) {
  const Complex& A = m.X;
  const Complex& B = m.Y;
  const Ring& R = A.ring;
  Cone c = cone(m);
  TriangleCertificate out;
  out.t.X = A;
  out.t.Y = B;
  out.t.Z = c.C;
  out.t.u = m;
  out.t.v = c.iota;
  out.t.w = c.pi;
  // iota∘m contracts through the [1]A summand; ([1]m)∘pi through the B one.
  for (auto& [n, r] : A.ranks)
    out.t.vu_null.h[n] = vstack(zero_m(R, B.rank(n - 1), r), Matrix::identity(R, r));
  for (auto& [n, r] : c.C.ranks) {
    if (B.rank(n) == 0) continue;
    out.t.uw_null.h[n] = hstack(Matrix::identity(R, B.rank(n)), zero_m(R, B.rank(n), A.rank(n + 1)));
  }
  out.cone_data = c;
  out.to_cone = identity_map(c.C);
  out.from_cone = identity_map(c.C);
  check(out.verify(), "cone certificate failed verification");
  return out;
}

CertifyResult certify_triangle(const CandidateTriangle& t) {
  CertifyResult res;
  if (!t.verify()) {
    res.status = CertifyStatus::NotTriangle;
    res.note = "candidate invariants failed";
    return res;
  }
  const Ring& R = t.X.ring;
  Cone c = cone(t.u);
  Complex X1 = shift(t.X, 1);

  // Stage (a): comparison ψ : Z -> Cone(u) with both squares, jointly.
  BlockSystem sysA(R);
  auto psiB = degree_blocks(sysA, t.Z, c.C);
  add_chain_map_constraints(sysA, psiB, t.Z, c.C);
  auto k1 = witness_blocks(sysA, t.Y, c.C);
  auto k2 = witness_blocks(sysA, t.Z, X1);
  for (auto& [n, r] : t.Y.ranks) {
    if (c.C.rank(n) == 0) continue;
    int eq = sysA.new_equation(c.iota.at(n));
    if (psiB.count(n)) sysA.add_term(eq, Matrix::identity(R, c.C.rank(n)), psiB[n], t.v.at(n));
    add_homotopy_terms(sysA, eq, n, k1, t.Y, c.C, true);
  }
  for (auto& [n, r] : t.Z.ranks) {
    if (X1.rank(n) == 0) continue;
    int eq = sysA.new_equation(t.w.at(n));
    if (psiB.count(n)) sysA.add_term_left(eq, c.pi.at(n), psiB[n]);
    add_homotopy_terms(sysA, eq, n, k2, t.Z, X1, true);
  }
  auto solA = sysA.solve();
  if (!solA) {
    res.status = CertifyStatus::NotTriangle;
    res.note = "no comparison morphism to the mapping cone exists";
    return res;
  }
  ChainMap psi = read_chain_map(*solA, psiB, t.Z, c.C);

  if (R.is_field()) {
    auto HZ = cohomology(t.Z);
    auto HC = cohomology(c.C);
    bool iso = HZ.H.ranks == HC.H.ranks;
    if (iso) {
      ChainMap induced = compose(HC.proj, compose(psi, HZ.sect));
      for (auto& [n, r] : HZ.H.ranks)
        if (!matrix_inverse(induced.at(n))) iso = false;
    }
    if (!iso) {
      res.status = CertifyStatus::NotTriangle;
      res.note = "comparison map is not a cohomology isomorphism";
      return res;
    }
  }

  // Stage (b): inverse φ with its squares and both invertibility homotopies.
  BlockSystem sysB(R);
  auto phiB = degree_blocks(sysB, c.C, t.Z);
  add_chain_map_constraints(sysB, phiB, c.C, t.Z);
  auto m1 = witness_blocks(sysB, t.Y, t.Z);
  auto m2 = witness_blocks(sysB, c.C, X1);
  auto m3 = witness_blocks(sysB, t.Z, t.Z);
  auto m4 = witness_blocks(sysB, c.C, c.C);
  for (auto& [n, r] : t.Y.ranks) {
    if (t.Z.rank(n) == 0) continue;
    int eq = sysB.new_equation(t.v.at(n));
    if (phiB.count(n)) sysB.add_term(eq, Matrix::identity(R, t.Z.rank(n)), phiB[n], c.iota.at(n));
    add_homotopy_terms(sysB, eq, n, m1, t.Y, t.Z, true);
  }
  for (auto& [n, r] : c.C.ranks) {
    if (X1.rank(n) == 0) continue;
    int eq = sysB.new_equation(c.pi.at(n));
    if (phiB.count(n)) sysB.add_term_left(eq, t.w.at(n), phiB[n]);
    add_homotopy_terms(sysB, eq, n, m2, c.C, X1, true);
  }
  for (auto& [n, r] : t.Z.ranks) {
    int eq = sysB.new_equation(Matrix::identity(R, r));
    if (phiB.count(n)) sysB.add_term(eq, Matrix::identity(R, r), phiB[n], psi.at(n));
    add_homotopy_terms(sysB, eq, n, m3, t.Z, t.Z, true);
  }
  for (auto& [n, r] : c.C.ranks) {
    int eq = sysB.new_equation(Matrix::identity(R, r));
    if (phiB.count(n)) sysB.add_term_left(eq, psi.at(n), phiB[n]);
    add_homotopy_terms(sysB, eq, n, m4, c.C, c.C, true);
  }
  auto solB = sysB.solve();
  if (!solB) {
    res.status = CertifyStatus::Undecided;
    res.note = "comparison morphism found but no homotopy inverse located";
    return res;
  }
  TriangleCertificate cert;
  cert.t = t;
  cert.cone_data = c;
  cert.to_cone = psi;
  cert.from_cone = read_chain_map(*solB, phiB, c.C, t.Z);
  cert.sq_to_v = read_witness(*solA, k1);
  cert.sq_to_w = read_witness(*solA, k2);
  cert.sq_from_v = read_witness(*solB, m1);
  cert.sq_from_w = read_witness(*solB, m2);
  cert.inv_Z = read_witness(*solB, m3);
  cert.inv_C = read_witness(*solB, m4);
  check(cert.verify(), "triangle certificate failed verification");
  res.status = CertifyStatus::Certified;
  res.cert = cert;
  return res;
}

std::optional<TriangleCertificate> certify_with_maps(const CandidateTriangle& t,
                                                     const ChainMap& to_cone,
                                                     const ChainMap& from_cone) {
  if (!t.verify()) return std::nullopt;
  Cone c = cone(t.u);
  if (!is_chain_map(to_cone) || !is_chain_map(from_cone)) return std::nullopt;
  if (!(to_cone.X == t.Z && to_cone.Y == c.C && from_cone.X == c.C && from_cone.Y == t.Z))
    return std::nullopt;
  auto w1 = homotopy_witness(compose(to_cone, t.v), c.iota);
  auto w2 = homotopy_witness(compose(c.pi, to_cone), t.w);
  auto w3 = homotopy_witness(compose(from_cone, c.iota), t.v);
  auto w4 = homotopy_witness(compose(t.w, from_cone), c.pi);
  auto w5 = homotopy_witness(compose(from_cone, to_cone), identity_map(t.Z));
  auto w6 = homotopy_witness(compose(to_cone, from_cone), identity_map(c.C));
  if (!w1 || !w2 || !w3 || !w4 || !w5 || !w6) return std::nullopt;
  TriangleCertificate cert;
  cert.t = t;
  cert.cone_data = c;
  cert.to_cone = to_cone;
  cert.from_cone = from_cone;
  cert.sq_to_v = *w1;
  cert.sq_to_w = *w2;
  cert.sq_from_v = *w3;
  cert.sq_from_w = *w4;
  cert.inv_Z = *w5;
  cert.inv_C = *w6;
  check(cert.verify(), "supplied certificate data failed verification");
  return cert;
}

CertifyResult anti_triangle_check(const CandidateTriangle& t) {
  auto c = make_candidate(t.X, t.Y, t.Z, t.u, t.v, cm_neg(t.w));
  if (!c) {
    CertifyResult res;
    res.status = CertifyStatus::NotTriangle;
    res.note = "negated connecting map violates candidate invariants";
    return res;
  }
  return certify_triangle(*c);
}

bool SplitCompletion::verify(const CandidateTriangle& t, const ChainMap& eps) const {
  if (!is_chain_map(delta)) return false;
  if (!(delta.X == t.Z && delta.Y == t.Y)) return false;
  DirectSum ds = direct_sum(t.X, t.Z);
  if (!check_homotopy(compose(eps, delta), zero_map(t.Z, t.X), eps_delta_null)) return false;
  if (!check_homotopy(compose(t.v, delta), identity_map(t.Z), v_delta_id)) return false;
  if (!(fwd == cm_add(compose(ds.i1, eps), compose(ds.i2, t.v)))) return false;
  if (!(bwd == cm_add(compose(t.u, ds.p1), compose(delta, ds.p2)))) return false;
  return check_homotopy(compose(fwd, bwd), identity_map(ds.S), fwd_bwd_id) &&
         check_homotopy(compose(bwd, fwd), identity_map(t.Y), bwd_fwd_id);
}

static BlockSystem delta_system(const CandidateTriangle& t, const ChainMap& eps,
                                std::map<int, int>& dB, std::map<int, int>& wa,
                                std::map<int, int>& wb) {
  const Ring& R = t.X.ring;
  BlockSystem sys(R);
  dB = degree_blocks(sys, t.Z, t.Y);
  add_chain_map_constraints(sys, dB, t.Z, t.Y);
  wa = witness_blocks(sys, t.Z, t.X);
  wb = witness_blocks(sys, t.Z, t.Z);
  for (auto& [n, r] : t.Z.ranks) {
    if (t.X.rank(n) > 0) {
      int eq = sys.new_equation(zero_m(R, t.X.rank(n), r));
      if (dB.count(n)) sys.add_term_left(eq, eps.at(n), dB[n]);
      add_homotopy_terms(sys, eq, n, wa, t.Z, t.X, true);
    }
    int eq = sys.new_equation(Matrix::identity(R, r));
    if (dB.count(n)) sys.add_term_left(eq, t.v.at(n), dB[n]);
    add_homotopy_terms(sys, eq, n, wb, t.Z, t.Z, true);
  }
  return sys;
}

std::optional<SplitCompletion> split_triangle_completion(const TriangleCertificate& cert,
                                                         const ChainMap& eps) {
  const CandidateTriangle& t = cert.t;
  if (!is_chain_map(eps) || !(eps.X == t.Y && eps.Y == t.X)) return std::nullopt;
  if (!homotopy_witness(compose(eps, t.u), identity_map(t.X))) return std::nullopt;
  std::map<int, int> dB, wa, wb;
  BlockSystem sys = delta_system(t, eps, dB, wa, wb);
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  SplitCompletion out;
  out.delta = read_chain_map(*sol, dB, t.Z, t.Y);
  out.eps_delta_null = read_witness(*sol, wa);
  out.v_delta_id = read_witness(*sol, wb);
  DirectSum ds = direct_sum(t.X, t.Z);
  out.fwd = cm_add(compose(ds.i1, eps), compose(ds.i2, t.v));
  out.bwd = cm_add(compose(t.u, ds.p1), compose(out.delta, ds.p2));
  auto fg = homotopy_witness(compose(out.fwd, out.bwd), identity_map(ds.S));
  auto gf = homotopy_witness(compose(out.bwd, out.fwd), identity_map(t.Y));
  if (!fg || !gf) return std::nullopt;
  out.fwd_bwd_id = *fg;
  out.bwd_fwd_id = *gf;
  check(out.verify(t, eps), "split completion failed verification");
  return out;
}

SplitCompletionSet split_triangle_completion_all(const TriangleCertificate& cert,
                                                 const ChainMap& eps) {
  const CandidateTriangle& t = cert.t;
  SplitCompletionSet out;
  std::map<int, int> dB, wa, wb;
  BlockSystem sys = delta_system(t, eps, dB, wa, wb);
  auto all = sys.solve_all();
  out.solvable = all.solvable;
  if (!all.solvable) return out;
  out.particular = read_chain_map(all.particular, dB, t.Z, t.Y);
  for (auto& gen : all.kernel_gens) {
    ChainMap d0 = read_chain_map(gen, dB, t.Z, t.Y);
    if (!(d0 == zero_map(t.Z, t.Y))) out.kernel.push_back(d0);
  }
  return out;
}

bool IdempotentSplitting::verify(const Complex& X, const ChainMap& e) const {
  if (!is_chain_map(p) || !is_chain_map(i)) return false;
  if (!(p.X == X && p.Y == Y && i.X == Y && i.Y == X)) return false;
  return check_homotopy(compose(i, p), e, ip_matches) &&
         check_homotopy(compose(p, i), identity_map(Y), pi_id);
}

bool ComplementSplitting::verify(const Complex& X, const ChainMap& e) const {
  if (!is_chain_map(q) || !is_chain_map(j)) return false;
  if (!(q.X == X && q.Y == Z && j.X == Z && j.Y == X)) return false;
  ChainMap complement = cm_sub(identity_map(X), e);
  return check_homotopy(compose(j, q), complement, jq_matches) &&
         check_homotopy(compose(q, j), identity_map(Z), qj_id);
}

ComplementSplitting complement_splitting(const Complex& X, const ChainMap& e,
                                         const IdempotentSplitting& s) {
  check(s.verify(X, e), "splitting witnesses failed verification");
  TriangleCertificate ci = cone_certificate(s.i);
  auto comp = split_triangle_completion(ci, s.p);
  check(comp.has_value(), "complement completion unexpectedly unsolvable");
  ComplementSplitting out;
  out.Z = ci.t.Z;
  out.q = ci.t.v;
  out.j = comp->delta;
  out.qj_id = comp->v_delta_id;
  auto jq = homotopy_witness(compose(out.j, out.q), cm_sub(identity_map(X), e));
  check(jq.has_value(), "complement idempotent witness unexpectedly unsolvable");
  out.jq_matches = *jq;
  check(out.verify(X, e), "complement splitting failed verification");
  return out;
}

bool TriangleMorphism::verify(const CandidateTriangle& t, const CandidateTriangle& tp) const {
  if (!is_chain_map(f) || !is_chain_map(g) || !is_chain_map(h)) return false;
  if (!(f.X == t.X && f.Y == tp.X && g.X == t.Y && g.Y == tp.Y && h.X == t.Z && h.Y == tp.Z))
    return false;
  return check_homotopy(compose(g, t.u), compose(tp.u, f), sq_u) &&
         check_homotopy(compose(h, t.v), compose(tp.v, g), sq_v) &&
         check_homotopy(compose(shift_map(f, 1), t.w), compose(tp.w, h), sq_w);
}

TriangleMorphismSet fill_triangle_morphism_all(const ChainMap& g, const CandidateTriangle& t,
                                               const CandidateTriangle& tp) {
  check(g.X == t.Y && g.Y == tp.Y, "middle map endpoints mismatch");
  const Ring& R = t.X.ring;
  Complex X1p = shift(tp.X, 1);
  BlockSystem sys(R);
  auto fB = degree_blocks(sys, t.X, tp.X);
  auto hB = degree_blocks(sys, t.Z, tp.Z);
  add_chain_map_constraints(sys, fB, t.X, tp.X);
  add_chain_map_constraints(sys, hB, t.Z, tp.Z);
  auto s1 = witness_blocks(sys, t.X, tp.Y);
  auto s2 = witness_blocks(sys, t.Y, tp.Z);
  auto s3 = witness_blocks(sys, t.Z, X1p);
  ChainMap gu = compose(g, t.u);
  ChainMap vg = compose(tp.v, g);
  for (auto& [n, r] : t.X.ranks) {
    if (tp.Y.rank(n) == 0) continue;
    // u′∘f + d s1 + s1 d = g∘u
    int eq = sys.new_equation(gu.at(n));
    if (fB.count(n)) sys.add_term_left(eq, tp.u.at(n), fB[n]);
    add_homotopy_terms(sys, eq, n, s1, t.X, tp.Y, false);
  }
  for (auto& [n, r] : t.Y.ranks) {
    if (tp.Z.rank(n) == 0) continue;
    // h∘v - d s2 - s2 d = v′∘g
    int eq = sys.new_equation(vg.at(n));
    if (hB.count(n)) sys.add_term(eq, Matrix::identity(R, tp.Z.rank(n)), hB[n], t.v.at(n));
    add_homotopy_terms(sys, eq, n, s2, t.Y, tp.Z, true);
  }
  for (auto& [n, r] : t.Z.ranks) {
    if (X1p.rank(n) == 0) continue;
    // ([1]f)∘w - w′∘h - d s3 - s3 d = 0
    int eq = sys.new_equation(zero_m(R, X1p.rank(n), r));
    if (fB.count(n + 1)) sys.add_term(eq, Matrix::identity(R, X1p.rank(n)), fB[n + 1], t.w.at(n));
    if (hB.count(n)) sys.add_term_left(eq, neg(tp.w.at(n)), hB[n]);
    add_homotopy_terms(sys, eq, n, s3, t.Z, X1p, true);
  }
  TriangleMorphismSet out;
  auto all = sys.solve_all();
  out.solvable = all.solvable;
  if (!all.solvable) return out;
  auto build = [&](const std::vector<Matrix>& sol, bool with_g) {
    TriangleMorphism m;
    m.f = read_chain_map(sol, fB, t.X, tp.X);
    m.g = with_g ? g : zero_map(t.Y, tp.Y);
    m.h = read_chain_map(sol, hB, t.Z, tp.Z);
    m.sq_u = read_witness(sol, s1);
    m.sq_v = read_witness(sol, s2);
    m.sq_w = read_witness(sol, s3);
    return m;
  };
  out.particular = build(all.particular, true);
  check(out.particular.verify(t, tp), "triangle morphism failed verification");
  for (auto& gen : all.kernel_gens) out.kernel.push_back(build(gen, false));
  return out;
}

std::optional<TriangleMorphism> fill_triangle_morphism(const ChainMap& g,
                                                       const TriangleCertificate& t,
                                                       const TriangleCertificate& tp) {
  auto all = fill_triangle_morphism_all(g, t.t, tp.t);
  if (!all.solvable) return std::nullopt;
  return all.particular;
}

bool HtpySquare::verify() const {
  if (!is_chain_map(f) || !is_chain_map(fp) || !is_chain_map(a) || !is_chain_map(b)) return false;
  if (!(a.Y == f.X && b.Y == f.Y && a.X == fp.X && b.X == fp.Y)) return false;
  return check_homotopy(compose(f, a), compose(b, fp), s);
}

bool ThreeByThree::verify() const {
  for (auto& r : rows)
    if (!r.verify()) return false;
  for (auto& c : cols)
    if (!c.verify()) return false;
  const ChainMap &f = rows[1].t.u, &fp = rows[0].t.u;
  const ChainMap &a = cols[0].t.u, &b = cols[1].t.u;
  if (!check_homotopy(compose(f, a), compose(b, fp), input_square)) return false;
  // The remaining commutations are strict; the top-right one strictly
  // anti-commutes.
  bool ok = compose(cols[2].t.u, rows[0].t.v) == compose(rows[1].t.v, cols[1].t.u) &&
            compose(rows[1].t.w, cols[2].t.u) == compose(shift_map(cols[0].t.u, 1), rows[0].t.w) &&
            compose(rows[2].t.u, cols[0].t.v) == compose(cols[1].t.v, rows[1].t.u) &&
            compose(rows[2].t.v, cols[1].t.v) == compose(cols[2].t.v, rows[1].t.v) &&
            compose(rows[2].t.w, cols[2].t.v) == compose(shift_map(cols[0].t.v, 1), rows[1].t.w) &&
            compose(cols[1].t.w, rows[2].t.u) == compose(shift_map(rows[0].t.u, 1), cols[0].t.w) &&
            compose(cols[2].t.w, rows[2].t.v) == compose(shift_map(rows[0].t.v, 1), cols[1].t.w);
  if (!ok) return false;
  return compose(shift_map(cols[0].t.w, 1), rows[2].t.w) ==
         cm_neg(compose(shift_map(rows[0].t.w, 1), cols[2].t.w));
}

ThreeByThree complete_3x3(const HtpySquare& sq) {
  check(sq.verify(), "square witness failed verification");
  const Ring& R = sq.f.X.ring;
  const Complex &X = sq.f.X, &Y = sq.f.Y, &Xp = sq.fp.X, &Yp = sq.fp.Y;
  ThreeByThree out;
  out.rows[0] = cone_certificate(sq.fp);
  out.rows[1] = cone_certificate(sq.f);
  out.cols[0] = cone_certificate(sq.a);
  out.cols[1] = cone_certificate(sq.b);
  out.input_square = sq.s;
  const Complex &Zp = out.rows[0].t.Z, &Z = out.rows[1].t.Z;
  const Complex &Xpp = out.cols[0].t.Z, &Ypp = out.cols[1].t.Z;

  auto wit = [&](int n, int rows_, int cols_) {
    auto it = sq.s.h.find(n);
    return it != sq.s.h.end() ? it->second : zero_m(R, rows_, cols_);
  };
  // c : Cone(fp) -> Cone(f) is [[b, -s],[0, a]]; the induced map of the
  // vertical cones is [[f, s],[0, fp]].
  ChainMap c = zero_map(Zp, Z);
  for (auto& [n, r] : Zp.ranks) {
    if (Z.rank(n) == 0) continue;
    Matrix m = block2x2(sq.b.at(n), neg(wit(n + 1, Y.rank(n), Xp.rank(n + 1))),
                        zero_m(R, X.rank(n + 1), Yp.rank(n)), sq.a.at(n + 1));
    c.set(n, m);
  }
  c.validate();
  ChainMap fpp = zero_map(Xpp, Ypp);
  for (auto& [n, r] : Xpp.ranks) {
    if (Ypp.rank(n) == 0) continue;
    Matrix m = block2x2(sq.f.at(n), wit(n + 1, Y.rank(n), Xp.rank(n + 1)),
                        zero_m(R, Yp.rank(n + 1), X.rank(n)), sq.fp.at(n + 1));
    fpp.set(n, m);
  }
  fpp.validate();
  out.rows[2] = cone_certificate(fpp);
  const Complex& Zpp = out.rows[2].t.Z;

  // Strict permutation iso P : Cone(c) -> Cone(fpp), (y,x,y',x') -> (y,y',x,-x').
  Cone cc = cone(c);
  ChainMap P = zero_map(cc.C, Zpp);
  for (auto& [n, r] : cc.C.ranks) {
    if (Zpp.rank(n) == 0) continue;
    Matrix m = zero_m(R, Zpp.rank(n), r);
    int ry = Y.rank(n), rx = X.rank(n + 1), ryp = Yp.rank(n + 1), rxp = Xp.rank(n + 2);
    // source order (y, x, y', x'); target order (y, y', x, x').
    for (int i = 0; i < ry; ++i) m.at(i, i) = R.reduce(Rat(1));
    for (int i = 0; i < ryp; ++i) m.at(ry + i, ry + rx + i) = R.reduce(Rat(1));
    for (int i = 0; i < rx; ++i) m.at(ry + ryp + i, ry + i) = R.reduce(Rat(1));
    for (int i = 0; i < rxp; ++i) m.at(ry + ryp + rx + i, ry + rx + ryp + i) = R.reduce(Rat(-1));
    P.set(n, m);
  }
  P.validate();
  ChainMap Pinv = zero_map(Zpp, cc.C);
  for (auto& [n, m] : P.comps) Pinv.set(n, transpose(m));
  Pinv.validate();
  check(compose(Pinv, P) == identity_map(cc.C), "permutation iso inverse mismatch");

  ChainMap v3 = compose(P, cc.iota);
  ChainMap w3 = compose(cc.pi, Pinv);
  auto cand = make_candidate(Zp, Z, Zpp, c, v3, w3);
  check(cand.has_value(), "third column candidate invariants failed");
  auto cert = certify_with_maps(*cand, Pinv, P);
  check(cert.has_value(), "third column certificate failed");
  out.cols[2] = *cert;
  check(out.verify(), "3x3 diagram failed verification");
  return out;
}

SplitIdempotentResult split_idempotent(const Complex& X, const ChainMap& e,
                                       bool parity_constrained) {
  check(is_chain_map(e) && e.X == X && e.Y == X, "endomorphism expected");
  check(homotopy_witness(compose(e, e), e).has_value(), "not idempotent up to homotopy");
  const Ring& R = X.ring;
  SplitIdempotentResult res;

  auto finish_trivial = [&](bool to_id) {
    IdempotentSplitting s;
    if (to_id) {
      s.Y = X;
      s.p = identity_map(X);
      s.i = identity_map(X);
      s.ip_matches = *homotopy_witness(identity_map(X), e);
    } else {
      s.Y = zero_complex(R);
      s.p = zero_map(X, s.Y);
      s.i = zero_map(s.Y, X);
      s.ip_matches = *homotopy_witness(zero_map(X, X), e);
    }
    check(s.verify(X, e), "trivial splitting failed verification");
    res.status = SplitStatus::Split;
    res.splitting = s;
  };
  if (homotopic(e, identity_map(X))) {
    finish_trivial(true);
    return res;
  }
  if (homotopic(e, zero_map(X, X))) {
    finish_trivial(false);
    return res;
  }
  if (!R.is_field()) {
    res.status = SplitStatus::Undecided;
    res.note = "no decision procedure outside fields";
    return res;
  }

  // Transport to the cohomology stalk model, where the idempotent is strict.
  auto s = cohomology(X);
  ChainMap E = compose(s.proj, compose(e, s.sect));
  check(compose(E, E) == E, "induced stalk idempotent must be strict");
  Complex Yst(R);
  std::map<int, Matrix> ibasis, pmat;
  for (auto& [n, r] : s.H.ranks) {
    Matrix En = E.at(n);
    Matrix cur(R, r, 0);
    for (int j = 0; j < En.cols; ++j) {
      Matrix test = cur.cols == 0 ? column(En, j) : hstack(cur, column(En, j));
      if (field_rank(test) > cur.cols) cur = test;
    }
    if (cur.cols == 0) continue;
    Yst.set_rank(n, cur.cols);
    ibasis[n] = cur;
    pmat[n] = solve_affine(cur, En).particular;
  }
  IdempotentSplitting sp;
  sp.Y = Yst;
  sp.p = zero_map(X, Yst);
  sp.i = zero_map(Yst, X);
  for (auto& [n, m] : ibasis) sp.i.set(n, matmul(s.sect.at(n), m));
  for (auto& [n, m] : pmat) sp.p.set(n, matmul(m, s.proj.at(n)));
  sp.i.validate();
  sp.p.validate();
  auto ip = homotopy_witness(compose(sp.i, sp.p), e);
  check(ip.has_value(), "stalk transport witness unexpectedly unsolvable");
  sp.ip_matches = *ip;
  check(sp.verify(X, e), "idempotent splitting failed verification");

  if (parity_constrained) {
    long long chi = 0;
    for (auto& [n, r] : Yst.ranks) chi += (n % 2 == 0 ? r : -r);
    if (((chi % 2) + 2) % 2 == 1) {
      res.status = SplitStatus::Obstructed;
      res.note = "image has odd Euler characteristic; no splitting with even-dimensional components";
      return res;
    }
    res.status = SplitStatus::Undecided;
    res.note = "parity obstruction vanishes; construction does not certify parity of a splitting";
    return res;
  }
  res.status = SplitStatus::Split;
  res.splitting = sp;
  return res;
}

SplitTriangleData coordinate_split_triangle(const Complex& X,
                                            const std::map<int, std::vector<int>>& sub) {
  X.validate();
  const Ring& R = X.ring;
  std::map<int, std::vector<int>> subs, comps;
  for (auto& [n, r] : X.ranks) {
    std::vector<int> sel;
    auto it = sub.find(n);
    if (it != sub.end()) sel = it->second;
    std::vector<bool> mark(r, false);
    for (int j : sel) {
      check(0 <= j && j < r && !mark[j], "bad coordinate selection");
      mark[j] = true;
    }
    std::vector<int> in, outv;
    for (int j = 0; j < r; ++j) (mark[j] ? in : outv).push_back(j);
    subs[n] = in;
    comps[n] = outv;
  }
  Complex S(R), Q(R);
  for (auto& [n, r] : X.ranks) {
    S.set_rank(n, (int)subs[n].size());
    Q.set_rank(n, (int)comps[n].size());
  }
  std::map<int, Matrix> Ablk;
  for (auto& [n, dm] : X.diffs) {
    // Selected columns of d must land in selected rows.
    Matrix leak = select_rows(select_columns(dm, subs[n]), comps[n + 1]);
    check(leak.is_zero(), "selected coordinates are not closed under the differential");
    Matrix dS = select_rows(select_columns(dm, subs[n]), subs[n + 1]);
    Matrix dQ = select_rows(select_columns(dm, comps[n]), comps[n + 1]);
    if (!dS.is_zero()) S.set_diff(n, dS);
    if (!dQ.is_zero()) Q.set_diff(n, dQ);
    Ablk[n] = select_rows(select_columns(dm, comps[n]), subs[n + 1]);
  }
  S.normalize();
  Q.normalize();
  S.validate();
  Q.validate();

  SplitTriangleData out;
  std::map<int, Matrix> incl, proj, sec, rho;
  for (auto& [n, r] : X.ranks) {
    Matrix u(R, r, (int)subs[n].size());
    for (int j = 0; j < (int)subs[n].size(); ++j) u.at(subs[n][j], j) = R.reduce(Rat(1));
    Matrix v(R, (int)comps[n].size(), r);
    for (int j = 0; j < (int)comps[n].size(); ++j) v.at(j, comps[n][j]) = R.reduce(Rat(1));
    incl[n] = u;
    proj[n] = v;
    sec[n] = transpose(v);
    rho[n] = transpose(u);
  }
  out.section = sec;
  out.retract = rho;

  CandidateTriangle t;
  t.X = S;
  t.Y = X;
  t.Z = Q;
  t.u = zero_map(S, X);
  t.v = zero_map(X, Q);
  t.w = zero_map(Q, shift(S, 1));
  for (auto& [n, m] : incl)
    if (m.cols > 0) t.u.set(n, m);
  for (auto& [n, m] : proj)
    if (m.rows > 0) t.v.set(n, m);
  for (auto& [n, r] : Q.ranks) {
    if (S.rank(n + 1) == 0) continue;
    Matrix A = Ablk.count(n) ? Ablk[n] : zero_m(R, S.rank(n + 1), r);
    t.w.set(n, neg(A));
  }
  t.u.validate();
  t.v.validate();
  t.w.validate();
  // w∘v contracts via -rho; ([1]u)∘w via +section.
  for (auto& [n, r] : X.ranks)
    if (S.rank(n) > 0 && !rho[n].is_zero()) t.wv_null.h[n] = neg(rho[n]);
  for (auto& [n, r] : Q.ranks)
    if (!sec[n].is_zero()) t.uw_null.h[n] = sec[n];
  check(t.verify(), "coordinate split candidate failed verification");

  TriangleCertificate cert;
  cert.t = t;
  cert.cone_data = cone(t.u);
  const Complex& C = cert.cone_data.C;
  cert.to_cone = zero_map(Q, C);
  cert.from_cone = zero_map(C, Q);
  for (auto& [n, r] : Q.ranks) {
    if (C.rank(n) == 0) continue;
    Matrix A = Ablk.count(n) ? Ablk[n] : zero_m(R, S.rank(n + 1), r);
    cert.to_cone.set(n, vstack(sec[n], neg(A)));
  }
  for (auto& [n, r] : C.ranks) {
    if (Q.rank(n) == 0) continue;
    cert.from_cone.set(n, hstack(proj[n], zero_m(R, Q.rank(n), S.rank(n + 1))));
  }
  cert.to_cone.validate();
  cert.from_cone.validate();
  for (auto& [n, r] : X.ranks) {
    if (C.rank(n - 1) == 0 || S.rank(n) == 0) continue;
    Matrix m = vstack(zero_m(R, X.rank(n - 1), r), neg(rho[n]));
    cert.sq_to_v.h[n] = m;
  }
  for (auto& [n, r] : C.ranks) {
    if (S.rank(n) == 0 || X.rank(n) == 0) continue;
    cert.sq_from_w.h[n] = hstack(neg(rho[n]), zero_m(R, S.rank(n), S.rank(n + 1)));
  }
  for (auto& [n, r] : C.ranks) {
    if (C.rank(n - 1) == 0 || S.rank(n) == 0 || X.rank(n) == 0) continue;
    Matrix m = block2x2(zero_m(R, X.rank(n - 1), X.rank(n)), zero_m(R, X.rank(n - 1), S.rank(n + 1)),
                        neg(rho[n]), zero_m(R, S.rank(n), S.rank(n + 1)));
    cert.inv_C.h[n] = m;
  }
  check(cert.verify(), "coordinate split certificate failed verification");
  out.t = t;
  out.cert = cert;
  return out;
}

}  // namespace wk
