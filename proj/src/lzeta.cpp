#include "coho/lzeta.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace coho {

namespace {

// Row-echelon accumulator with distinct pivots; rows are reduced against all
// earlier rows on insert, so membership reduction is exact.
struct Echelon {
  const Field* F;
  std::vector<KVec> rows;
  std::vector<int> piv;

  void reduce(KVec& v) const {
    for (size_t r = 0; r < rows.size(); ++r) {
      uint16_t c = v[size_t(piv[r])];
      if (!c) continue;
      uint16_t f = F->mul(c, F->inv(rows[r][size_t(piv[r])]));
      for (size_t t = 0; t < v.size(); ++t) v[t] = F->sub(v[t], F->mul(f, rows[r][t]));
    }
  }
  bool insert(KVec v) {
    reduce(v);
    for (size_t t = 0; t < v.size(); ++t)
      if (v[t]) {
        piv.push_back(int(t));
        rows.push_back(std::move(v));
        return true;
      }
    return false;
  }
};

KVec row_mul(const FieldPtr& F, const KVec& u, const KMatrix& A) {
  KVec out(size_t(A.cols()), 0);
  for (int i = 0; i < A.rows(); ++i) {
    if (!u[size_t(i)]) continue;
    for (int j = 0; j < A.cols(); ++j)
      out[size_t(j)] = F->add(out[size_t(j)], F->mul(u[size_t(i)], A.get(i, j)));
  }
  return out;
}

bool all_zero(const KVec& v) {
  for (uint16_t c : v)
    if (c) return false;
  return true;
}

// Norm map kG -> kG, e |-> sum_g g; x maps to aug(x) times the norm, so the
// kernel is the augmentation ideal.
FreeMap norm_map(const FieldPtr& F, const GroupPtr& G) {
  FreeMap nu(F, G, 1, 1);
  for (int g = 0; g < G->order(); ++g) nu.add_coeff(0, 0, g, 1);
  return nu;
}

// Matrix of "compose with f" on kG-linear maps into N. A map u out of the
// target of f is the row of its generator values ((gen i, coord s) -> i*m+s);
// u composed with f is the row u * hom_matrix(f, N).
KMatrix hom_matrix(const FreeMap& f, const RepModule& N) {
  const FieldPtr& F = f.field();
  const GroupPtr& G = f.group();
  const int m = N.dim, ng = G->order();
  KMatrix A(F, f.dst_rank() * m, f.src_rank() * m);
  for (int i = 0; i < f.dst_rank(); ++i)
    for (int j = 0; j < f.src_rank(); ++j)
      for (int g = 0; g < ng; ++g) {
        uint16_t c = f.coeff(i, j, g);
        if (!c) continue;
        const KMatrix& act = N.act[size_t(g)];
        for (int sp = 0; sp < m; ++sp)
          for (int s = 0; s < m; ++s) {
            uint16_t v = act.get(sp, s);
            if (v) A.add_at(i * m + s, j * m + sp, F->mul(c, v));
          }
      }
  return A;
}

// Component of f (x) id_M written on the untwisted free frame of P (x) M:
// free generators are (gen, module basis) pairs (j, t) -> j*m+t, and the
// diagonal action is absorbed by letting g carry act(g^{-1}) across.
FreeMap twist(const FreeMap& f, const RepModule& M) {
  const FieldPtr& F = f.field();
  const GroupPtr& G = f.group();
  const int m = M.dim, ng = G->order();
  FreeMap out(F, G, f.dst_rank() * m, f.src_rank() * m);
  for (int i = 0; i < f.dst_rank(); ++i)
    for (int j = 0; j < f.src_rank(); ++j)
      for (int g = 0; g < ng; ++g) {
        uint16_t c = f.coeff(i, j, g);
        if (!c) continue;
        const KMatrix& a = M.act[size_t(G->inv(g))];
        for (int s = 0; s < m; ++s)
          for (int t = 0; t < m; ++t) {
            uint16_t v = a.get(s, t);
            if (v) out.add_coeff(i * m + s, j * m + t, g, F->mul(c, v));
          }
      }
  return out;
}

}  // namespace

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Yes:
      return "Yes";
    case VerdictStatus::No:
      return "No";
    case VerdictStatus::YesUpToDegree:
      return "YesUpToDegree";
    default:
      return "Undetermined";
  }
}

RepModule trivial_module(const FieldPtr& F, const GroupPtr& G) {
  KMatrix one(F, 1, 1);
  one.set(0, 0, 1);
  return RepModule(F, G, std::vector<KMatrix>(size_t(G->order()), one));
}

RepModule omega(const Resolution& P, int n) {
  if (P.kind != "minimal")
    throw InputError("NotMinimal", "syzygies are read off minimal resolutions only");
  const ComplexPtr& C = P.complex;
  if (n < 0 || n > C->max_deg() - 1)
    throw InputError("TruncationUnderflow", "syzygy " + std::to_string(n) +
                                                " needs the resolution stored through degree " +
                                                std::to_string(n + 1));
  const FieldPtr& F = C->field();
  const GroupPtr& G = C->group();
  if (n == 0) return trivial_module(F, G);
  if (n == 1) return submodule_as_rep(norm_map(F, G), SubmoduleKind::Kernel);
  return submodule_as_rep(C->diff(n - 1), SubmoduleKind::Kernel);
}

RepModule lzeta(const CohRing& R, const CohClass& z) {
  if (z.is_zero()) throw InputError("ZeroClass", "L needs a nonzero class");
  if (z.degree < 1) throw InputError("PreconditionViolated", "L needs a class of degree >= 1");
  const Resolution& P = R.res();
  if (P.kind != "minimal") throw InputError("NotMinimal", "L needs a minimal resolution");
  const ComplexPtr& C = P.complex;
  const FieldPtr& F = C->field();
  const GroupPtr& G = C->group();
  const int ng = G->order(), n = z.degree;

  // The class functional pulled back through the contraction: on the kernel
  // of the previous differential this computes the induced module map to k,
  // because the contraction provides a preimage there.
  KMatrix S = P.view->s_matrix(n - 1);
  KVec phi(size_t(C->kdim(n - 1)), 0);
  for (int c = 0; c < C->kdim(n - 1); ++c) {
    uint16_t acc = 0;
    for (int i = 0; i < C->rank(n); ++i) {
      uint16_t u = z.cocycle[size_t(i)];
      if (!u) continue;
      for (int h = 0; h < ng; ++h) {
        uint16_t sv = S.get(i * ng + h, c);
        if (sv) acc = F->add(acc, F->mul(u, sv));
      }
    }
    phi[size_t(c)] = acc;
  }

  // Stack the boundary condition over the kG-linear adjoint of the
  // functional (v maps to sum_g phi(g^{-1} v) g, nonzero exactly where the
  // functional's orbit is): the kernel of the stack is L.
  FreeMap base = (n == 1) ? norm_map(F, G) : C->diff(n - 1);
  FreeMap X(F, G, base.dst_rank() + 1, base.src_rank());
  X.set_block(0, 0, base);
  for (int j = 0; j < base.src_rank(); ++j)
    for (int g = 0; g < ng; ++g) {
      uint16_t v = phi[size_t(j * ng + G->inv(g))];
      if (v) X.set_coeff(base.dst_rank(), j, g, v);
    }
  RepModule L = submodule_as_rep(X, SubmoduleKind::Kernel);
  RepModule O = omega(P, n);
  if (L.dim != O.dim - 1)
    throw InternalError("SolverBug", "kernel dimension is not one below the syzygy");
  return L;
}

ModuleResolution module_resolution(const RepModule& M, int D) {
  const FieldPtr& F = M.F;
  const GroupPtr& G = M.G;
  if (!F || !G) throw InputError("PreconditionViolated", "module carries no field or group");
  const int ng = G->order(), e = G->identity(), m = M.dim;

  // Generators modulo the radical: unit vectors that enlarge the span of the
  // translate differences g*v - v give a minimal generating set.
  Echelon span{F.get(), {}, {}};
  for (int t = 0; t < m; ++t)
    for (int h = 0; h < ng; ++h) {
      if (h == e) continue;
      KVec y = M.act[size_t(h)].col(t);
      y[size_t(t)] = F->sub(y[size_t(t)], 1);
      span.insert(std::move(y));
    }
  std::vector<int> gens;
  for (int t = 0; t < m; ++t) {
    KVec u(size_t(m), 0);
    u[size_t(t)] = 1;
    if (span.insert(std::move(u))) gens.push_back(t);
  }
  const int r0 = int(gens.size());

  // Projective cover kG^{r0} -> M with a k-linear section.
  KMatrix Q(F, m, r0 * ng);
  for (int j = 0; j < r0; ++j)
    for (int g = 0; g < ng; ++g) {
      KVec col = M.act[size_t(g)].col(gens[size_t(j)]);
      for (int s = 0; s < m; ++s)
        if (col[size_t(s)]) Q.set(s, j * ng + g, col[size_t(s)]);
    }
  KMatrix eta(F, r0 * ng, m);
  for (int t = 0; t < m; ++t) {
    KVec unit(size_t(m), 0);
    unit[size_t(t)] = 1;
    auto sec = Q.solve(unit);
    if (!sec) throw InternalError("SolverBug", "chosen generators do not span the module");
    for (int r = 0; r < r0 * ng; ++r)
      if ((*sec)[size_t(r)]) eta.set(r, t, (*sec)[size_t(r)]);
  }
  return {M, minimal_cover_resolution(F, G, D, r0, Q, eta, "minimal")};
}

KVec ExtDeg::coords(const FieldPtr& F, const KVec& row) const {
  if (int(row.size()) != del.rows())
    throw InputError("PreconditionViolated", "Hom row length mismatch");
  if (!all_zero(row_mul(F, row, del)))
    throw InputError("PreconditionViolated", "row is not a cocycle");
  KVec res = KMatrix::coords_mod_subspace(row, cobound, bpiv);
  KVec c(size_t(dim), 0);
  for (int i = 0; i < dim; ++i) c[size_t(i)] = res[size_t(rpiv[size_t(i)])];
  for (size_t j = 0; j < res.size(); ++j) {
    uint16_t acc = res[j];
    for (int i = 0; i < dim; ++i)
      acc = F->add(acc, F->neg(F->mul(c[size_t(i)], reps.get(i, int(j)))));
    if (acc) throw InternalError("SolverBug", "Ext reduction failed");
  }
  return c;
}

std::vector<ExtDeg> ext_dims(const ModuleResolution& PM, const RepModule& N, int cap) {
  const ComplexPtr& C = PM.res.complex;
  const FieldPtr& F = C->field();
  if (cap < 0 || cap + 1 > C->max_deg())
    throw InputError("TruncationUnderflow", "Ext through degree " + std::to_string(cap) +
                                                " needs the resolution stored through " +
                                                std::to_string(cap + 1));
  const int m = N.dim;
  std::vector<ExtDeg> out;
  for (int i = 0; i <= cap; ++i) {
    const int w = C->rank(i) * m;
    ExtDeg b;
    b.del = hom_matrix(C->diff(i + 1), N);
    KMatrix Z = b.del.transpose().kernel_basis();
    if (i > 0) {
      KMatrix Bm = hom_matrix(C->diff(i), N);
      b.bpiv = Bm.rref();
      b.cobound = Bm.block(0, 0, int(b.bpiv.size()), w);
    } else {
      b.cobound = KMatrix(F, 0, w);
    }
    std::vector<KVec> rows;
    for (int r = 0; r < Z.rows(); ++r) {
      KVec res = KMatrix::coords_mod_subspace(Z.row(r), b.cobound, b.bpiv);
      if (!all_zero(res)) rows.push_back(std::move(res));
    }
    KMatrix R = KMatrix::from_rows(F, rows, w);
    b.rpiv = R.rref();
    b.reps = R.block(0, 0, int(b.rpiv.size()), w);
    b.dim = int(b.rpiv.size());
    if (b.dim != Z.rows() - b.cobound.rows())
      throw InternalError("SolverBug", "Ext quotient dimension mismatch");
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<ExtDeg> ext_dims(const RepModule& M, const RepModule& N, int cap) {
  return ext_dims(module_resolution(M, cap + 1), N, cap);
}

ModuleTransport::ModuleTransport(const CohRing& R, const ModuleResolution& PM, int hi)
    : R_(R), PM_(PM), hi_(hi) {
  const Resolution& P = R.res();
  const ComplexPtr& PC = P.complex;
  const ComplexPtr& MC = PM.res.complex;
  const FieldPtr& F = PC->field();
  const GroupPtr& G = PC->group();
  const RepModule& M = PM.module;
  const int ng = G->order(), e = G->identity(), m = M.dim;
  if (m == 0) throw InputError("PreconditionViolated", "transport needs a nonzero module");
  if (hi < 0 || hi > PC->max_deg() || hi > PM.top())
    throw InputError("TruncationUnderflow", "transport window exceeds the stored resolutions");

  // Untwisted P (x) M: free on (generator, module basis) pairs, with the
  // transferred contraction and the degree-0 model mapping onto M.
  std::vector<int> ranks;
  std::vector<FreeMap> diffs;
  for (int d = 0; d <= hi; ++d) ranks.push_back(PC->rank(d) * m);
  for (int d = 1; d <= hi; ++d) diffs.push_back(twist(PC->diff(d), M));
  ComplexPtr TC = std::make_shared<ChainComplex>(F, G, 0, std::move(ranks), std::move(diffs));

  std::vector<KMatrix> smat;
  for (int d = 0; d < hi; ++d) {
    KMatrix SP = P.view->s_matrix(d);
    KMatrix ST(F, TC->kdim(d + 1), TC->kdim(d));
    for (int rp = 0; rp < SP.rows(); ++rp)
      for (int cp = 0; cp < SP.cols(); ++cp) {
        uint16_t v = SP.get(rp, cp);
        if (!v) continue;
        const int ip = rp / ng, gp = rp % ng, jp = cp / ng, g = cp % ng;
        const KMatrix& a = M.act[size_t(G->mul(G->inv(gp), g))];
        for (int u = 0; u < m; ++u)
          for (int t = 0; t < m; ++t) {
            uint16_t w = a.get(u, t);
            if (w) ST.add_at((ip * m + u) * ng + gp, (jp * m + t) * ng + g, F->mul(v, w));
          }
      }
    smat.push_back(std::move(ST));
  }

  const ModelPoint& am = P.aug_model();
  KMatrix epsT(F, m, TC->kdim(0));
  KMatrix etaT(F, TC->kdim(0), m);
  for (int j = 0; j < PC->rank(0); ++j)
    for (int g = 0; g < ng; ++g) {
      uint16_t ev = am.eps.get(0, j * ng + g);
      uint16_t nv = am.eta.get(j * ng + g, 0);
      if (!ev && !nv) continue;
      const KMatrix& a = M.act[size_t(g)];
      const KMatrix& ai = M.act[size_t(G->inv(g))];
      for (int s = 0; s < m; ++s)
        for (int t = 0; t < m; ++t) {
          if (ev && a.get(s, t)) epsT.add_at(s, (j * m + t) * ng + g, F->mul(ev, a.get(s, t)));
          if (nv && ai.get(s, t)) etaT.add_at((j * m + s) * ng + g, t, F->mul(nv, ai.get(s, t)));
        }
    }

  // Both comparison maps lift the identity of M through the degree-0 models.
  const ModelPoint& mm = PM.res.aug_model();
  FreeMap f0(F, G, TC->rank(0), MC->rank(0));
  for (int j = 0; j < MC->rank(0); ++j) f0.set_gen_column(j, etaT.mul_vec(mm.eps.col(j * ng + e)));
  FreeMap g0(F, G, MC->rank(0), TC->rank(0));
  for (int q = 0; q < TC->rank(0); ++q) g0.set_gen_column(q, mm.eta.mul_vec(epsT.col(q * ng + e)));

  ViewPtr tview = std::make_shared<DenseView>(
      TC, std::move(smat), std::vector<ModelPoint>{ModelPoint{0, std::move(etaT), std::move(epsT)}});
  T_ = Resolution{TC, tview, "tensor-module"};

  GradedMap fseed(MC, TC, 0);
  fseed.set(0, std::move(f0));
  if (hi >= 1) {
    auto ph = lift_through_view(MC, *tview, 0, fseed, 1, hi);
    if (!ph) throw InternalError("SolverBug", "module-to-tensor lift failed");
    phi_ = std::move(*ph);
  } else {
    phi_ = std::move(fseed);
  }
  GradedMap gseed(TC, MC, 0);
  gseed.set(0, std::move(g0));
  if (hi >= 1) {
    auto ps = lift_through_view(TC, *PM.res.view, 0, gseed, 1, hi);
    if (!ps) throw InternalError("SolverBug", "tensor-to-module lift failed");
    psi_ = std::move(*ps);
  } else {
    psi_ = std::move(gseed);
  }

  // The equivalence is certified, never assumed: the round trip must be
  // homotopic to the identity.
  GradedMap comp = psi_.after(phi_);
  GradedMap idm = identity_map(MC).restrict_window(0, hi);
  if (!(comp - idm).is_zero()) {
    int chk = std::min(hi, PM.top() - 1);
    auto H = find_homotopy(comp, idm, 0, chk, PM.res.view.get());
    if (!H) throw InternalError("SolverBug", "transport is not a homotopy equivalence");
  }
}

GradedMap ModuleTransport::zeta_hat(const CohClass& z) const {
  const int n = z.degree;
  if (n < 0 || n > hi_)
    throw InputError("TruncationUnderflow", "class degree exceeds the transport window");
  const GradedMap& zh = R_.chain_rep(z);
  GradedMap W(T_.complex, T_.complex, -n);
  for (int d = n; d <= hi_; ++d) W.set(d, twist(zh.component_or_zero(d), PM_.module));
  return psi_.after(W.after(phi_));
}

KMatrix ext_action(const std::vector<ExtDeg>& ext, const RepModule& N, const GradedMap& zh,
                   int i) {
  const FieldPtr& F = N.F;
  const int n = -zh.deg;
  if (n < 0 || i < 0 || i + n >= int(ext.size()))
    throw InputError("TruncationUnderflow", "Ext bases do not cover the action degrees");
  const ExtDeg& src = ext[size_t(i)];
  const ExtDeg& dst = ext[size_t(i + n)];
  KMatrix A(F, dst.dim, src.dim);
  if (src.dim == 0 || dst.dim == 0) return A;
  KMatrix H = hom_matrix(zh.component_or_zero(i + n), N);
  for (int j = 0; j < src.dim; ++j) {
    KVec c = dst.coords(F, row_mul(F, src.reps.row(j), H));
    for (int r = 0; r < dst.dim; ++r)
      if (c[size_t(r)]) A.set(r, j, c[size_t(r)]);
  }
  return A;
}

KMatrix zeta_action(const CohRing& R, const CohClass& z, const RepModule& M, const RepModule& N,
                    int i) {
  const int n = z.degree;
  if (i < 0 || n < 0) throw InputError("PreconditionViolated", "negative Ext degree");
  ModuleResolution PM = module_resolution(M, i + n + 1);
  std::vector<ExtDeg> ext = ext_dims(PM, N, i + n);
  if (z.is_zero() || M.dim == 0)
    return KMatrix(R.res().complex->field(), ext[size_t(i + n)].dim, ext[size_t(i)].dim);
  ModuleTransport MT(R, PM, i + n);
  return ext_action(ext, N, MT.zeta_hat(z), i);
}

namespace {

Verdict oracle_run(const CohRing& R, const CohClass& z, int cap, bool self) {
  if (z.is_zero()) throw InputError("ZeroClass", "the oracle needs a nonzero class");
  const FieldPtr& F = R.res().complex->field();
  const GroupPtr& G = R.res().complex->group();
  const int n = z.degree;
  if (cap < n) throw InputError("PreconditionViolated", "cap is below the class degree");
  if (cap > R.top())
    throw InputError("TruncationUnderflow", "cap exceeds the stored resolution");

  RepModule L = lzeta(R, z);
  Verdict v;
  if (L.dim == 0) {
    v.status = VerdictStatus::YesUpToDegree;
    v.certified_degree = cap;
    v.note = "L is the zero module, so every Ext group vanishes";
    return v;
  }
  ModuleResolution PM = module_resolution(L, cap + 1);
  RepModule N = self ? L : trivial_module(F, G);
  std::vector<ExtDeg> ext = ext_dims(PM, N, cap);
  ModuleTransport MT(R, PM, cap);
  GradedMap zh = MT.zeta_hat(z);
  for (int i = 0; i + n <= cap; ++i) {
    KMatrix A = ext_action(ext, N, zh, i);
    for (int j = 0; j < A.cols(); ++j)
      for (int r = 0; r < A.rows(); ++r)
        if (A.get(r, j)) {
          v.status = VerdictStatus::No;
          v.witness_degree = i;
          v.witness = ext[size_t(i)].reps.row(j);
          v.note = std::string(self ? "Ext(L,L)" : "Ext(L,k)") + " basis class " +
                   std::to_string(j) + " in degree " + std::to_string(i) +
                   " maps to a nonzero class in degree " + std::to_string(i + n);
          return v;
        }
  }
  v.status = VerdictStatus::YesUpToDegree;
  v.certified_degree = cap;
  v.note = self ? "the action vanishes on Ext(L,L) through the cap"
                : "the action vanishes on Ext(L,k) through the cap";
  return v;
}

}  // namespace

Verdict oracle_productive(const CohRing& R, const CohClass& z, int cap) {
  return oracle_run(R, z, cap, true);
}

Verdict oracle_semiproductive(const CohRing& R, const CohClass& z, int cap) {
  return oracle_run(R, z, cap, false);
}

int default_oracle_cap(const FieldPtr& F, const GroupPtr& G) {
  return (G->order() == 8 && F->q() == 4) ? 4 : 6;
}

}  // namespace coho
