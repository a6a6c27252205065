#include "coho/postnikov.hpp"

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "coho/steenrod.hpp"

namespace coho {

namespace {

// Random graded data of the given degree over the full window; adding its
// defect to a homotopy regenerates the homotopy without disturbing any of
// the identities it witnesses.
GradedMap random_shift(const ComplexPtr& src, const ComplexPtr& dst, int deg, unsigned seed) {
  const FieldPtr& F = src->field();
  const GroupPtr& G = src->group();
  const int ng = G->order();
  std::mt19937 rng(seed);
  GradedMap Y(src, dst, deg);
  for (int s = src->min_deg(); s <= src->max_deg(); ++s) {
    if (!dst->in_window(s + deg)) continue;
    FreeMap R(F, G, dst->rank(s + deg), src->rank(s));
    for (int i = 0; i < R.dst_rank(); ++i)
      for (int j = 0; j < R.src_rank(); ++j)
        for (int g = 0; g < ng; ++g)
          R.set_coeff(i, j, g, static_cast<uint16_t>(rng() % static_cast<unsigned>(F->q())));
    Y.set(s, std::move(R));
  }
  return Y;
}

int rank_or0(const ComplexPtr& C, int d) { return C->in_window(d) ? C->rank(d) : 0; }

// Copy the components of f onto complexes whose stored matrices agree with
// f's source and target degree by degree over [lo, hi].
GradedMap rebase(const GradedMap& f, const ComplexPtr& src, const ComplexPtr& dst, int lo,
                 int hi) {
  GradedMap out(src, dst, f.deg);
  for (int d = lo; d <= hi; ++d) {
    FreeMap c = f.component_or_zero(d);
    if (c.dst_rank() != rank_or0(dst, d + f.deg) || c.src_rank() != rank_or0(src, d))
      throw InternalError("BadShape", "rebase onto complexes with a different layout");
    out.set(d, std::move(c));
  }
  return out;
}

enum class CounitSide { Left, Right };

// Apply the degree-0 augmentation model to one tensor factor and carry the
// other factor to its own basis; a degree-0 chain map TC.C -> other factor.
GradedMap tensor_counit(const TensorComplex& TC, const ModelPoint& mp, CounitSide side) {
  if (mp.degree != 0)
    throw InternalError("PreconditionViolated", "tensor counit needs a degree-0 model");
  const ComplexPtr& out = side == CounitSide::Right ? TC.left : TC.right;
  const FieldPtr& F = TC.C->field();
  const GroupPtr& G = TC.C->group();
  const int ng = G->order(), e = G->identity();
  GradedMap res(TC.C, out, 0);
  for (int n = TC.C->min_deg(); n <= TC.C->max_deg(); ++n) {
    FreeMap f(F, G, rank_or0(out, n), TC.C->rank(n));
    for (const TensorBlock& b : TC.blocks(n)) {
      if (side == CounitSide::Right) {
        if (b.j != 0) continue;
        for (int bb = 0; bb < b.rj; ++bb)
          for (int h = 0; h < ng; ++h) {
            const uint16_t v = mp.eps.get(0, bb * ng + h);
            if (!v) continue;
            for (int a = 0; a < b.ri; ++a) f.add_coeff(a, TC.gen_index(b, a, bb, h), e, v);
          }
      } else {
        if (b.i != 0) continue;
        for (int a = 0; a < b.ri; ++a) {
          const uint16_t v = mp.eps.get(0, a * ng + e);
          if (!v) continue;
          for (int bb = 0; bb < b.rj; ++bb)
            for (int h = 0; h < ng; ++h) f.add_coeff(bb, TC.gen_index(b, a, bb, h), h, v);
        }
      }
    }
    res.set(n, f);
  }
  return res;
}

// Pair the model functional of the target square against the component of
// phi at source degree N, giving a cochain row on the source's generators.
KVec model_pairing_row(const FieldPtr& F, const ModelPoint& mq, const GradedMap& phi, int N,
                       int rN) {
  KVec row(static_cast<size_t>(rN), 0);
  const FreeMap c = phi.component_or_zero(N);
  for (int j = 0; j < rN; ++j) {
    const KVec col = c.gen_column(j);
    uint16_t acc = 0;
    for (size_t t = 0; t < col.size(); ++t)
      if (col[t]) acc = F->add(acc, F->mul(mq.eps.get(0, static_cast<int>(t)), col[t]));
    row[static_cast<size_t>(j)] = acc;
  }
  return row;
}

}  // namespace

PolarizedSphereComplex Postnikov::build_p_zeta(const CohClass& z, int window) const {
  const Resolution& P = R_.res();
  const ComplexPtr& C = P.complex;
  const FieldPtr& F = C->field();
  const GroupPtr& G = C->group();
  if (z.is_zero()) throw InputError("ZeroClass", "the sphere complex needs a nonzero class");
  const int n = z.degree;
  if (n < 1)
    throw InputError("PreconditionViolated", "the glued class must have positive degree");
  const int D = C->max_deg();
  const int w = window < 0 ? 2 * n + 2 : window;
  if (w < 2 * n + 1)
    throw InputError("TruncationUnderflow", "window " + std::to_string(w) +
                                                " is below the required 2n+1 = " +
                                                std::to_string(2 * n + 1));
  if (w > D)
    throw InputError("TruncationUnderflow", "window " + std::to_string(w) +
                                                " exceeds the stored resolution top " +
                                                std::to_string(D));

  // Bottom block: the stored resolution cut at the window. Top block: the
  // same data placed n-1 degrees higher, differentials unchanged.
  std::vector<int> pranks, qranks;
  std::vector<FreeMap> pdiffs, qdiffs;
  for (int d = 0; d <= w; ++d) pranks.push_back(C->rank(d));
  for (int d = 1; d <= w; ++d) pdiffs.push_back(C->diff(d));
  for (int d = 0; d <= w - (n - 1); ++d) qranks.push_back(C->rank(d));
  for (int d = 1; d <= w - (n - 1); ++d) qdiffs.push_back(C->diff(d));
  ComplexPtr Pt = std::make_shared<ChainComplex>(F, G, 0, pranks, pdiffs, true);
  ComplexPtr Qc = std::make_shared<ChainComplex>(F, G, n - 1, qranks, qdiffs, true);

  // The stored contraction transfers verbatim to both blocks.
  std::vector<KMatrix> psm, qsm;
  for (int d = 0; d < w; ++d) psm.push_back(P.view->s_matrix(d));
  for (int d = 0; d <= w - n; ++d) qsm.push_back(P.view->s_matrix(d));
  ModelPoint qm = P.aug_model();
  qm.degree = n - 1;
  ViewPtr pview =
      std::make_shared<DenseView>(Pt, psm, std::vector<ModelPoint>{P.aug_model()});
  ViewPtr qview = std::make_shared<DenseView>(Qc, qsm, std::vector<ModelPoint>{qm});

  // Glue: the chain representative of z, twisted so consecutive components
  // anticommute with the differentials.
  const GradedMap& zh = R_.chain_rep(z);
  GradedMap alpha(Pt, Qc, -1);
  for (int d = n; d <= w; ++d) {
    FreeMap c = zh.component_or_zero(d);
    const uint16_t s = koszul(*F, static_cast<long long>(d) * (n + 1), 1);
    if (s != 1) c = c.scaled(s);
    alpha.set(d, std::move(c));
  }
  if (!alpha.defect().is_zero())
    throw InternalError("SolverBug", "sphere glue fails to anticommute with the differentials");

  PolarizedSphereComplex S;
  S.E = extension_total(Qc, Pt, alpha);
  S.alpha = alpha;
  S.zclass = z;
  S.n = n;
  S.window = w;
  S.qview = qview;
  S.pview = pview;
  S.tview = std::make_shared<HplView>(qview, pview, S.E);

  // Homology through window-1 must be a sphere over the base class.
  for (int d = 0; d <= w - 1; ++d) {
    const int dim = homology(*S.E.total, d).dim;
    const int want = n == 1 ? (d == 0 ? 2 : 0) : (d == 0 || d == n - 1 ? 1 : 0);
    if (dim != want)
      throw InternalError("SolverBug",
                          "sphere complex has wrong homology at degree " + std::to_string(d));
  }
  return S;
}

SphereSquare Postnikov::build_p_zeta_plus(const PolarizedSphereComplex& S) const {
  const ComplexPtr& Qc = S.E.A;
  const ComplexPtr& Pt = S.E.Cpart;
  const int w = S.window;
  SphereSquare T;
  T.QQ = tensor(Qc, Qc, w);
  T.QP = tensor(Qc, Pt, w);
  T.PQ = tensor(Pt, Qc, w);
  T.PP = tensor(Pt, Pt, w);
  T.vqq = std::make_shared<TensorView>(S.qview, S.qview, T.QQ);
  T.vqp = std::make_shared<TensorView>(S.qview, S.pview, T.QP);

  const GradedMap idP = identity_map(Pt);
  const GradedMap idQ = identity_map(Qc);
  T.inner = extension_total(T.PQ.C, T.PP.C, cross(idP, S.alpha, T.PP, T.PQ));
  T.outer = extension_total(T.QP.C, T.inner.total,
                            cross(S.alpha, idP, T.PP, T.QP).after(T.inner.proj_C));

  // Remaining glue onto the top tensor block, columns (QP, PQ, PP).
  const GradedMap cQP = cross(idQ, S.alpha, T.QP, T.QQ);
  const GradedMap cPQ = cross(S.alpha, idQ, T.PQ, T.QQ);
  GradedMap eta(T.outer.total, T.QQ.C, -1);
  for (int d = T.outer.total->min_deg(); d <= T.outer.total->max_deg(); ++d) {
    const int rdst = rank_or0(T.QQ.C, d - 1);
    if (!rdst) continue;
    FreeMap m(Qc->field(), Qc->group(), rdst, T.outer.total->rank(d));
    if (const FreeMap* a = cQP.at(d)) m.set_block(0, 0, *a);
    if (const FreeMap* b = cPQ.at(d)) m.set_block(0, rank_or0(T.QP.C, d), *b);
    eta.set(d, std::move(m));
  }
  T.eta = eta;
  // Validates that eta anticommutes with both differentials, i.e. that the
  // assembled four-block square differential squares to zero.
  T.big = extension_total(T.QQ.C, T.outer.total, eta);
  return T;
}

PsiData Postnikov::build_psi(const PolarizedSphereComplex& S, const SphereSquare& T) const {
  const ComplexPtr& Qc = S.E.A;
  const ComplexPtr& Pt = S.E.Cpart;
  const FieldPtr& F = Pt->field();
  const GroupPtr& G = Pt->group();
  const int n = S.n, w = S.window, M = w - 1, ng = G->order();

  PsiData out;
  // The ring's diagonal and commutation homotopy carry over verbatim: the
  // truncated square has the same block layout degree by degree.
  out.delta = rebase(R_.diag().map, Pt, T.PP.C, 0, w);
  if (!out.delta.defect().restrict_window(0, M).is_zero())
    throw InternalError("SolverBug", "diagonal does not restrict to the window");
  Steenrod St(R_, seed_);
  out.cup1 = rebase(St.cup1_homotopy(), Pt, T.PP.C, 0, M);
  const GradedMap TPP = transposition(T.PP, T.PP);
  if (!homotopy_defect(out.cup1, out.delta, TPP.after(out.delta))
           .restrict_window(0, M)
           .is_zero())
    throw InternalError("SolverBug", "commutation homotopy fails on the window");

  // Top diagonal: the bottom diagonal re-graded, with the sign twist
  // (-1)^{(n-1) j} on the block whose right factor has degree j; that is the
  // unique constant-in-i twist making it a chain map into Q (x) P.
  GradedMap d1(Qc, T.QP.C, 0);
  for (int e = 0; e <= w - (n - 1); ++e) {
    const int d = e + n - 1;
    const FreeMap c = out.delta.component_or_zero(e);
    FreeMap m(F, G, T.QP.C->rank(d), Qc->rank(d));
    for (const TensorBlock& b : T.PP.blocks(e)) {
      const TensorBlock* tb = nullptr;
      for (const TensorBlock& cand : T.QP.blocks(d))
        if (cand.i == b.i + (n - 1) && cand.j == b.j) {
          tb = &cand;
          break;
        }
      if (!tb || tb->ri != b.ri || tb->rj != b.rj)
        throw InternalError("SolverBug", "shifted tensor block layout mismatch");
      FreeMap sub = c.block(b.off, 0, b.ri * b.rj * ng, c.src_rank());
      const uint16_t s = koszul(*F, static_cast<long long>(n - 1) * b.j, 1);
      if (s != 1) sub = sub.scaled(s);
      m.set_block(tb->off, 0, sub);
    }
    d1.set(d, std::move(m));
  }
  if (!d1.defect().restrict_window(n - 1, w).is_zero())
    throw InternalError("SolverBug", "re-graded diagonal is not a chain map");
  out.delta1 = d1;
  out.delta2 = transposition(T.QP, T.PQ).after(d1);

  const GradedMap ai = cross(S.alpha, identity_map(Pt), T.PP, T.QP);
  const GradedMap ia = cross(identity_map(Pt), S.alpha, T.PP, T.PQ);
  const GradedMap f1 = out.delta1.after(S.alpha);
  const GradedMap g1 = ai.after(out.delta);
  auto H1 = find_homotopy(f1, g1, 0, M, T.vqp.get());
  if (!H1)
    throw InputError("HomotopySearchFailed",
                     "no homotopy ties the top diagonal to the glue; enlarge the window");
  if (seed_ != 0) {
    const GradedMap Y = random_shift(Pt, T.QP.C, 1, seed_ ^ 0x9e3779b9u);
    *H1 = *H1 + Y.defect().restrict_window(0, M);
  }
  out.h1 = *H1;

  // Counit normalization. The glue homotopies are free up to a chain map,
  // and applying one augmentation factor to the assembled candidate leaves a
  // class in degree n-1 that obstructs the counit law. Pair it against the
  // bottom model and subtract a representative so the class is zero.
  const ModelPoint& pm = S.pview->models().front();
  const ModelPoint& qm = S.qview->models().front();
  const GradedMap crQP = tensor_counit(T.QP, pm, CounitSide::Right);
  const GradedMap clPQ = tensor_counit(T.PQ, pm, CounitSide::Left);
  const GradedMap crPP = tensor_counit(T.PP, pm, CounitSide::Right);
  const GradedMap clPP = tensor_counit(T.PP, pm, CounitSide::Left);
  auto hCr = find_homotopy(crPP.after(out.delta), identity_map(Pt), 0, M, S.pview.get());
  auto hCl = find_homotopy(clPP.after(out.delta), identity_map(Pt), 0, M, S.pview.get());
  if (!hCr || !hCl)
    throw InternalError("SolverBug", "diagonal counit is not homotopic to the identity");
  // Degree-0 chain map P -> Q representing a class of degree n-1, signed so
  // consecutive components commute with the differentials.
  auto lower_to_top = [&](const CohClass& cls) {
    const GradedMap& rep = R_.chain_rep(cls);
    GradedMap g(Pt, Qc, 0);
    for (int d = n - 1; d <= w; ++d) {
      FreeMap f = rep.component_or_zero(d);
      const uint16_t s = koszul(*F, static_cast<long long>(n - 1) * (d - n + 1), 1);
      if (s != 1) f = f.scaled(s);
      g.set(d, std::move(f));
    }
    if (!g.defect().is_zero())
      throw InternalError("SolverBug", "re-graded class representative is not a chain map");
    return g;
  };
  {
    const GradedMap bmap = crQP.after(out.h1) - S.alpha.after(*hCr);
    const KVec row = model_pairing_row(F, qm, bmap, n - 1, Pt->rank(n - 1));
    const CohClass cls = R_.from_cocycle(n - 1, row);
    if (!cls.is_zero())
      out.h1 = out.h1 - cross(lower_to_top(cls), identity_map(Pt), T.PP, T.QP)
                            .after(out.delta)
                            .restrict_window(0, M);
  }

  // Transporting the normalized h1 across the transposition and correcting
  // by the commutation homotopy solves the mirrored equation on the nose and
  // keeps h2 - T h1 equal to (id x alpha) applied to the commutation
  // homotopy, exactly. That same transport carries the counit normalization
  // to the other side: the left class below must come out zero.
  out.h2 = transposition(T.QP, T.PQ).after(out.h1) + ia.after(out.cup1);
  {
    const GradedMap bmap = clPQ.after(out.h2) - S.alpha.after(*hCl);
    const KVec row = model_pairing_row(F, qm, bmap, n - 1, Pt->rank(n - 1));
    if (!R_.from_cocycle(n - 1, row).is_zero())
      throw InternalError("SolverBug", "counit normalization did not transport across the twist");
  }
  out.hp = GradedMap(Qc, T.PQ.C, 1);  // the correction vanishes for this choice
  if (!homotopy_defect(out.h1, f1, g1).restrict_window(0, M).is_zero())
    throw InternalError("SolverBug", "first glue homotopy fails its identity");
  if (!homotopy_defect(out.h2, out.delta2.after(S.alpha), ia.after(out.delta))
           .restrict_window(0, M)
           .is_zero())
    throw InternalError("SolverBug", "second glue homotopy fails its identity");

  // Assemble psi = [[delta1, h1], [delta2, h2], [0, delta]] blockwise.
  GradedMap psi(S.E.total, T.outer.total, 0);
  for (int d = 0; d <= M; ++d) {
    const int rQ = rank_or0(Qc, d);
    const int rqp = rank_or0(T.QP.C, d);
    const int rpq = rank_or0(T.PQ.C, d);
    FreeMap m(F, G, T.outer.total->rank(d), S.E.total->rank(d));
    if (rqp && rQ) m.set_block(0, 0, out.delta1.component_or_zero(d));
    if (rqp) m.set_block(0, rQ, out.h1.component_or_zero(d));
    if (rpq && rQ) m.set_block(rqp, 0, out.delta2.component_or_zero(d));
    if (rpq) m.set_block(rqp, rQ, out.h2.component_or_zero(d));
    m.set_block(rqp + rpq, rQ, out.delta.component_or_zero(d));
    psi.set(d, std::move(m));
  }
  if (!psi.defect().restrict_window(0, M).is_zero())
    throw InternalError("SolverBug", "comultiplication candidate is not a chain map");
  out.psi = psi;
  return out;
}

ObstructionReport Postnikov::obstruction(const PolarizedSphereComplex& S, const SphereSquare& T,
                                         const PsiData& D) const {
  const ComplexPtr& Qc = S.E.A;
  const ComplexPtr& Pt = S.E.Cpart;
  const FieldPtr& F = Pt->field();
  const int n = S.n, w = S.window, M = w - 1, N = 2 * n - 1;

  const GradedMap etapsi = T.eta.after(D.psi);        // sphere total -> QQ, degree -1
  const GradedMap phiA = etapsi.after(S.E.incl_A);    // restriction to the top block
  const GradedMap zeroA(Qc, T.QQ.C, -1);
  auto HA = find_homotopy(phiA, zeroA, Qc->min_deg(), M, T.vqq.get());

  ObstructionReport rep;
  if (!HA) {
    // The top-block restriction carries the class (1 + (-1)^{n-1}) z, which
    // is essentially nonzero here; the obstruction cannot vanish and no
    // bottom-block residue is defined.
    rep.vanishes = false;
    rep.top_part_trivial = false;
    rep.note = "top-block restriction is not null-homotopic; no residue is defined";
    return rep;
  }
  rep.top_part_trivial = true;
  if (seed_ != 0) {
    const GradedMap Y = random_shift(Qc, T.QQ.C, 1, seed_ ^ 0x2545f491u);
    *HA = *HA + Y.defect().restrict_window(Qc->min_deg(), M);
  }

  // Bottom-block residue map: the candidate's bottom columns with the
  // top-block homotopy absorbed through the glue.
  GradedMap phi2(Pt, T.QQ.C, -1);
  for (int d = 0; d <= M; ++d) {
    const FreeMap* c = etapsi.at(d);
    const int rdst = rank_or0(T.QQ.C, d - 1);
    if (!c || !rdst) continue;
    phi2.set(d, c->block(0, rank_or0(Qc, d), rdst, Pt->rank(d)));
  }
  phi2 = (phi2 + HA->after(S.alpha)).restrict_window(0, M);
  if (!phi2.defect().restrict_window(0, M).is_zero())
    throw InternalError("SolverBug", "bottom residue map is not a chain map");

  const FactorDecision fd = factor_decision(S.E, phi2.after(S.E.proj_C), 0, M);
  rep.vanishes = fd.factors;
  if (fd.factors) {
    rep.u = fd.u;
    rep.K = fd.K;
  }

  // Residue two ways: pairing the residue map against the model functional,
  // and the closed form pairing the glue square against the commutation
  // homotopy. Both must agree modulo the ideal (z).
  const ModelPoint& mq = T.vqq->models().front();
  const int rN = Pt->rank(N);
  const KVec brow = model_pairing_row(F, mq, phi2, N, rN);
  rep.residue = reduce_mod_ideal(R_, R_.from_cocycle(N, brow), S.zclass);
  const GradedMap closed = cross(S.alpha, S.alpha, T.PP, T.QQ).after(D.cup1);
  const KVec crow = model_pairing_row(F, mq, closed, N, rN);
  rep.direct_residue = reduce_mod_ideal(R_, R_.from_cocycle(N, crow), S.zclass);
  if (rep.residue.coords != rep.direct_residue.coords)
    throw InternalError("SolverBug", "the two residue computations disagree");
  if (rep.vanishes != rep.residue.is_zero())
    throw InternalError("SolverBug", "factorization verdict contradicts the residue class");
  rep.note = rep.vanishes ? "obstruction vanishes: the residue lies in the ideal (z)"
                          : "obstruction is nonzero: the residue misses the ideal (z)";
  (void)n;
  return rep;
}

Comultiplication Postnikov::lift_comultiplication(const PolarizedSphereComplex& S,
                                                  const SphereSquare& T,
                                                  const PsiData& D) const {
  const ComplexPtr& Qc = S.E.A;
  const ComplexPtr& Pt = S.E.Cpart;
  const FieldPtr& F = Pt->field();
  const GroupPtr& G = Pt->group();
  const int M = S.window - 1;

  auto W = lifting_obstruction(T.big, D.psi, 0, M);
  if (!W)
    throw InputError("ObstructionNonzero",
                     "the comultiplication candidate does not extend over the top tensor block");

  // Stack the top-block correction on the candidate.
  GradedMap lift(S.E.total, T.big.total, 0);
  for (int d = 0; d <= M; ++d) {
    FreeMap m(F, G, T.big.total->rank(d), S.E.total->rank(d));
    const int rqq = rank_or0(T.QQ.C, d);
    if (rqq) m.set_block(0, 0, W->component_or_zero(d));
    m.set_block(rqq, 0, D.psi.component_or_zero(d));
    lift.set(d, std::move(m));
  }
  if (!lift.defect().restrict_window(0, M).is_zero())
    throw InternalError("SolverBug", "lifted comultiplication is not a chain map");
  if (!(T.big.proj_C.after(lift) - D.psi).is_zero())
    throw InternalError("SolverBug", "lifted comultiplication does not project to the candidate");

  // Counit composites: applying one augmentation factor to the lift kills
  // the top tensor block and the mixed block on that side, leaving two-block
  // endomorphisms of the sphere complex.
  const ModelPoint& pm = S.pview->models().front();
  const GradedMap crQP = tensor_counit(T.QP, pm, CounitSide::Right);
  const GradedMap crPP = tensor_counit(T.PP, pm, CounitSide::Right);
  const GradedMap clPQ = tensor_counit(T.PQ, pm, CounitSide::Left);
  const GradedMap clPP = tensor_counit(T.PP, pm, CounitSide::Left);
  auto two_block = [&](const GradedMap& qq, const GradedMap& qp, const GradedMap& pp) {
    GradedMap ce(S.E.total, S.E.total, 0);
    for (int d = 0; d <= M; ++d) {
      const int rQ = rank_or0(Qc, d);
      const int rP = Pt->rank(d);
      FreeMap m(F, G, rQ + rP, rQ + rP);
      if (rQ) {
        m.set_block(0, 0, qq.component_or_zero(d));
        m.set_block(0, rQ, qp.component_or_zero(d));
      }
      m.set_block(rQ, rQ, pp.component_or_zero(d));
      ce.set(d, std::move(m));
    }
    return ce;
  };
  const GradedMap ceR = two_block(crQP.after(D.delta1), crQP.after(D.h1), crPP.after(D.delta));
  const GradedMap ceL = two_block(clPQ.after(D.delta2), clPQ.after(D.h2), clPP.after(D.delta));
  const GradedMap idE = identity_map(S.E.total);
  auto hR = find_homotopy(ceR, idE, 0, M, S.tview.get());
  if (!hR) throw InternalError("SolverBug", "right counit law has no homotopy witness");
  auto hL = find_homotopy(ceL, idE, 0, M, S.tview.get());
  if (!hL) throw InternalError("SolverBug", "left counit law has no homotopy witness");

  Comultiplication out;
  out.lift = lift;
  out.counit_r = *hR;
  out.counit_l = *hL;
  return out;
}

ChoiceReport Postnikov::choice_independence_check(const CohClass& z, int window) const {
  const Postnikov base(R_, 0);
  const Postnikov pert(R_, seed_ != 0 ? seed_ : 0x5eedu);
  auto run = [&](const Postnikov& K) {
    const PolarizedSphereComplex S = K.build_p_zeta(z, window);
    const SphereSquare T = K.build_p_zeta_plus(S);
    const PsiData D = K.build_psi(S, T);
    return K.obstruction(S, T, D);
  };
  ChoiceReport rep;
  rep.base = run(base);
  rep.perturbed = run(pert);
  rep.verdicts_match = rep.base.vanishes == rep.perturbed.vanishes;
  rep.residues_match = rep.base.residue.degree == rep.perturbed.residue.degree &&
                       rep.base.residue.coords == rep.perturbed.residue.coords;
  if (!rep.verdicts_match || !rep.residues_match)
    throw InternalError("SolverBug", "homotopy choices leaked into the obstruction verdict");
  return rep;
}

}  // namespace coho
