#include "coho/steenrod.hpp"

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "coho/view.hpp"

namespace coho {

namespace {

// Random graded data of the given degree over the full window, used to
// regenerate a homotopy by adding its defect (a null-homotopic shift that
// preserves every homotopy identity).
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

uint16_t fnv_mix(unsigned seed, int salt, const KVec& row) {
  unsigned h = 2166136261u ^ seed;
  h = (h ^ static_cast<unsigned>(salt)) * 16777619u;
  for (uint16_t c : row) h = (h ^ c) * 16777619u;
  return static_cast<uint16_t>(h >> 1 ? h & 0x7fffu : 1u);
}

}  // namespace

bool in_indeterminacy(const MasseyTriple& T, const KVec& coords) {
  KVec res = KMatrix::coords_mod_subspace(coords, T.indet, T.jpiv);
  for (uint16_t c : res)
    if (c) return false;
  return true;
}

CohClass reduce_mod_ideal(const CohRing& R, const CohClass& t, const CohClass& z) {
  if (z.is_zero()) throw InputError("ZeroClass", "cannot reduce modulo the zero ideal");
  const int d = t.degree - z.degree;
  if (d < 0) return t;  // the ideal is trivial below the generator's degree
  KMatrix S = R.mult_matrix(z, d).transpose();
  std::vector<int> piv = S.rref();
  S = S.block(0, 0, static_cast<int>(piv.size()), S.cols());
  KVec res = KMatrix::coords_mod_subspace(t.coords, S, piv);
  return R.cls(t.degree, res);
}

const GradedMap& Steenrod::cup1_homotopy() const {
  if (h1_) return *h1_;
  const Diagonal& D = R_.diag();
  const ComplexPtr& C = R_.res().complex;
  const int lo = C->min_deg();
  const int hi = C->max_deg() - 1;
  GradedMap TD = transposition(D.square, D.square).after(D.map);
  auto H = find_homotopy(D.map, TD, lo, hi, D.square_view.get());
  if (!H) throw InternalError("SolverBug", "no homotopy between the diagonal and its transpose");
  if (seed_ != 0) {
    GradedMap Y = random_shift(C, D.square.C, 2, seed_);
    *H = *H + Y.defect().restrict_window(lo, hi);
  }
  h1_ = std::move(*H);
  return *h1_;
}

CohClass Steenrod::sq_top_minus_one(const CohClass& z) const {
  const ComplexPtr& C = R_.res().complex;
  const FieldPtr& F = C->field();
  if (F->p() != 2)
    throw InputError("WrongCharacteristic", "the top square needs characteristic 2");
  const int n = z.degree;
  if (n < 1) throw InputError("PreconditionViolated", "the top square needs degree >= 1");
  const int N = 2 * n - 1;
  (void)R_.basis(N);  // range guard before any lifting work

  const GradedMap& H = cup1_homotopy();
  const Diagonal& D = R_.diag();
  FreeMap Hc = H.component_or_zero(N);  // P_N -> square_{N+1}
  const TensorBlock* blk = nullptr;
  for (const TensorBlock& b : D.square.blocks(2 * n))
    if (b.i == n) {
      blk = &b;
      break;
    }
  if (!blk) throw InternalError("SolverBug", "tensor block missing");

  const int ng = C->group()->order();
  const int rN = C->rank(N);
  KVec row(static_cast<size_t>(rN), 0);
  for (int j = 0; j < rN; ++j) {
    KVec col = Hc.gen_column(j);
    uint16_t acc = 0;
    for (int a = 0; a < blk->ri; ++a) {
      if (!z.cocycle[static_cast<size_t>(a)]) continue;
      for (int bb = 0; bb < blk->rj; ++bb) {
        uint16_t w = F->mul(z.cocycle[static_cast<size_t>(a)], z.cocycle[static_cast<size_t>(bb)]);
        if (!w) continue;
        uint16_t s = 0;
        for (int h = 0; h < ng; ++h) {
          size_t base = static_cast<size_t>(D.square.gen_index(*blk, a, bb, h)) * ng;
          for (int g = 0; g < ng; ++g) s = F->add(s, col[base + g]);
        }
        acc = F->add(acc, F->mul(w, s));
      }
    }
    row[static_cast<size_t>(j)] = acc;
  }
  return R_.from_cocycle(N, row);
}

MasseyTriple Steenrod::massey_triple(const CohClass& u, const CohClass& v,
                                     const CohClass& w) const {
  const ComplexPtr& C = R_.res().complex;
  const FieldPtr& F = C->field();
  const int r = u.degree, s = v.degree, t = w.degree;
  const int N = r + s + t - 1;
  const CohBasis& BN = R_.basis(N);  // range guard
  if (!R_.cup(u, v).is_zero() || !R_.cup(v, w).is_zero())
    throw InputError("ProductsNonzero", "triple products need vanishing adjacent products");

  const GradedMap& uh = R_.chain_rep(u);
  const GradedMap& vh = R_.chain_rep(v);
  const GradedMap& wh = R_.chain_rep(w);
  const View* pv = R_.res().view.get();

  GradedMap uv = uh.after(vh);
  GradedMap zuv(C, C, uv.deg);
  auto H = find_homotopy(uv, zuv, r + s - 1, R_.top(), pv);
  if (!H) throw InternalError("SolverBug", "no null-homotopy for the left product");
  GradedMap vw = vh.after(wh);
  GradedMap zvw(C, C, vw.deg);
  auto K = find_homotopy(vw, zvw, s + t - 1, R_.top(), pv);
  if (!K) throw InternalError("SolverBug", "no null-homotopy for the right product");
  if (seed_ != 0) {
    GradedMap YH = random_shift(C, C, uv.deg + 2, seed_ ^ fnv_mix(seed_, r, u.cocycle));
    *H = *H + YH.defect().restrict_window(r + s - 1, R_.top());
    GradedMap YK = random_shift(C, C, vw.deg + 2, seed_ ^ fnv_mix(seed_, t, w.cocycle));
    *K = *K + YK.defect().restrict_window(s + t - 1, R_.top());
  }

  GradedMap Cm = H->after(wh) + uh.after(*K).scaled(koszul(*F, r + 1, 1));
  KVec row = Cm.component_or_zero(N).aug().row(0);

  MasseyTriple out;
  out.rep = R_.from_cocycle(N, row);

  std::vector<KVec> jrows;
  const CohBasis& B1 = R_.basis(s + t - 1);
  for (int i = 0; i < B1.dim; ++i) {
    KVec unit(static_cast<size_t>(B1.dim), 0);
    unit[static_cast<size_t>(i)] = 1;
    jrows.push_back(R_.cup(u, R_.cls(s + t - 1, unit)).coords);
  }
  const CohBasis& B2 = R_.basis(r + s - 1);
  for (int i = 0; i < B2.dim; ++i) {
    KVec unit(static_cast<size_t>(B2.dim), 0);
    unit[static_cast<size_t>(i)] = 1;
    jrows.push_back(R_.cup(R_.cls(r + s - 1, unit), w).coords);
  }
  KMatrix J = KMatrix::from_rows(F, jrows, BN.dim);
  out.jpiv = J.rref();
  out.indet = J.block(0, 0, static_cast<int>(out.jpiv.size()), BN.dim);
  return out;
}

CohClass Steenrod::massey_mu(const CohClass& z, const CohClass& v) const {
  if (!R_.cup(v, z).is_zero() || !R_.cup(z, v).is_zero())
    throw InputError("PreconditionViolated", "the middle class must annihilate the outer one");
  MasseyTriple T = massey_triple(z, v, z);
  return reduce_mod_ideal(R_, T.rep, z);
}

Verdict Steenrod::is_productive(const CohClass& z, int cap) const {
  if (z.is_zero()) throw InputError("ZeroClass", "productivity needs a nonzero class");
  const FieldPtr& F = R_.res().complex->field();
  const int n = z.degree;
  if (n < 1) throw InputError("PreconditionViolated", "productivity needs degree >= 1");
  Verdict out;
  if (F->p() == 2) {
    CohClass t = sq_top_minus_one(z);
    if (auto q = R_.ideal_member(t, z)) {
      out.status = VerdictStatus::Yes;
      out.witness = q->coords;
      out.witness_degree = q->degree;
      out.note = "the top square is the attached multiple of the class";
    } else {
      CohClass res = reduce_mod_ideal(R_, t, z);
      out.status = VerdictStatus::No;
      out.witness = res.coords;
      out.witness_degree = res.degree;
      out.note = "the top square is not a multiple of the class; nonzero residue attached";
    }
    return out;
  }
  if (n % 2 == 0) {
    out.status = VerdictStatus::Yes;
    out.note = "even-degree classes in odd characteristic are always productive";
    return out;
  }
  return oracle_productive(R_, z, cap);
}

Verdict Steenrod::is_semiproductive(const CohClass& z, int cap) const {
  const FieldPtr& F = R_.res().complex->field();
  if (F->p() != 2)
    throw InputError("WrongCharacteristic", "the semi-productive test needs characteristic 2");
  if (z.is_zero()) throw InputError("ZeroClass", "semi-productivity needs a nonzero class");
  const int n = z.degree;
  if (n < 1) throw InputError("PreconditionViolated", "semi-productivity needs degree >= 1");
  if (cap < 0 || cap + 2 * n - 1 > R_.top() - 1)
    throw InputError("TruncationUnderflow",
                     "cap " + std::to_string(cap) + " needs products through degree " +
                         std::to_string(cap + 2 * n - 1) + " but the resolution stops at " +
                         std::to_string(R_.top()));
  CohClass t = sq_top_minus_one(z);
  Verdict out;
  for (int d = 0; d <= cap; ++d) {
    for (const CohClass& a : R_.annihilator_basis(z, d)) {
      CohClass at = R_.cup(a, t);
      if (!R_.ideal_member(at, z)) {
        out.status = VerdictStatus::No;
        out.witness = a.coords;
        out.witness_degree = d;
        out.note = "an annihilator in degree " + std::to_string(d) +
                   " multiplies the top square outside the ideal";
        return out;
      }
    }
  }
  out.status = VerdictStatus::YesUpToDegree;
  out.certified_degree = cap;
  out.note = "every annihilator through the cap multiplies the top square into the ideal";
  return out;
}

}  // namespace coho
