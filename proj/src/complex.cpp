#include "coho/complex.hpp"

#include <algorithm>

#include "coho/common.hpp"

namespace coho {

ChainComplex::ChainComplex(FieldPtr F, GroupPtr G, int min_deg, std::vector<int> ranks,
                           std::vector<FreeMap> diffs, bool check_d2)
    : F_(std::move(F)), G_(std::move(G)), min_(min_deg), ranks_(std::move(ranks)),
      diffs_(std::move(diffs)) {
  if (ranks_.empty()) throw InternalError("BadShape", "complex needs at least one degree");
  if (diffs_.size() + 1 != ranks_.size())
    throw InternalError("BadShape", "complex needs one differential per adjacent degree pair");
  for (size_t t = 0; t < diffs_.size(); ++t) {
    if (diffs_[t].src_rank() != ranks_[t + 1] || diffs_[t].dst_rank() != ranks_[t])
      throw InternalError("BadShape", "differential shape does not match ranks");
  }
  if (check_d2) {
    for (size_t t = 0; t + 1 < diffs_.size(); ++t)
      if (!diffs_[t].after(diffs_[t + 1]).is_zero())
        throw InternalError("NotAComplex",
                            "differentials do not compose to zero at degree " +
                                std::to_string(min_ + static_cast<int>(t) + 2));
  }
  diff_k_.resize(diffs_.size());
}

int ChainComplex::rank(int d) const {
  if (!in_window(d)) return 0;
  return ranks_[d - min_];
}

const FreeMap& ChainComplex::diff(int d) const {
  if (d <= min_ || d > max_deg()) throw InternalError("BadShape", "differential out of window");
  return diffs_[d - min_ - 1];
}

const KMatrix& ChainComplex::diff_k(int d) const {
  if (d <= min_ || d > max_deg()) throw InternalError("BadShape", "differential out of window");
  auto& slot = diff_k_[d - min_ - 1];
  if (!slot) slot = diff(d).to_k();
  return *slot;
}

KVec ChainComplex::apply_diff(int d, const KVec& x) const {
  if (d <= min_ || d > max_deg()) return KVec(kdim(d - 1), 0);
  return diff_k(d).mul_vec(x);
}

const FreeMap* GradedMap::at(int d) const {
  auto it = comp.find(d);
  return it == comp.end() ? nullptr : &it->second;
}

FreeMap GradedMap::component_or_zero(int d) const {
  if (const FreeMap* f = at(d)) return *f;
  return FreeMap(src->field(), src->group(), dst->rank(d + deg), src->rank(d));
}

void GradedMap::set(int d, FreeMap f) {
  if (f.src_rank() != src->rank(d) || f.dst_rank() != dst->rank(d + deg))
    throw InternalError("BadShape", "graded-map component shape mismatch at degree " + std::to_string(d));
  comp[d] = std::move(f);
}

bool GradedMap::is_zero() const {
  for (const auto& kv : comp)
    if (!kv.second.is_zero()) return false;
  return true;
}

GradedMap GradedMap::restrict_window(int lo, int hi) const {
  GradedMap r(src, dst, deg);
  for (const auto& kv : comp)
    if (kv.first >= lo && kv.first <= hi) r.comp[kv.first] = kv.second;
  return r;
}

GradedMap GradedMap::operator+(const GradedMap& o) const {
  if (deg != o.deg) throw InternalError("BadShape", "graded-map degree mismatch in sum");
  GradedMap r = *this;
  for (const auto& [d, f] : o.comp) {
    if (const FreeMap* mine = r.at(d))
      r.comp[d] = *mine + f;
    else
      r.comp[d] = f;
  }
  return r;
}

GradedMap GradedMap::operator-(const GradedMap& o) const {
  if (deg != o.deg) throw InternalError("BadShape", "graded-map degree mismatch in difference");
  GradedMap r = *this;
  for (const auto& [d, f] : o.comp) {
    if (const FreeMap* mine = r.at(d))
      r.comp[d] = *mine - f;
    else
      r.comp[d] = f.scaled(src->field()->neg(1));
  }
  return r;
}

GradedMap GradedMap::scaled(uint16_t s) const {
  GradedMap r = *this;
  for (auto& [d, f] : r.comp) f = f.scaled(s);
  return r;
}

GradedMap GradedMap::after(const GradedMap& inner) const {
  GradedMap r(inner.src, dst, deg + inner.deg);
  for (const auto& [d, g] : inner.comp) {
    const FreeMap* f = at(d + inner.deg);
    if (!f) continue;
    FreeMap c = f->after(g);
    if (!c.is_zero()) r.comp[d] = std::move(c);
  }
  return r;
}

GradedMap GradedMap::defect() const {
  GradedMap r(src, dst, deg - 1);
  std::vector<int> cand;
  for (const auto& kv : comp) {
    cand.push_back(kv.first);
    cand.push_back(kv.first + 1);
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  const FieldPtr& F = src->field();
  for (int d : cand) {
    if (!src->in_window(d)) continue;
    int out = d + deg - 1;
    if (!dst->in_window(out)) continue;
    FreeMap acc(F, src->group(), dst->rank(out), src->rank(d));
    if (const FreeMap* fd = at(d)) {
      if (d + deg > dst->min_deg() && d + deg <= dst->max_deg())
        acc = dst->diff(d + deg).after(*fd);
    }
    if (const FreeMap* fprev = at(d - 1)) {
      if (d > src->min_deg() && d <= src->max_deg()) {
        FreeMap t = fprev->after(src->diff(d));
        acc = acc - t.scaled(koszul(*F, deg, 1));
      }
    }
    if (!acc.is_zero()) r.comp[d] = std::move(acc);
  }
  return r;
}

KVec GradedMap::apply(int d, const KVec& x) const {
  const FreeMap* f = at(d);
  if (!f) return KVec(dst->kdim(d + deg), 0);
  return f->to_k().mul_vec(x);
}

GradedMap make_chain_map(ComplexPtr src, ComplexPtr dst, int deg, std::map<int, FreeMap> comp) {
  GradedMap f(std::move(src), std::move(dst), deg);
  for (auto& [d, c] : comp) f.set(d, std::move(c));
  if (!f.is_chain_map())
    throw InputError("NotAChainMap", "graded map does not commute with the differentials");
  return f;
}

GradedMap identity_map(const ComplexPtr& C) {
  GradedMap f(C, C, 0);
  for (int d = C->min_deg(); d <= C->max_deg(); ++d)
    if (C->rank(d) > 0) f.comp[d] = FreeMap::identity(C->field(), C->group(), C->rank(d));
  return f;
}

ComplexPtr shift(const ComplexPtr& C, int n) {
  std::vector<int> ranks;
  std::vector<FreeMap> diffs;
  for (int d = C->min_deg(); d <= C->max_deg(); ++d) ranks.push_back(C->rank(d));
  uint16_t s = koszul(*C->field(), n, 1);
  for (int d = C->min_deg() + 1; d <= C->max_deg(); ++d) diffs.push_back(C->diff(d).scaled(s));
  return std::make_shared<ChainComplex>(C->field(), C->group(), C->min_deg() + n,
                                        std::move(ranks), std::move(diffs), false);
}

GradedMap shift_map(const GradedMap& f, int n, ComplexPtr ssrc, ComplexPtr sdst) {
  GradedMap r(std::move(ssrc), std::move(sdst), f.deg);
  for (const auto& [d, c] : f.comp) r.comp[d + n] = c;
  return r;
}

ComplexPtr truncate(const ComplexPtr& C, int k) {
  if (k < C->min_deg()) k = C->min_deg();
  if (k > C->max_deg()) throw InternalError("BadShape", "truncation leaves an empty window");
  std::vector<int> ranks;
  std::vector<FreeMap> diffs;
  for (int d = k; d <= C->max_deg(); ++d) ranks.push_back(C->rank(d));
  for (int d = k + 1; d <= C->max_deg(); ++d) diffs.push_back(C->diff(d));
  return std::make_shared<ChainComplex>(C->field(), C->group(), k, std::move(ranks),
                                        std::move(diffs), false);
}

// --- tensor ------------------------------------------------------------------

const std::vector<TensorBlock>& TensorComplex::blocks(int n) const {
  static const std::vector<TensorBlock> empty;
  auto it = layout.find(n);
  return it == layout.end() ? empty : it->second;
}

int TensorComplex::gen_index(const TensorBlock& b, int a, int bb, int h) const {
  int ng = C->group()->order();
  return b.off + (a * b.rj + bb) * ng + h;
}

int TensorComplex::k_index(const TensorBlock& blk, int a, int g, int b, int gp) const {
  const GroupPtr& G = C->group();
  int ng = G->order();
  int h = G->mul(G->inv(g), gp);
  return gen_index(blk, a, b, h) * ng + g;
}

KMatrix TensorComplex::block_matrix(int /*n*/, const TensorBlock& blk, const KVec& x) const {
  int ng = C->group()->order();
  KMatrix X(C->field(), blk.ri * ng, blk.rj * ng);
  for (int a = 0; a < blk.ri; ++a)
    for (int g = 0; g < ng; ++g)
      for (int b = 0; b < blk.rj; ++b)
        for (int gp = 0; gp < ng; ++gp) {
          uint16_t v = x[k_index(blk, a, g, b, gp)];
          if (v) X.set(a * ng + g, b * ng + gp, v);
        }
  return X;
}

void TensorComplex::add_block_matrix(int /*n*/, const TensorBlock& blk, const KMatrix& X, KVec& x) const {
  const FieldPtr& F = C->field();
  int ng = C->group()->order();
  for (int a = 0; a < blk.ri; ++a)
    for (int g = 0; g < ng; ++g)
      for (int b = 0; b < blk.rj; ++b)
        for (int gp = 0; gp < ng; ++gp) {
          uint16_t v = X.get(a * ng + g, b * ng + gp);
          if (v) {
            int t = k_index(blk, a, g, b, gp);
            x[t] = F->add(x[t], v);
          }
        }
}

TensorComplex tensor(const ComplexPtr& A, const ComplexPtr& B, int cap) {
  if (!A->field()->same(*B->field()) || !A->group()->same(*B->group()))
    throw InternalError("BadShape", "tensor factors live over different group algebras");
  int lo = A->min_deg() + B->min_deg();
  int exact_cap = std::min(A->max_deg() + B->min_deg(), A->min_deg() + B->max_deg());
  if (cap > exact_cap)
    throw InputError("TruncationUnderflow",
                     "tensor window through degree " + std::to_string(cap) +
                         " is not determined by the stored factors (max " +
                         std::to_string(exact_cap) + ")");
  if (cap < lo) throw InternalError("BadShape", "tensor window is empty");

  const FieldPtr& F = A->field();
  const GroupPtr& G = A->group();
  int ng = G->order();

  TensorComplex TC;
  TC.left = A;
  TC.right = B;
  std::vector<int> ranks;
  for (int n = lo; n <= cap; ++n) {
    int off = 0;
    std::vector<TensorBlock> blks;
    int ilo = std::max(A->min_deg(), n - B->max_deg());
    int ihi = std::min(A->max_deg(), n - B->min_deg());
    for (int i = ilo; i <= ihi; ++i) {
      int j = n - i;
      int ri = A->rank(i), rj = B->rank(j);
      if (ri == 0 || rj == 0) continue;
      blks.push_back(TensorBlock{i, j, off, ri, rj});
      off += ri * rj * ng;
    }
    TC.layout[n] = std::move(blks);
    ranks.push_back(off);
  }

  auto find_block = [&](int n, int i) -> const TensorBlock* {
    for (const auto& b : TC.layout[n])
      if (b.i == i) return &b;
    return nullptr;
  };
  // TC.C is not assembled yet, so index generators directly off the blocks.
  auto gidx = [ng](const TensorBlock& b, int a, int bb, int h) {
    return b.off + (a * b.rj + bb) * ng + h;
  };

  std::vector<FreeMap> diffs;
  for (int n = lo + 1; n <= cap; ++n) {
    FreeMap d(F, G, ranks[n - 1 - lo], ranks[n - lo]);
    for (const auto& sb : TC.layout[n]) {
      for (int a = 0; a < sb.ri; ++a)
        for (int b = 0; b < sb.rj; ++b)
          for (int h = 0; h < ng; ++h) {
            int s = gidx(sb, a, b, h);
            if (sb.i > A->min_deg()) {
              const TensorBlock* tb = find_block(n - 1, sb.i - 1);
              if (tb) {
                const FreeMap& dA = A->diff(sb.i);
                for (int c = 0; c < tb->ri; ++c)
                  for (int g = 0; g < ng; ++g) {
                    uint16_t u = dA.coeff(c, a, g);
                    if (u) d.add_coeff(gidx(*tb, c, b, G->mul(G->inv(g), h)), s, g, u);
                  }
              }
            }
            if (sb.j > B->min_deg()) {
              const TensorBlock* tb = find_block(n - 1, sb.i);
              if (tb) {
                const FreeMap& dB = B->diff(sb.j);
                uint16_t sg = koszul(*F, sb.i, 1);
                for (int dd = 0; dd < tb->rj; ++dd)
                  for (int g = 0; g < ng; ++g) {
                    uint16_t w = dB.coeff(dd, b, g);
                    if (w)
                      d.add_coeff(gidx(*tb, a, dd, G->mul(h, g)), s, G->identity(), F->mul(sg, w));
                  }
              }
            }
          }
    }
    diffs.push_back(std::move(d));
  }
  TC.C = std::make_shared<ChainComplex>(F, G, lo, std::move(ranks), std::move(diffs), true);
  return TC;
}

GradedMap cross(const GradedMap& f, const GradedMap& g, const TensorComplex& src,
                const TensorComplex& dst) {
  const FieldPtr& F = src.C->field();
  const GroupPtr& G = src.C->group();
  int ng = G->order();
  GradedMap r(src.C, dst.C, f.deg + g.deg);
  for (const auto& [n, blks] : src.layout) {
    int out = n + f.deg + g.deg;
    if (!dst.C->in_window(out)) continue;
    FreeMap m(F, G, dst.C->rank(out), src.C->rank(n));
    bool any = false;
    for (const auto& sb : blks) {
      const FreeMap* fi = f.at(sb.i);
      const FreeMap* gj = g.at(sb.j);
      if (!fi || !gj) continue;
      const TensorBlock* tb = nullptr;
      for (const auto& b : dst.blocks(out))
        if (b.i == sb.i + f.deg) tb = &b;
      if (!tb) continue;
      uint16_t sg = koszul(*F, static_cast<long long>(sb.i) * g.deg, 1);
      for (int a = 0; a < sb.ri; ++a)
        for (int b = 0; b < sb.rj; ++b)
          for (int h = 0; h < ng; ++h) {
            int s = src.gen_index(sb, a, b, h);
            for (int c = 0; c < tb->ri; ++c)
              for (int g1 = 0; g1 < ng; ++g1) {
                uint16_t u = fi->coeff(c, a, g1);
                if (!u) continue;
                for (int dd = 0; dd < tb->rj; ++dd)
                  for (int gw = 0; gw < ng; ++gw) {
                    uint16_t w = gj->coeff(dd, b, gw);
                    if (!w) continue;
                    int hp = G->mul(G->inv(g1), G->mul(h, gw));
                    m.add_coeff(dst.gen_index(*tb, c, dd, hp), s, g1, F->mul(sg, F->mul(u, w)));
                    any = true;
                  }
              }
          }
    }
    if (any && !m.is_zero()) r.comp[n] = std::move(m);
  }
  return r;
}

GradedMap transposition(const TensorComplex& CD, const TensorComplex& DC) {
  const FieldPtr& F = CD.C->field();
  const GroupPtr& G = CD.C->group();
  int ng = G->order();
  GradedMap r(CD.C, DC.C, 0);
  for (const auto& [n, blks] : CD.layout) {
    if (!DC.C->in_window(n)) continue;
    FreeMap m(F, G, DC.C->rank(n), CD.C->rank(n));
    for (const auto& sb : blks) {
      const TensorBlock* tb = nullptr;
      for (const auto& b : DC.blocks(n))
        if (b.i == sb.j) tb = &b;
      if (!tb) throw InternalError("BadShape", "transposition target block missing");
      uint16_t sg = koszul(*F, static_cast<long long>(sb.i) * sb.j, 1);
      for (int a = 0; a < sb.ri; ++a)
        for (int b = 0; b < sb.rj; ++b)
          for (int h = 0; h < ng; ++h)
            m.add_coeff(DC.gen_index(*tb, b, a, G->inv(h)), CD.gen_index(sb, a, b, h), h, sg);
    }
    r.comp[n] = std::move(m);
  }
  return r;
}

GradedMap homotopy_defect(const GradedMap& H, const GradedMap& f, const GradedMap& g) {
  if (H.deg != f.deg + 1 || f.deg != g.deg)
    throw InternalError("BadShape", "homotopy degree must exceed the maps' degree by one");
  return H.defect() - (f - g);
}

// --- global homotopy solver ---------------------------------------------------

namespace {

// Solve d H - (-1)^u H d = R for a degree-u graded map H supported on source
// degrees [lo, hi], as one dense k-linear system. R has degree u - 1.
std::optional<GradedMap> solve_homotopy_window(const ComplexPtr& src, const ComplexPtr& dst,
                                               int u, const GradedMap& R, int lo, int hi) {
  const FieldPtr& F = src->field();
  const GroupPtr& G = src->group();
  int ng = G->order();

  // Column layout: unknown H_d as one k-vector per source generator.
  std::map<int, int> col_off;
  int ncols = 0;
  for (int d = lo; d <= hi; ++d) {
    col_off[d] = ncols;
    if (dst->in_window(d + u)) ncols += src->rank(d) * dst->kdim(d + u);
  }
  // Row layout: one equation block per source degree with a representable RHS.
  std::map<int, int> row_off;
  int nrows = 0;
  for (int d = lo; d <= hi; ++d) {
    row_off[d] = nrows;
    if (dst->in_window(d + u - 1)) nrows += src->rank(d) * dst->kdim(d + u - 1);
  }

  KMatrix Amat(F, nrows, ncols);
  KVec rhs(nrows, 0);
  for (int d = lo; d <= hi; ++d) {
    if (!dst->in_window(d + u - 1)) continue;
    int rgen = src->rank(d);
    int kout = dst->kdim(d + u - 1);
    // d(H_d): target differential applied to each generator's unknown vector.
    if (dst->in_window(d + u) && d + u > dst->min_deg()) {
      const KMatrix& D1 = dst->diff_k(d + u);
      for (int j = 0; j < rgen; ++j)
        for (int rr = 0; rr < kout; ++rr)
          for (int t = 0; t < D1.cols(); ++t) {
            uint16_t v = D1.get(rr, t);
            if (v)
              Amat.add_at(row_off[d] + j * kout + rr,
                          col_off[d] + j * D1.cols() + t, v);
          }
    }
    // -(-1)^u H_{d-1}(d e_j): permutation action on the previous unknowns.
    if (d - 1 >= lo && d > src->min_deg() && d <= src->max_deg() && dst->in_window(d - 1 + u)) {
      const FreeMap& dS = src->diff(d);
      int kin = dst->kdim(d - 1 + u);
      int rprev = dst->rank(d - 1 + u);
      uint16_t sg = F->neg(koszul(*F, u, 1));
      for (int j = 0; j < rgen; ++j)
        for (int a = 0; a < dS.dst_rank(); ++a)
          for (int g = 0; g < ng; ++g) {
            uint16_t c = dS.coeff(a, j, g);
            if (!c) continue;
            uint16_t val = F->mul(sg, c);
            // g acts on dst k-basis (i, h) -> (i, gh).
            for (int i = 0; i < rprev; ++i)
              for (int h = 0; h < ng; ++h)
                Amat.add_at(row_off[d] + j * kout + (i * ng + G->mul(g, h)),
                            col_off[d - 1] + a * kin + (i * ng + h), val);
          }
    }
    // RHS.
    if (const FreeMap* rc = R.at(d)) {
      KMatrix rk = rc->to_k();
      for (int j = 0; j < rgen; ++j)
        for (int rr = 0; rr < kout; ++rr) rhs[row_off[d] + j * kout + rr] = rk.get(rr, j * ng + G->identity());
    }
  }

  auto sol = Amat.solve(rhs);
  if (!sol) return std::nullopt;
  GradedMap H(src, dst, u);
  for (int d = lo; d <= hi; ++d) {
    if (!dst->in_window(d + u)) continue;
    int rgen = src->rank(d);
    int kd = dst->kdim(d + u);
    if (rgen == 0 || kd == 0) continue;
    FreeMap comp(F, G, dst->rank(d + u), rgen);
    bool any = false;
    for (int j = 0; j < rgen; ++j)
      for (int t = 0; t < kd; ++t) {
        uint16_t v = (*sol)[col_off[d] + j * kd + t];
        if (v) {
          comp.add_coeff(t / ng, j, t % ng, v);
          any = true;
        }
      }
    if (any) H.comp[d] = std::move(comp);
  }
  return H;
}

}  // namespace

std::optional<GradedMap> find_homotopy_global(const GradedMap& f, const GradedMap& g, int lo, int hi) {
  if (f.deg != g.deg) throw InternalError("BadShape", "homotopy between maps of different degree");
  GradedMap R = f - g;
  auto H = solve_homotopy_window(f.src, f.dst, f.deg + 1, R, lo, hi);
  if (H && !homotopy_defect(*H, f, g).restrict_window(lo, hi).is_zero())
    throw InternalError("SolverBug", "homotopy solver returned an invalid witness");
  return H;
}

// --- homology ------------------------------------------------------------------

HomologyData homology(const ChainComplex& C, int d) {
  const FieldPtr& F = C.field();
  const GroupPtr& G = C.group();
  int ng = G->order();
  int amb = C.kdim(d);

  KMatrix Z(F, 0, amb);
  if (d > C.min_deg() && d <= C.max_deg())
    Z = C.diff_k(d).kernel_basis();
  else
    Z = KMatrix::identity(F, amb);

  KMatrix B(F, 0, amb);
  std::vector<int> bpiv;
  if (d + 1 <= C.max_deg() && d + 1 > C.min_deg()) {
    KMatrix T = C.diff_k(d + 1).transpose();
    bpiv = T.rref();
    B = T.block(0, 0, static_cast<int>(bpiv.size()), amb);
  }

  std::vector<KVec> reduced;
  for (int r = 0; r < Z.rows(); ++r) {
    KVec v = KMatrix::coords_mod_subspace(Z.row(r), B, bpiv);
    reduced.push_back(std::move(v));
  }
  KMatrix R = KMatrix::from_rows(F, reduced, amb);
  std::vector<int> rpiv = R.rref();
  R = R.block(0, 0, static_cast<int>(rpiv.size()), amb);
  int hdim = R.rows();

  // Induced permutation action, expressed in the canonical representative basis.
  int rk = C.rank(d);
  std::vector<KMatrix> act;
  act.reserve(ng);
  for (int g = 0; g < ng; ++g) {
    KMatrix A(F, hdim, hdim);
    for (int j = 0; j < hdim; ++j) {
      KVec w(amb, 0);
      for (int i = 0; i < rk; ++i)
        for (int h = 0; h < ng; ++h) {
          uint16_t v = R.get(j, i * ng + h);
          if (v) w[i * ng + G->mul(g, h)] = v;
        }
      w = KMatrix::coords_mod_subspace(w, B, bpiv);
      for (int r = 0; r < hdim; ++r) {
        uint16_t c = w[rpiv[r]];
        if (!c) continue;
        A.set(r, j, c);
        for (int col = 0; col < amb; ++col) {
          uint16_t s = R.get(r, col);
          if (s) w[col] = F->sub(w[col], F->mul(c, s));
        }
      }
      for (uint16_t v : w)
        if (v) throw InternalError("NotGStable", "homology class escapes the cycle space");
    }
    act.push_back(std::move(A));
  }
  HomologyData out;
  out.dim = hdim;
  out.cycle_reps = std::move(R);
  out.action = RepModule(F, G, std::move(act));
  return out;
}

// --- extensions -----------------------------------------------------------------

Extension extension_total(const ComplexPtr& A, const ComplexPtr& C, const GradedMap& alpha) {
  if (alpha.deg != -1) throw InputError("NotAChainMap", "extension glue must have degree -1");
  if (!alpha.defect().is_zero())
    throw InputError("NotAChainMap", "extension glue does not anticommute with the differentials");
  const FieldPtr& F = A->field();
  const GroupPtr& G = A->group();
  int lo = std::min(A->min_deg(), C->min_deg());
  int hi = std::max(A->max_deg(), C->max_deg());
  std::vector<int> ranks;
  for (int d = lo; d <= hi; ++d) ranks.push_back(A->rank(d) + C->rank(d));
  std::vector<FreeMap> diffs;
  for (int d = lo + 1; d <= hi; ++d) {
    FreeMap m(F, G, ranks[d - 1 - lo], ranks[d - lo]);
    int ra1 = A->rank(d - 1);
    if (A->rank(d) > 0 && d > A->min_deg() && d <= A->max_deg()) m.set_block(0, 0, A->diff(d));
    if (C->rank(d) > 0) {
      if (const FreeMap* al = alpha.at(d))
        if (ra1 > 0) m.set_block(0, A->rank(d), *al);
      if (d > C->min_deg() && d <= C->max_deg()) m.set_block(ra1, A->rank(d), C->diff(d));
    }
    diffs.push_back(std::move(m));
  }
  Extension E;
  E.total = std::make_shared<ChainComplex>(F, G, lo, std::move(ranks), std::move(diffs), true);
  E.A = A;
  E.Cpart = C;
  E.alpha = alpha;
  E.incl_A = GradedMap(A, E.total, 0);
  for (int d = A->min_deg(); d <= A->max_deg(); ++d) {
    int ra = A->rank(d);
    if (ra == 0) continue;
    FreeMap inc(F, G, E.total->rank(d), ra);
    inc.set_block(0, 0, FreeMap::identity(F, G, ra));
    E.incl_A.comp[d] = std::move(inc);
  }
  E.proj_C = GradedMap(E.total, C, 0);
  for (int d = C->min_deg(); d <= C->max_deg(); ++d) {
    int rc = C->rank(d);
    if (rc == 0) continue;
    FreeMap pr(F, G, rc, E.total->rank(d));
    pr.set_block(0, A->rank(d), FreeMap::identity(F, G, rc));
    E.proj_C.comp[d] = std::move(pr);
  }
  return E;
}

GradedMap extension_class(const Extension& E) {
  GradedMap al(E.Cpart, E.A, -1);
  for (int d = E.Cpart->min_deg(); d <= E.Cpart->max_deg(); ++d) {
    int rc = E.Cpart->rank(d);
    int ra1 = E.A->rank(d - 1);
    if (rc == 0 || ra1 == 0) continue;
    if (d <= E.total->min_deg() || d > E.total->max_deg()) continue;
    FreeMap blk = E.total->diff(d).block(0, E.A->rank(d), ra1, rc);
    if (!blk.is_zero()) al.comp[d] = std::move(blk);
  }
  return al;
}

std::optional<GradedMap> lifting_obstruction(const Extension& E, const GradedMap& f, int lo, int hi) {
  // Want H: X -> A with -dH + Hd = alpha f, i.e. dH - (-1)^u H d = -alpha f
  // at u = deg f (so the block map (H, f) into the total complex is a chain map).
  GradedMap R = E.alpha.after(f).scaled(f.src->field()->neg(1));
  auto H = solve_homotopy_window(f.src, E.A, f.deg, R, lo, hi);
  return H;
}

RotatedExtension extension_rotate(const Extension& E) {
  const ComplexPtr& A = E.A;
  const ComplexPtr& C = E.Cpart;
  const GradedMap& alpha = E.alpha;
  const FieldPtr& F = A->field();
  const GroupPtr& G = A->group();
  // The bottom slot C_min sits at total degree min - 1; keeping it makes the
  // retraction homotopy identity exact down to the bottom of the window.
  int lo = std::min(A->min_deg(), C->min_deg()) - 1;
  int hi = std::max(A->max_deg(), C->max_deg()) - 1;
  auto rank_of = [&](int d) { return C->rank(d + 1) + A->rank(d) + C->rank(d); };
  std::vector<int> ranks;
  for (int d = lo; d <= hi; ++d) ranks.push_back(rank_of(d));
  std::vector<FreeMap> diffs;
  uint16_t m1 = F->neg(1);
  for (int d = lo + 1; d <= hi; ++d) {
    FreeMap m(F, G, rank_of(d - 1), rank_of(d));
    int tc1 = C->rank(d), ta = A->rank(d - 1);
    int sc1 = C->rank(d + 1), sa = A->rank(d);
    // first source block C_{d+1}: -d_C into the C_d slot
    if (sc1 > 0 && d + 1 > C->min_deg() && d + 1 <= C->max_deg() && tc1 > 0)
      m.set_block(0, 0, C->diff(d + 1).scaled(m1));
    // second source block A_d: d_A into A_{d-1}
    if (sa > 0 && d > A->min_deg() && d <= A->max_deg() && ta > 0)
      m.set_block(tc1, sc1, A->diff(d));
    // third source block C_d: identity into C_d, alpha into A_{d-1}, d_C into C_{d-1}
    if (C->rank(d) > 0) {
      m.set_block(0, sc1 + sa, FreeMap::identity(F, G, C->rank(d)));
      if (const FreeMap* al = alpha.at(d))
        if (ta > 0) m.set_block(tc1, sc1 + sa, *al);
      if (d > C->min_deg() && d <= C->max_deg() && C->rank(d - 1) > 0)
        m.set_block(tc1 + ta, sc1 + sa, C->diff(d));
    }
    diffs.push_back(std::move(m));
  }
  RotatedExtension R;
  R.total = std::make_shared<ChainComplex>(F, G, lo, std::move(ranks), std::move(diffs), true);
  R.j = GradedMap(A, R.total, 0);
  R.q = GradedMap(R.total, A, 0);
  R.H = GradedMap(R.total, R.total, 1);
  for (int d = lo; d <= hi; ++d) {
    int sc1 = C->rank(d + 1), sa = A->rank(d);
    if (sa > 0) {
      FreeMap j(F, G, rank_of(d), sa);
      j.set_block(sc1, 0, FreeMap::identity(F, G, sa));
      R.j.comp[d] = std::move(j);
      FreeMap q(F, G, sa, rank_of(d));
      q.set_block(0, sc1, FreeMap::identity(F, G, sa));
      if (const FreeMap* al = alpha.at(d + 1))
        q.set_block(0, 0, al->scaled(m1));
      R.q.comp[d] = std::move(q);
    }
    if (d + 1 <= hi && sc1 > 0) {
      FreeMap h(F, G, rank_of(d + 1), rank_of(d));
      h.set_block(C->rank(d + 2) + A->rank(d + 1), 0, FreeMap::identity(F, G, sc1));
      R.H.comp[d] = std::move(h);
    }
  }
  return R;
}

namespace {

// C-part of a map out of an extension total complex, as a map C -> D.
GradedMap c_part(const Extension& E, const GradedMap& phi) {
  const ComplexPtr& C = E.Cpart;
  const ComplexPtr& D = phi.dst;
  GradedMap phi2(C, D, phi.deg);
  for (const auto& kv : phi.comp) {
    int d = kv.first;
    int rc = C->rank(d);
    if (rc == 0 || !D->in_window(d + phi.deg)) continue;
    FreeMap blk = kv.second.block(0, E.A->rank(d), D->rank(d + phi.deg), rc);
    if (!blk.is_zero()) phi2.comp[d] = std::move(blk);
  }
  return phi2;
}

}  // namespace

FactorDecision factor_decision(const Extension& E, const GradedMap& phi, int lo, int hi) {
  if (!phi.after(E.incl_A).is_zero())
    throw InputError("PreconditionViolated", "map does not vanish on the glued-in block");
  const ComplexPtr& A = E.A;
  const ComplexPtr& C = E.Cpart;
  const ComplexPtr& D = phi.dst;
  const FieldPtr& F = phi.src->field();
  const GroupPtr& G = phi.src->group();
  const int ng = G->order();
  const int t = phi.deg;

  GradedMap phi2 = c_part(E, phi);

  // Unknowns: chain map u: A -> D and homotopy K: C -> D, both of degree t+1,
  // over source degrees [lo, hi] (zero outside). Per source degree d:
  //   d u_d - (-1)^{t+1} u_{d-1} d_A                   = 0
  //   d K_d - (-1)^{t+1} K_{d-1} d_C + u_{d-1} alpha_d = phi2_d
  struct Blk {
    int off = 0, gens = 0, kdim = 0;
  };
  std::map<int, Blk> ucol, kcol;
  int ncols = 0;
  for (int d = lo; d <= hi; ++d) {
    int kd = D->in_window(d + t + 1) ? D->kdim(d + t + 1) : 0;
    ucol[d] = {ncols, A->rank(d), kd};
    ncols += A->rank(d) * kd;
  }
  for (int d = lo; d <= hi; ++d) {
    int kd = D->in_window(d + t + 1) ? D->kdim(d + t + 1) : 0;
    kcol[d] = {ncols, C->rank(d), kd};
    ncols += C->rank(d) * kd;
  }

  std::map<int, int> urow, krow;
  int nrows = 0;
  for (int d = lo; d <= hi; ++d) {
    urow[d] = nrows;
    if (D->in_window(d + t)) nrows += A->rank(d) * D->kdim(d + t);
  }
  for (int d = lo; d <= hi; ++d) {
    krow[d] = nrows;
    if (D->in_window(d + t)) nrows += C->rank(d) * D->kdim(d + t);
  }

  KMatrix Amat(F, nrows, ncols);
  KVec rhs(nrows, 0);
  const uint16_t msign = F->neg(koszul(*F, t + 1, 1));  // -(-1)^{t+1}

  auto add_dH = [&](int row0, int col0, int gens, int outdim, const KMatrix& Dk) {
    for (int j = 0; j < gens; ++j)
      for (int rr = 0; rr < outdim; ++rr)
        for (int tt = 0; tt < Dk.cols(); ++tt) {
          uint16_t v = Dk.get(rr, tt);
          if (v) Amat.add_at(row0 + j * outdim + rr, col0 + j * Dk.cols() + tt, v);
        }
  };
  auto add_Hd = [&](int row0, int col0, int outdim, int kin, const FreeMap& dS, uint16_t sg) {
    int rprev = kin / ng;
    for (int j = 0; j < dS.src_rank(); ++j)
      for (int a = 0; a < dS.dst_rank(); ++a)
        for (int g = 0; g < ng; ++g) {
          uint16_t c = dS.coeff(a, j, g);
          if (!c) continue;
          uint16_t val = F->mul(sg, c);
          for (int i = 0; i < rprev; ++i)
            for (int h = 0; h < ng; ++h)
              Amat.add_at(row0 + j * outdim + (i * ng + G->mul(g, h)),
                          col0 + a * kin + (i * ng + h), val);
        }
  };

  for (int d = lo; d <= hi; ++d) {
    if (!D->in_window(d + t)) continue;
    const int outdim = D->kdim(d + t);
    const bool dD = d + t + 1 > D->min_deg() && d + t + 1 <= D->max_deg();
    if (A->rank(d) > 0) {
      if (dD && ucol[d].kdim > 0)
        add_dH(urow[d], ucol[d].off, A->rank(d), outdim, D->diff_k(d + t + 1));
      if (d - 1 >= lo && d > A->min_deg() && d <= A->max_deg() && ucol[d - 1].kdim > 0)
        add_Hd(urow[d], ucol[d - 1].off, outdim, ucol[d - 1].kdim, A->diff(d), msign);
    }
    if (C->rank(d) > 0) {
      if (dD && kcol[d].kdim > 0)
        add_dH(krow[d], kcol[d].off, C->rank(d), outdim, D->diff_k(d + t + 1));
      if (d - 1 >= lo && d > C->min_deg() && d <= C->max_deg() && kcol[d - 1].kdim > 0)
        add_Hd(krow[d], kcol[d - 1].off, outdim, kcol[d - 1].kdim, C->diff(d), msign);
      if (d - 1 >= lo && ucol[d - 1].kdim > 0)
        if (const FreeMap* al = E.alpha.at(d))
          add_Hd(krow[d], ucol[d - 1].off, outdim, ucol[d - 1].kdim, *al, 1);
      if (const FreeMap* p2 = phi2.at(d)) {
        KMatrix pk = p2->to_k();
        for (int j = 0; j < C->rank(d); ++j)
          for (int tt = 0; tt < outdim; ++tt) {
            uint16_t v = pk.get(tt, j * ng + G->identity());
            if (v) rhs[krow[d] + j * outdim + tt] = v;
          }
      }
    }
  }

  FactorDecision out;
  auto sol = Amat.solve(rhs);
  if (!sol) {
    out.factors = false;
    return out;
  }
  out.factors = true;
  out.u = GradedMap(A, D, t + 1);
  out.K = GradedMap(C, D, t + 1);
  auto unpack = [&](const Blk& blk) -> FreeMap {
    FreeMap comp(F, G, blk.kdim / ng, blk.gens);
    for (int j = 0; j < blk.gens; ++j)
      for (int tt = 0; tt < blk.kdim; ++tt) {
        uint16_t v = (*sol)[blk.off + j * blk.kdim + tt];
        if (v) comp.add_coeff(tt / ng, j, tt % ng, v);
      }
    return comp;
  };
  for (int d = lo; d <= hi; ++d) {
    if (ucol[d].kdim > 0 && ucol[d].gens > 0) {
      FreeMap c = unpack(ucol[d]);
      if (!c.is_zero()) out.u.comp[d] = std::move(c);
    }
    if (kcol[d].kdim > 0 && kcol[d].gens > 0) {
      FreeMap c = unpack(kcol[d]);
      if (!c.is_zero()) out.K.comp[d] = std::move(c);
    }
  }
  if (!out.u.defect().restrict_window(lo, hi).is_zero() ||
      !(phi2 - out.u.after(E.alpha) - out.K.defect()).restrict_window(lo, hi).is_zero())
    throw InternalError("SolverBug", "division witness failed verification");
  return out;
}

GradedMap kill_off_part(const Extension& E, const GradedMap& phi, const GradedMap& H) {
  const FieldPtr& F = phi.src->field();
  if (H.src != E.A || H.dst != phi.dst || H.deg != phi.deg + 1)
    throw InputError("PreconditionViolated", "off-part homotopy has the wrong shape");
  if (!(phi.after(E.incl_A) - H.defect()).is_zero())
    throw InputError("PreconditionViolated", "homotopy does not trivialize the off part");
  GradedMap out = c_part(E, phi) + H.after(E.alpha).scaled(koszul(*F, H.deg, 1));
  return out;
}

}  // namespace coho
