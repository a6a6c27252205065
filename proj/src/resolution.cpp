#include "coho/resolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace coho {

namespace {

// Bookkeeping for words in non-identity letters: degree-n generators are
// words of length n, indexed big-endian in a fixed letter order.
struct WordCodec {
  int ng, nw, e;
  std::vector<int> elt_of, digit_of;

  explicit WordCodec(const Group& G) : ng(G.order()), nw(G.order() - 1), e(G.identity()) {
    digit_of.assign(ng, -1);
    for (int g = 0; g < ng; ++g)
      if (g != e) {
        digit_of[g] = int(elt_of.size());
        elt_of.push_back(g);
      }
  }
  long long count(int n) const {
    long long r = 1;
    while (n-- > 0) r *= nw;
    return r;
  }
  void decode(long long w, int n, std::vector<int>& letters) const {
    letters.resize(size_t(n));
    for (int i = n - 1; i >= 0; --i) {
      letters[size_t(i)] = elt_of[size_t(w % nw)];
      w /= nw;
    }
  }
  long long encode(const int* letters, int n) const {
    long long w = 0;
    for (int i = 0; i < n; ++i) w = w * nw + digit_of[size_t(letters[i])];
    return w;
  }
};

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
  // Returns true when v enlarges the span (and keeps the reduced row).
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

std::vector<int> pivots_of(const KMatrix& M) {
  std::vector<int> piv;
  for (int r = 0; r < M.rows(); ++r)
    for (int c = 0; c < M.cols(); ++c)
      if (M.get(r, c) != 0) {
        piv.push_back(c);
        break;
      }
  return piv;
}

ModelPoint augmentation_model(const FieldPtr& F, const GroupPtr& G) {
  ModelPoint mp;
  mp.degree = 0;
  mp.eta = KMatrix(F, G->order(), 1);
  mp.eta.set(G->identity(), 0, 1);
  mp.eps = KMatrix(F, 1, G->order());
  for (int g = 0; g < G->order(); ++g) mp.eps.set(0, g, 1);
  return mp;
}

}  // namespace

Resolution bar_resolution(const FieldPtr& F, const GroupPtr& G, int D) {
  const int ng = G->order();
  const WordCodec cw(*G);
  if (D < 0) throw InputError("PreconditionViolated", "negative top degree");
  // The top contraction matrix dominates memory: kdim(D) x kdim(D-1) cells.
  if (D > 0) {
    double top = std::pow(double(std::max(cw.nw, 1)), 2 * D - 1) * double(ng) * double(ng);
    if (top > double(1LL << 31))
      throw InputError("BudgetExceeded", "bar resolution of " + G->name() + " through degree " +
                                             std::to_string(D) + " exceeds the memory budget");
  }

  std::vector<int> ranks(size_t(D) + 1);
  for (int n = 0; n <= D; ++n) ranks[size_t(n)] = int(cw.count(n));

  std::vector<FreeMap> diffs;
  std::vector<int> letters, sub;
  for (int n = 1; n <= D; ++n) {
    FreeMap d(F, G, ranks[size_t(n - 1)], ranks[size_t(n)]);
    for (long long w = 0; w < ranks[size_t(n)]; ++w) {
      cw.decode(w, n, letters);
      // front face: the leading letter acts on the rest of the word
      d.add_coeff(int(cw.encode(letters.data() + 1, n - 1)), int(w), letters[0], 1);
      uint16_t sgn = 1;
      for (int i = 1; i < n; ++i) {
        sgn = F->neg(sgn);
        int prod = G->mul(letters[size_t(i - 1)], letters[size_t(i)]);
        if (prod == cw.e) continue;  // words with an identity letter are zero
        sub.assign(letters.begin(), letters.end());
        sub[size_t(i - 1)] = prod;
        sub.erase(sub.begin() + i);
        d.add_coeff(int(cw.encode(sub.data(), n - 1)), int(w), cw.e, sgn);
      }
      d.add_coeff(int(cw.encode(letters.data(), n - 1)), int(w), cw.e, F->neg(sgn));
    }
    diffs.push_back(std::move(d));
  }
  ComplexPtr C = std::make_shared<ChainComplex>(F, G, 0, ranks, std::move(diffs));

  // Contraction: prepend the acting element to the word; identity drops out.
  std::vector<KMatrix> smat;
  for (int n = 0; n < D; ++n) {
    KMatrix s(F, ranks[size_t(n + 1)] * ng, ranks[size_t(n)] * ng);
    for (long long w = 0; w < ranks[size_t(n)]; ++w)
      for (int g0 = 0; g0 < ng; ++g0) {
        if (g0 == cw.e) continue;
        long long up = cw.digit_of[size_t(g0)] * cw.count(n) + w;
        s.set(int(up * ng + cw.e), int(w * ng + g0), 1);
      }
    smat.push_back(std::move(s));
  }
  ViewPtr view = std::make_shared<DenseView>(
      C, std::move(smat), std::vector<ModelPoint>{augmentation_model(F, G)});
  return {C, view, "bar"};
}

Resolution minimal_resolution(const FieldPtr& F, const GroupPtr& G, int D) {
  ModelPoint aug = augmentation_model(F, G);
  return minimal_cover_resolution(F, G, D, 1, aug.eps, aug.eta, "minimal");
}

Resolution minimal_cover_resolution(const FieldPtr& F, const GroupPtr& G, int D, int r0,
                                    const KMatrix& cover, const KMatrix& section,
                                    const std::string& kind) {
  if (!G->is_p_group(F->p()))
    throw InputError("UnsupportedGroup", "minimal resolution needs a p-group for p = " +
                                             std::to_string(F->p()) + ", got " + G->name());
  if (D < 0) throw InputError("PreconditionViolated", "negative top degree");
  const int ng = G->order(), e = G->identity();
  const int t = cover.rows();
  if (cover.cols() != r0 * ng || section.rows() != r0 * ng || section.cols() != t)
    throw InputError("PreconditionViolated", "cover/section shapes do not match the rank");
  for (int i = 0; i < t; ++i) {
    KVec u = cover.mul_vec(section.col(i));
    for (int j = 0; j < t; ++j)
      if (u[size_t(j)] != (i == j ? 1 : 0))
        throw InputError("PreconditionViolated", "section does not split the cover");
  }

  auto act_row = [&](const KVec& x, int h, int rank) {
    KVec y(x.size(), 0);
    for (int i = 0; i < rank; ++i)
      for (int g = 0; g < ng; ++g) y[size_t(i * ng + G->mul(h, g))] = x[size_t(i * ng + g)];
    return y;
  };

  std::vector<int> ranks{r0};
  std::vector<FreeMap> diffs;
  std::vector<KMatrix> kerb;  // kernel rref basis per degree
  std::vector<std::vector<int>> kerp;

  kerb.push_back(cover.kernel_basis());
  kerp.push_back(pivots_of(kerb.back()));

  for (int n = 0; n < D; ++n) {
    const KMatrix& K = kerb[size_t(n)];
    // span the radical part of the kernel, then keep kernel rows that add
    // new directions: those are a minimal generating set
    Echelon span{F.get(), {}, {}};
    for (int r = 0; r < K.rows(); ++r) {
      KVec kap = K.row(r);
      for (int h = 0; h < ng; ++h) {
        if (h == e) continue;
        KVec y = act_row(kap, h, ranks[size_t(n)]);
        for (size_t t = 0; t < y.size(); ++t) y[t] = F->sub(y[t], kap[t]);
        span.insert(std::move(y));
      }
    }
    std::vector<KVec> chosen;
    for (int r = 0; r < K.rows(); ++r)
      if (span.insert(K.row(r))) chosen.push_back(K.row(r));

    FreeMap d(F, G, ranks[size_t(n)], int(chosen.size()));
    for (size_t j = 0; j < chosen.size(); ++j) d.set_gen_column(int(j), chosen[j]);
    if (!d.aug().is_zero())
      throw InternalError("SolverBug", "minimal step left the radical");
    ranks.push_back(int(chosen.size()));
    kerb.push_back(d.to_k().kernel_basis());
    kerp.push_back(pivots_of(kerb.back()));
    diffs.push_back(std::move(d));
  }
  ComplexPtr C = std::make_shared<ChainComplex>(F, G, 0, ranks, std::move(diffs));

  // Contraction: split off the kernel part (against the canonical complement,
  // or the augmentation section at the bottom) and pull it back through the
  // next differential, landing in the canonical complement of its kernel.
  std::vector<KMatrix> smat;
  for (int n = 0; n < D; ++n) {
    const KMatrix& Mk = C->diff_k(n + 1);
    KMatrix s(F, C->kdim(n + 1), C->kdim(n));
    for (int t = 0; t < C->kdim(n); ++t) {
      KVec kap(size_t(C->kdim(n)), 0);
      kap[size_t(t)] = 1;
      if (n == 0) {
        KVec back = section.mul_vec(cover.mul_vec(kap));
        for (size_t i = 0; i < kap.size(); ++i) kap[i] = F->sub(kap[i], back[i]);
      } else {
        KVec red = KMatrix::coords_mod_subspace(kap, kerb[size_t(n)], kerp[size_t(n)]);
        for (size_t i = 0; i < kap.size(); ++i) kap[i] = F->sub(kap[i], red[i]);
      }
      bool zero = true;
      for (uint16_t v : kap)
        if (v) {
          zero = false;
          break;
        }
      if (zero) continue;
      auto y0 = Mk.solve(kap);
      if (!y0) throw InternalError("SolverBug", "contraction solve failed");
      KVec col = KMatrix::coords_mod_subspace(*y0, kerb[size_t(n + 1)], kerp[size_t(n + 1)]);
      for (size_t r = 0; r < col.size(); ++r)
        if (col[r]) s.set(int(r), t, col[r]);
    }
    smat.push_back(std::move(s));
  }
  ViewPtr view = std::make_shared<DenseView>(
      C, std::move(smat), std::vector<ModelPoint>{ModelPoint{0, section, cover}});
  return {C, view, kind};
}

GradedMap lift_map(const ComplexPtr& source, const KVec& src_eps_gens, uint16_t base,
                   const Resolution& target, int start, int hi) {
  const ComplexPtr& T = target.complex;
  if (!source->in_window(start) || int(src_eps_gens.size()) != source->rank(start))
    throw InputError("PreconditionViolated", "augmentation row does not match the start degree");
  if (hi > source->max_deg() || hi - start > target.top())
    throw InputError("TruncationUnderflow", "lift range exceeds the stored windows");
  const FieldPtr& F = T->field();
  const GroupPtr& G = T->group();

  // the row must be a cocycle for the first lifting step to be solvable
  if (start < source->max_deg()) {
    KMatrix aug = source->diff(start + 1).aug();
    for (int j = 0; j < aug.cols(); ++j) {
      uint16_t acc = 0;
      for (int i = 0; i < aug.rows(); ++i)
        acc = F->add(acc, F->mul(src_eps_gens[size_t(i)], aug.get(i, j)));
      if (acc) throw InputError("PreconditionViolated", "augmentation row is not a cocycle");
    }
  }

  KVec etac = target.aug_model().eta.col(0);
  FreeMap f0(F, G, T->rank(0), source->rank(start));
  for (int j = 0; j < source->rank(start); ++j) {
    uint16_t c = F->mul(base, src_eps_gens[size_t(j)]);
    if (!c) continue;
    KVec col(etac.size(), 0);
    for (size_t t = 0; t < etac.size(); ++t) col[t] = F->mul(etac[t], c);
    f0.set_gen_column(j, col);
  }
  GradedMap seed(source, T, -start);
  seed.set(start, f0);
  if (hi <= start) return seed;
  auto out = lift_through_view(source, *target.view, -start, seed, start + 1, hi);
  if (!out) throw InternalError("SolverBug", "resolution lift failed despite a valid seed");
  return *out;
}

Diagonal diagonal(const Resolution& P) {
  const ComplexPtr& C = P.complex;
  const FieldPtr& F = C->field();
  const GroupPtr& G = C->group();
  const int D = C->max_deg(), e = G->identity(), ng = G->order();
  TensorComplex sq = tensor(C, C, D);
  ViewPtr sv = std::make_shared<TensorView>(P.view, P.view, sq);

  if (P.kind == "bar") {
    // word splitting: every way of cutting the word, the front translating
    // the back by its product
    const WordCodec cw(*G);
    GradedMap delta(C, sq.C, 0);
    std::vector<int> letters;
    for (int n = 0; n <= D; ++n) {
      FreeMap dn(F, G, sq.C->rank(n), C->rank(n));
      for (long long w = 0; w < C->rank(n); ++w) {
        cw.decode(w, n, letters);
        int h = e;
        for (int i = 0; i <= n; ++i) {
          const TensorBlock* blk = nullptr;
          for (const TensorBlock& b : sq.blocks(n))
            if (b.i == i) {
              blk = &b;
              break;
            }
          int front = int(cw.encode(letters.data(), i));
          int back = int(cw.encode(letters.data() + i, n - i));
          dn.add_coeff(sq.gen_index(*blk, front, back, h), int(w), e, 1);
          if (i < n) h = G->mul(h, letters[size_t(i)]);
        }
      }
      delta.set(n, dn);
    }
    return {std::move(sq), std::move(sv), std::move(delta)};
  }

  // lift of the square of the augmentation section through the contraction
  KVec etac = P.aug_model().eta.col(0);
  const TensorBlock& b00 = sq.blocks(0).front();
  FreeMap d0(F, G, sq.C->rank(0), C->rank(0));
  KVec col(size_t(sq.C->kdim(0)), 0);
  for (int g = 0; g < ng; ++g)
    for (int gp = 0; gp < ng; ++gp) {
      uint16_t v = F->mul(etac[size_t(g)], etac[size_t(gp)]);
      if (v) {
        int at = sq.k_index(b00, 0, g, 0, gp);
        col[size_t(at)] = F->add(col[size_t(at)], v);
      }
    }
  d0.set_gen_column(0, col);
  GradedMap seed(C, sq.C, 0);
  seed.set(0, d0);
  auto out = lift_through_view(C, *sv, 0, seed, 1, D);
  if (!out) throw InternalError("SolverBug", "diagonal lift failed");
  return {std::move(sq), std::move(sv), std::move(*out)};
}

GradedMap counit_left(const TensorComplex& sq, const Resolution& P) {
  const ComplexPtr& C = P.complex;
  const FieldPtr& F = C->field();
  const GroupPtr& G = C->group();
  const int ng = G->order(), e = G->identity();
  const ModelPoint& mp = P.aug_model();
  GradedMap out(sq.C, C, 0);
  for (int n = sq.C->min_deg(); n <= sq.C->max_deg(); ++n) {
    FreeMap f(F, G, C->rank(n), sq.C->rank(n));
    for (const TensorBlock& b : sq.blocks(n)) {
      if (b.i != 0) continue;
      for (int a = 0; a < b.ri; ++a) {
        uint16_t v = mp.eps.get(0, a * ng + e);
        if (!v) continue;
        for (int bb = 0; bb < b.rj; ++bb)
          for (int h = 0; h < ng; ++h) f.add_coeff(bb, sq.gen_index(b, a, bb, h), h, v);
      }
    }
    out.set(n, f);
  }
  return out;
}

GradedMap counit_right(const TensorComplex& sq, const Resolution& P) {
  const ComplexPtr& C = P.complex;
  const FieldPtr& F = C->field();
  const GroupPtr& G = C->group();
  const int ng = G->order(), e = G->identity();
  const ModelPoint& mp = P.aug_model();
  GradedMap out(sq.C, C, 0);
  for (int n = sq.C->min_deg(); n <= sq.C->max_deg(); ++n) {
    FreeMap f(F, G, C->rank(n), sq.C->rank(n));
    for (const TensorBlock& b : sq.blocks(n)) {
      if (b.j != 0) continue;
      for (int bb = 0; bb < b.rj; ++bb)
        for (int h = 0; h < ng; ++h) {
          uint16_t v = mp.eps.get(0, bb * ng + h);
          if (!v) continue;
          for (int a = 0; a < b.ri; ++a) f.add_coeff(a, sq.gen_index(b, a, bb, h), e, v);
        }
    }
    out.set(n, f);
  }
  return out;
}

}  // namespace coho
