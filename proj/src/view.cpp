#include "coho/view.hpp"

#include <algorithm>

#include "coho/common.hpp"

namespace coho {

namespace {

bool all_zero(const KVec& v) {
  for (uint16_t x : v)
    if (x) return false;
  return true;
}

const TensorBlock* find_block(const TensorComplex& TC, int n, int i) {
  for (const TensorBlock& b : TC.blocks(n))
    if (b.i == i) return &b;
  return nullptr;
}

}  // namespace

// --- View base ---------------------------------------------------------------

KMatrix View::s_matrix(int d) const {
  const ComplexPtr& C = complex();
  const int n = C->kdim(d);
  const int m = C->kdim(d + 1);
  KMatrix S(C->field(), m, n);
  KVec e(n, 0);
  for (int j = 0; j < n; ++j) {
    if (j > 0) e[j - 1] = 0;
    e[j] = 1;
    KVec y = s(d, e);
    for (int i = 0; i < m; ++i)
      if (y[i]) S.set(i, j, y[i]);
  }
  return S;
}

bool View::check_identity(int d) const {
  const ComplexPtr& C = complex();
  if (d < C->min_deg() || d > s_max()) return false;
  const int n = C->kdim(d);
  KMatrix lhs(C->field(), n, n);
  if (d + 1 <= C->max_deg()) lhs = lhs + C->diff_k(d + 1).mul(s_matrix(d));
  if (d > C->min_deg()) lhs = lhs + s_matrix(d - 1).mul(C->diff_k(d));
  for (const ModelPoint& m : models())
    if (m.degree == d) lhs = lhs + m.eta.mul(m.eps);
  return lhs == KMatrix::identity(C->field(), n);
}

// --- DenseView ---------------------------------------------------------------

DenseView::DenseView(ComplexPtr C, std::vector<KMatrix> smat, std::vector<ModelPoint> models)
    : C_(std::move(C)), smat_(std::move(smat)), models_(std::move(models)) {
  const int len = C_->max_deg() - C_->min_deg() + 1;
  if (static_cast<int>(smat_.size()) != len - 1)
    throw InternalError("BadContraction", "stored contraction has the wrong number of degrees");
  for (int t = 0; t + 1 < len; ++t) {
    const int d = C_->min_deg() + t;
    if (smat_[t].rows() != C_->kdim(d + 1) || smat_[t].cols() != C_->kdim(d))
      throw InternalError("BadContraction", "contraction matrix shape mismatch");
  }
  for (const ModelPoint& m : models_) {
    if (!C_->in_window(m.degree)) throw InternalError("BadModel", "model degree outside window");
    const int kd = C_->kdim(m.degree);
    if (m.eta.rows() != kd || m.eps.cols() != kd || m.eta.cols() != m.eps.rows())
      throw InternalError("BadModel", "model matrix shape mismatch");
    if (!(m.eps.mul(m.eta) == KMatrix::identity(C_->field(), m.eta.cols())))
      throw InternalError("BadModel", "projection of the embedded summand is not the identity");
    if (m.degree > C_->min_deg() && !C_->diff_k(m.degree).mul(m.eta).is_zero())
      throw InternalError("BadModel", "embedded summand is not a space of cycles");
    if (m.degree + 1 <= C_->max_deg() && !m.eps.mul(C_->diff_k(m.degree + 1)).is_zero())
      throw InternalError("BadModel", "model projection does not kill boundaries");
  }
}

KVec DenseView::s(int d, const KVec& x) const {
  if (d < C_->min_deg() || d > s_max())
    throw InternalError("ContractionRange", "contraction applied outside its degree range");
  if (static_cast<int>(x.size()) != C_->kdim(d))
    throw InternalError("ContractionRange", "contraction input has the wrong dimension");
  return smat_[d - C_->min_deg()].mul_vec(x);
}

KMatrix DenseView::s_matrix(int d) const {
  if (d < C_->min_deg() || d > s_max())
    throw InternalError("ContractionRange", "contraction matrix requested outside range");
  return smat_[d - C_->min_deg()];
}

// --- ShiftView ---------------------------------------------------------------

ShiftView::ShiftView(ViewPtr base, ComplexPtr shifted, int n)
    : base_(std::move(base)), C_(std::move(shifted)), n_(n) {
  const ComplexPtr& B = base_->complex();
  if (C_->min_deg() != B->min_deg() + n_ || C_->max_deg() != B->max_deg() + n_)
    throw InternalError("BadShift", "shifted complex window does not match the base");
  for (int d = B->min_deg(); d <= B->max_deg(); ++d)
    if (C_->rank(d + n_) != B->rank(d))
      throw InternalError("BadShift", "shifted complex ranks do not match the base");
  for (const ModelPoint& m : base_->models()) {
    ModelPoint p;
    p.degree = m.degree + n_;
    p.eta = m.eta;
    p.eps = m.eps;
    models_.push_back(std::move(p));
  }
}

KVec ShiftView::s(int d, const KVec& x) const {
  KVec y = base_->s(d - n_, x);
  if (n_ % 2 != 0) {
    const Field& F = *C_->field();
    for (uint16_t& v : y) v = F.neg(v);
  }
  return y;
}

KMatrix ShiftView::s_matrix(int d) const {
  KMatrix S = base_->s_matrix(d - n_);
  if (n_ % 2 != 0) S = S.scaled(C_->field()->neg(1));
  return S;
}

// --- TensorView --------------------------------------------------------------

TensorView::TensorView(ViewPtr left, ViewPtr right, TensorComplex TC)
    : left_(std::move(left)), right_(std::move(right)), TC_(std::move(TC)) {
  if (left_->complex() != TC_.left || right_->complex() != TC_.right)
    throw InternalError("BadTensorView", "factor views do not match the tensor layout");
  const FieldPtr& F = TC_.C->field();
  const int ng = TC_.C->group()->order();

  const ComplexPtr& L = left_->complex();
  const ComplexPtr& R = right_->complex();
  for (int d = L->min_deg(); d <= std::min(L->max_deg() - 1, left_->s_max()); ++d)
    left_smat_.emplace(d, left_->s_matrix(d));
  for (int d = R->min_deg(); d <= std::min(R->max_deg() - 1, right_->s_max()); ++d)
    right_smat_t_.emplace(d, right_->s_matrix(d).transpose());

  for (const ModelPoint& m : left_->models()) {
    auto it = left_pi_.find(m.degree);
    if (it == left_pi_.end())
      left_pi_.emplace(m.degree, m.eta.mul(m.eps));
    else
      it->second = it->second + m.eta.mul(m.eps);
  }

  for (const ModelPoint& ml : left_->models())
    for (const ModelPoint& mr : right_->models()) {
      const int nn = ml.degree + mr.degree;
      if (!TC_.C->in_window(nn)) continue;
      const TensorBlock* b = find_block(TC_, nn, ml.degree);
      if (!b) continue;
      const int t1 = ml.eta.cols(), t2 = mr.eta.cols();
      ModelPoint p;
      p.degree = nn;
      p.eta = KMatrix(F, TC_.C->kdim(nn), t1 * t2);
      p.eps = KMatrix(F, t1 * t2, TC_.C->kdim(nn));
      for (int c1 = 0; c1 < t1; ++c1)
        for (int c2 = 0; c2 < t2; ++c2) {
          const int cc = c1 * t2 + c2;
          for (int a = 0; a < b->ri; ++a)
            for (int g = 0; g < ng; ++g) {
              const uint16_t le = ml.eta.get(a * ng + g, c1);
              const uint16_t lp = ml.eps.get(c1, a * ng + g);
              if (!le && !lp) continue;
              for (int bb = 0; bb < b->rj; ++bb)
                for (int gp = 0; gp < ng; ++gp) {
                  const int row = TC_.k_index(*b, a, g, bb, gp);
                  if (le) {
                    const uint16_t re = mr.eta.get(bb * ng + gp, c2);
                    if (re) p.eta.set(row, cc, F->mul(le, re));
                  }
                  if (lp) {
                    const uint16_t rp = mr.eps.get(c2, bb * ng + gp);
                    if (rp) p.eps.set(cc, row, F->mul(lp, rp));
                  }
                }
            }
        }
      models_.push_back(std::move(p));
    }
}

KVec TensorView::s(int n, const KVec& x) const {
  const ComplexPtr& C = TC_.C;
  if (n < C->min_deg() || n > s_max())
    throw InternalError("ContractionRange", "contraction applied outside its degree range");
  if (static_cast<int>(x.size()) != C->kdim(n))
    throw InternalError("ContractionRange", "contraction input has the wrong dimension");
  const FieldPtr& F = C->field();
  const ComplexPtr& L = left_->complex();
  const ComplexPtr& R = right_->complex();
  KVec out(C->kdim(n + 1), 0);
  for (const TensorBlock& b : TC_.blocks(n)) {
    KMatrix X = TC_.block_matrix(n, b, x);
    if (X.is_zero()) continue;
    // (s_l (x) 1): lands in block (i+1, j) of degree n+1.
    if (L->kdim(b.i + 1) > 0) {
      auto it = left_smat_.find(b.i);
      if (it == left_smat_.end())
        throw InternalError("ContractionRange", "left factor contraction unavailable");
      const TensorBlock* tb = find_block(TC_, n + 1, b.i + 1);
      if (!tb) throw InternalError("ContractionRange", "missing tensor block above");
      TC_.add_block_matrix(n + 1, *tb, it->second.mul(X), out);
    }
    // (pi_l (x) s_r), Koszul sign (-1)^{left degree}: lands in block (i, j+1).
    auto pit = left_pi_.find(b.i);
    if (pit != left_pi_.end() && R->kdim(b.j + 1) > 0) {
      auto it = right_smat_t_.find(b.j);
      if (it == right_smat_t_.end())
        throw InternalError("ContractionRange", "right factor contraction unavailable");
      KMatrix Y = pit->second.mul(X).mul(it->second);
      if (b.i % 2 != 0) Y = Y.scaled(F->neg(1));
      if (!Y.is_zero()) {
        const TensorBlock* tb = find_block(TC_, n + 1, b.i);
        if (!tb) throw InternalError("ContractionRange", "missing tensor block above");
        TC_.add_block_matrix(n + 1, *tb, Y, out);
      }
    }
  }
  return out;
}

// --- HplView -----------------------------------------------------------------

HplView::HplView(ViewPtr Aview, ViewPtr Cview, const Extension& E)
    : A_(std::move(Aview)), Cv_(std::move(Cview)), C_(E.total), alpha_(E.alpha) {
  if (A_->complex() != E.A || Cv_->complex() != E.Cpart)
    throw InternalError("BadHplView", "factor views do not match the extension parts");
  const ComplexPtr& Ac = A_->complex();
  const ComplexPtr& Cc = Cv_->complex();
  const FieldPtr& F = C_->field();
  for (int d = C_->min_deg(); d <= C_->max_deg(); ++d)
    if (C_->kdim(d) != Ac->kdim(d) + Cc->kdim(d))
      throw InternalError("BadHplView", "total complex does not split as the two parts");

  for (int d = Cc->min_deg(); d <= Cc->max_deg(); ++d)
    if (const FreeMap* al = alpha_.at(d)) alpha_k_.emplace(d, al->to_k());

  smax_ = C_->min_deg() - 1;
  for (int d = C_->min_deg(); d <= C_->max_deg() - 1; ++d) {
    const bool okA = Ac->kdim(d) == 0 || (d >= Ac->min_deg() && d <= A_->s_max());
    const bool okC = Cc->kdim(d) == 0 || (d >= Cc->min_deg() && d <= Cv_->s_max());
    if (!(okA && okC)) break;
    smax_ = d;
  }

  // C-part models embed untouched; validity needs the glue to kill them.
  for (const ModelPoint& m : Cv_->models()) {
    auto it = alpha_k_.find(m.degree);
    if (it != alpha_k_.end() && !it->second.mul(m.eta).is_zero())
      throw InternalError("BadHplView", "glue does not vanish on an embedded summand");
    ModelPoint p;
    p.degree = m.degree;
    p.eta = KMatrix(F, C_->kdim(m.degree), m.eta.cols());
    p.eta.set_block(Ac->kdim(m.degree), 0, m.eta);
    p.eps = KMatrix(F, m.eps.rows(), C_->kdim(m.degree));
    p.eps.set_block(0, Ac->kdim(m.degree), m.eps);
    models_.push_back(std::move(p));
  }
  // A-part models: the projection picks up the correction -eps_A alpha s_C.
  for (const ModelPoint& m : A_->models()) {
    const int dm = m.degree;
    ModelPoint p;
    p.degree = dm;
    p.eta = KMatrix(F, C_->kdim(dm), m.eta.cols());
    p.eta.set_block(0, 0, m.eta);
    p.eps = KMatrix(F, m.eps.rows(), C_->kdim(dm));
    p.eps.set_block(0, 0, m.eps);
    if (Cc->kdim(dm) > 0) {
      auto it = alpha_k_.find(dm + 1);
      if (it != alpha_k_.end() && !it->second.is_zero()) {
        if (dm < Cc->min_deg() || dm > Cv_->s_max())
          throw InternalError("BadHplView", "no contraction available for a model correction");
        KMatrix corr = m.eps.mul(it->second).mul(Cv_->s_matrix(dm)).scaled(F->neg(1));
        p.eps.set_block(0, Ac->kdim(dm), corr);
      }
    }
    models_.push_back(std::move(p));
  }
}

KVec HplView::alpha_apply(int d, const KVec& xc) const {
  auto it = alpha_k_.find(d);
  if (it == alpha_k_.end()) return KVec(A_->complex()->kdim(d - 1), 0);
  return it->second.mul_vec(xc);
}

KVec HplView::s(int d, const KVec& x) const {
  if (d < C_->min_deg() || d > smax_)
    throw InternalError("ContractionRange", "contraction applied outside its degree range");
  if (static_cast<int>(x.size()) != C_->kdim(d))
    throw InternalError("ContractionRange", "contraction input has the wrong dimension");
  const ComplexPtr& Ac = A_->complex();
  const ComplexPtr& Cc = Cv_->complex();
  const Field& F = *C_->field();
  const int ka = Ac->kdim(d), kc = Cc->kdim(d);
  const int ka1 = Ac->kdim(d + 1), kc1 = Cc->kdim(d + 1);
  KVec xa(x.begin(), x.begin() + ka);
  KVec xc(x.begin() + ka, x.end());
  KVec yc = kc > 0 ? Cv_->s(d, xc) : KVec(kc1, 0);
  KVec ya(ka1, 0);
  if (ka > 0) {
    KVec in = xa;
    if (kc1 > 0) {
      KVec av = alpha_apply(d + 1, yc);
      for (int i = 0; i < ka; ++i) in[i] = F.sub(in[i], av[i]);
    }
    if (!all_zero(in)) ya = A_->s(d, in);
  }
  KVec out(C_->kdim(d + 1), 0);
  std::copy(ya.begin(), ya.end(), out.begin());
  std::copy(yc.begin(), yc.end(), out.begin() + ka1);
  return out;
}

KMatrix HplView::s_matrix(int d) const {
  if (d < C_->min_deg() || d > smax_)
    throw InternalError("ContractionRange", "contraction matrix requested outside range");
  const ComplexPtr& Ac = A_->complex();
  const ComplexPtr& Cc = Cv_->complex();
  const FieldPtr& F = C_->field();
  const int ka = Ac->kdim(d), kc = Cc->kdim(d);
  const int ka1 = Ac->kdim(d + 1);
  KMatrix S(F, C_->kdim(d + 1), C_->kdim(d));
  KMatrix SC;
  if (kc > 0) {
    SC = Cv_->s_matrix(d);
    S.set_block(ka1, ka, SC);
  }
  if (ka > 0 && ka1 > 0) {
    KMatrix SA = A_->s_matrix(d);
    S.set_block(0, 0, SA);
    auto it = alpha_k_.find(d + 1);
    if (kc > 0 && it != alpha_k_.end() && !it->second.is_zero())
      S.set_block(0, ka, SA.mul(it->second).mul(SC).scaled(F->neg(1)));
  }
  return S;
}

// --- transgression solver ----------------------------------------------------

namespace {

// All model points of the view at one degree, stacked, together with the
// induced matrices rho(g) = eps P_g eta of the G-action on the modeled space.
struct ModelStack {
  KMatrix eta, eps;
  std::vector<KMatrix> rho;
};

std::optional<ModelStack> stack_models(const View& v, int t) {
  const ComplexPtr& D = v.complex();
  std::optional<ModelStack> out;
  for (const ModelPoint& m : v.models()) {
    if (m.degree != t) continue;
    if (!out) {
      out.emplace();
      out->eta = m.eta;
      out->eps = m.eps;
    } else {
      out->eta = out->eta.hstack(m.eta);
      out->eps = out->eps.vstack(m.eps);
    }
  }
  if (!out) return out;
  const GroupPtr& G = D->group();
  const int ng = G->order();
  const int kd = D->kdim(t);
  const int rk = D->rank(t);
  const int T = out->eta.cols();
  out->rho.reserve(ng);
  for (int g = 0; g < ng; ++g) {
    KMatrix pge(D->field(), kd, T);
    for (int i = 0; i < rk; ++i)
      for (int h = 0; h < ng; ++h) {
        const int to = i * ng + G->mul(g, h);
        for (int c = 0; c < T; ++c) {
          const uint16_t val = out->eta.get(i * ng + h, c);
          if (val) pge.set(to, c, val);
        }
      }
    out->rho.push_back(out->eps.mul(pge));
  }
  return out;
}

}  // namespace

std::optional<GradedMap> solve_transgression(const ComplexPtr& src, const View& dview, int u,
                                             const GradedMap* F, const GradedMap* seed,
                                             int lo, int hi) {
  const ComplexPtr& D = dview.complex();
  const FieldPtr& Fk = src->field();
  const GroupPtr& G = src->group();
  const int ng = G->order();
  if (F && (F->src != src || F->dst != D || F->deg != u - 1))
    throw InternalError("DegreeMismatch", "inhomogeneous term has the wrong shape");
  if (seed && (seed->src != src || seed->dst != D || seed->deg != u))
    throw InternalError("DegreeMismatch", "seed has the wrong shape");

  GradedMap U(src, D, u);
  if (seed)
    for (const auto& kv : seed->comp) {
      if (kv.first >= lo)
        throw InternalError("DegreeMismatch", "seed components must lie below the window");
      U.comp[kv.first] = kv.second;
    }
  const uint16_t kap = koszul(*Fk, u, 1);

  std::map<int, std::optional<ModelStack>> stacks;
  auto get_stack = [&](int t) -> const std::optional<ModelStack>& {
    auto it = stacks.find(t);
    if (it == stacks.end()) it = stacks.emplace(t, stack_models(dview, t)).first;
    return it->second;
  };

  for (int d = lo; d <= hi; ++d) {
    const int rgen = src->rank(d);
    if (rgen == 0) continue;
    const int tdeg = d + u;
    const int bdeg = tdeg - 1;

    auto compute_brackets = [&]() -> std::vector<KVec> {
      std::vector<KVec> w(rgen);
      const int kb = D->in_window(bdeg) ? D->kdim(bdeg) : 0;
      bool any = false;
      FreeMap B;
      if (kb > 0) {
        if (d > src->min_deg())
          if (const FreeMap* up = U.at(d - 1)) {
            B = up->after(src->diff(d)).scaled(kap);
            any = true;
          }
        if (F)
          if (const FreeMap* fc = F->at(d)) {
            B = any ? B + *fc : *fc;
            any = true;
          }
      }
      for (int j = 0; j < rgen; ++j) w[j] = any ? B.gen_column(j) : KVec(kb, 0);
      return w;
    };

    std::vector<KVec> w = compute_brackets();

    if (!D->in_window(tdeg)) {
      // No room for a component here; the level's equation must hold with zero.
      for (const KVec& col : w)
        if (!all_zero(col)) return std::nullopt;
      continue;
    }

    if (D->in_window(bdeg)) {
      const std::optional<ModelStack>& st = get_stack(bdeg);
      if (st) {
        const int T = st->eta.cols();
        std::vector<KVec> obs(rgen);
        bool any_obs = false;
        for (int j = 0; j < rgen; ++j) {
          obs[j] = st->eps.mul_vec(w[j]);
          if (!all_zero(obs[j])) any_obs = true;
        }
        if (any_obs) {
          if (d - 1 < lo) return std::nullopt;  // the level below is frozen
          const int rp = src->rank(d - 1);
          if (rp == 0) return std::nullopt;
          KMatrix sys(Fk, rgen * T, rp * T);
          const FreeMap& dd = src->diff(d);
          for (int a = 0; a < rp; ++a)
            for (int j = 0; j < rgen; ++j) {
              KMatrix M(Fk, T, T);
              bool nz = false;
              for (int g = 0; g < ng; ++g) {
                const uint16_t cg = dd.coeff(a, j, g);
                if (!cg) continue;
                M = M + st->rho[g].scaled(cg);
                nz = true;
              }
              if (nz) sys.set_block(j * T, a * T, M.scaled(kap));
            }
          KVec rhs(static_cast<size_t>(rgen) * T, 0);
          for (int j = 0; j < rgen; ++j)
            for (int r = 0; r < T; ++r) rhs[j * T + r] = Fk->neg(obs[j][r]);
          std::optional<KVec> sol = sys.solve(rhs);
          if (!sol) return std::nullopt;
          FreeMap up = U.at(d - 1) ? *U.at(d - 1) : FreeMap(Fk, G, D->rank(bdeg), rp);
          for (int a = 0; a < rp; ++a) {
            KVec ca(sol->begin() + static_cast<size_t>(a) * T,
                    sol->begin() + static_cast<size_t>(a + 1) * T);
            if (all_zero(ca)) continue;
            up.add_gen_column(a, st->eta.mul_vec(ca));
          }
          U.comp[d - 1] = std::move(up);
          w = compute_brackets();
        }
      }
    }

    if (bdeg < D->min_deg()) continue;  // vacuous level; leave the component zero
    if (bdeg > dview.s_max()) return std::nullopt;
    FreeMap Ud(Fk, G, D->rank(tdeg), rgen);
    for (int j = 0; j < rgen; ++j) Ud.set_gen_column(j, dview.s(bdeg, w[j]));
    if (!Ud.is_zero()) U.comp[d] = std::move(Ud);
  }

  GradedMap dfct = U.defect();
  if (F) dfct = dfct - *F;
  if (!dfct.restrict_window(lo, hi).is_zero()) return std::nullopt;
  return U;
}

std::optional<GradedMap> lift_through_view(const ComplexPtr& src, const View& dview, int r,
                                           const GradedMap& seed, int lo, int hi) {
  return solve_transgression(src, dview, r, nullptr, &seed, lo, hi);
}

std::optional<GradedMap> find_homotopy(const GradedMap& f, const GradedMap& g, int lo, int hi,
                                       const View* dst_view) {
  if (dst_view) {
    if (dst_view->complex() != f.dst)
      throw InternalError("DegreeMismatch", "homotopy view does not present the target complex");
    GradedMap R = f - g;
    std::optional<GradedMap> H = solve_transgression(f.src, *dst_view, f.deg + 1, &R, nullptr, lo, hi);
    if (H) return H;  // defect-verified by the solver
  }
  return find_homotopy_global(f, g, lo, hi);
}

}  // namespace coho
