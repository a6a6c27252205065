#pragma once

#include "coho/complex.hpp"

namespace coho {

// One summand of the homotopy model of a complex: eta embeds k^t at the given
// degree, eps projects back, with eps * eta = id, d * eta = 0, eps * d = 0.
struct ModelPoint {
  int degree = 0;
  KMatrix eta;  // kdim(degree) x t
  KMatrix eps;  // t x kdim(degree)
};

// A complex together with a k-linear contraction s of degree +1 satisfying
//   d s + s d = id - sum_m eta_m eps_m     (exactly, in every degree <= s_max)
// This is the data that makes transferred lifting constructions cheap.
class View {
 public:
  virtual ~View() = default;
  virtual const ComplexPtr& complex() const = 0;
  virtual int s_max() const = 0;
  virtual KVec s(int d, const KVec& x) const = 0;
  virtual const std::vector<ModelPoint>& models() const = 0;

  // Matrix of s at degree d; the default applies s to basis vectors.
  virtual KMatrix s_matrix(int d) const;

  // Exact check of the contraction identity at degree d (tests).
  bool check_identity(int d) const;
};

using ViewPtr = std::shared_ptr<const View>;

class DenseView : public View {
 public:
  // smat[t] is s at degree min_deg + t, for t in [0, len-2].
  DenseView(ComplexPtr C, std::vector<KMatrix> smat, std::vector<ModelPoint> models);
  const ComplexPtr& complex() const override { return C_; }
  int s_max() const override { return C_->max_deg() - 1; }
  KVec s(int d, const KVec& x) const override;
  const std::vector<ModelPoint>& models() const override { return models_; }
  KMatrix s_matrix(int d) const override;

 private:
  ComplexPtr C_;
  std::vector<KMatrix> smat_;
  std::vector<ModelPoint> models_;
};

// View of shift(base, n): s picks up the sign (-1)^n, models move up by n.
class ShiftView : public View {
 public:
  ShiftView(ViewPtr base, ComplexPtr shifted, int n);
  const ComplexPtr& complex() const override { return C_; }
  int s_max() const override { return base_->s_max() + n_; }
  KVec s(int d, const KVec& x) const override;
  const std::vector<ModelPoint>& models() const override { return models_; }
  KMatrix s_matrix(int d) const override;

 private:
  ViewPtr base_;
  ComplexPtr C_;
  int n_;
  std::vector<ModelPoint> models_;
};

// View of a tensor product: s = s_l (x) 1 + pi_l (x) s_r with the Koszul sign
// (-1)^{left degree} on the second term; models multiply out.
class TensorView : public View {
 public:
  TensorView(ViewPtr left, ViewPtr right, TensorComplex TC);
  const ComplexPtr& complex() const override { return TC_.C; }
  int s_max() const override { return TC_.C->max_deg() - 1; }
  KVec s(int d, const KVec& x) const override;
  const std::vector<ModelPoint>& models() const override { return models_; }

 private:
  ViewPtr left_, right_;
  TensorComplex TC_;
  std::vector<ModelPoint> models_;
  std::map<int, KMatrix> left_pi_;       // projector onto left models, by degree
  std::map<int, KMatrix> left_smat_;     // factor contraction matrices,
  std::map<int, KMatrix> right_smat_t_;  // the right ones stored transposed
};

// View of a two-term extension total complex (A block first, glue alpha of
// degree -1): the contraction and the model projections pick up correction
// terms through alpha. Requires alpha * eta_C = 0 for every C-model point,
// which is checked at construction.
class HplView : public View {
 public:
  HplView(ViewPtr Aview, ViewPtr Cview, const Extension& E);
  const ComplexPtr& complex() const override { return C_; }
  int s_max() const override { return smax_; }
  KVec s(int d, const KVec& x) const override;
  const std::vector<ModelPoint>& models() const override { return models_; }
  KMatrix s_matrix(int d) const override;

 private:
  KVec alpha_apply(int d, const KVec& xc) const;
  ViewPtr A_, Cv_;
  ComplexPtr C_;
  GradedMap alpha_;
  std::map<int, KMatrix> alpha_k_;  // glue component matrices by source degree
  int smax_ = 0;
  std::vector<ModelPoint> models_;
};

// Ascending-degree solver for d U - (-1)^u U d = F over a free source
// complex, writing values through the target view's contraction. F must be a
// chain map of degree u - 1 (or null for zero); seed supplies prescribed
// components of U below lo, which are held fixed. Components are produced for
// source degrees lo..hi. Base corrections at model degrees keep the recursion
// exact; the result is defect-verified and nullopt is returned when the
// correction system is inconsistent or verification fails.
std::optional<GradedMap> solve_transgression(const ComplexPtr& src, const View& dview, int u,
                                             const GradedMap* F, const GradedMap* seed,
                                             int lo, int hi);

// Extend seed to a chain map of degree r through source degree hi.
std::optional<GradedMap> lift_through_view(const ComplexPtr& src, const View& dview, int r,
                                           const GradedMap& seed, int lo, int hi);

// Two-tier homotopy search: contraction-based fast path when a target view is
// supplied (witnesses are defect-verified), then the global window solver.
// Absence is certified by the global system only.
std::optional<GradedMap> find_homotopy(const GradedMap& f, const GradedMap& g, int lo, int hi,
                                       const View* dst_view = nullptr);

}  // namespace coho
