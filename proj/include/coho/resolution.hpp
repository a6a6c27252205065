#pragma once

#include "coho/view.hpp"

namespace coho {

// Free resolution of the trivial module k over kG through a chosen top
// degree, packaged with the contraction view that witnesses acyclicity.
// The view carries exactly one model point, at degree 0: its eps row is the
// augmentation functional of P_0 and eta is a section with eps * eta = 1.
struct Resolution {
  ComplexPtr complex;
  ViewPtr view;
  std::string kind;  // "minimal" or "bar"

  const ModelPoint& aug_model() const { return view->models().front(); }
  int top() const { return complex->max_deg(); }
};

// Normalized bar resolution through degree D: rank (|G|-1)^n in degree n,
// the simplicial differential (words with an identity letter are zero), and
// the word-prepending contraction. Throws BudgetExceeded when the top degree
// would not fit in memory.
Resolution bar_resolution(const FieldPtr& F, const GroupPtr& G, int D);

// Minimal free resolution for a p-group in characteristic p: each next rank
// is dim of (kernel / radical * kernel), so differentials land in the
// radical. The contraction inverts each differential on the canonical
// complement of its kernel, which makes construction deterministic.
// Throws UnsupportedGroup when |G| is not a power of the characteristic.
Resolution minimal_resolution(const FieldPtr& F, const GroupPtr& G, int D);

// The same construction seeded at an arbitrary projective cover instead of
// the augmentation: `cover` is the k-matrix of a surjection kG^{r0} -> V
// whose kernel lies in the radical, and `section` a k-linear right inverse
// (cover * section = id, checked). The view's single model point carries
// (eta, eps) = (section, cover), so the degree-0 contraction identity reads
// d s + s d = id - section * cover. minimal_resolution is the V = k case.
Resolution minimal_cover_resolution(const FieldPtr& F, const GroupPtr& G, int D, int r0,
                                    const KMatrix& cover, const KMatrix& section,
                                    const std::string& kind);

// Chain map source -> target.complex covering a scalar map k -> k through
// the augmentations. src_eps_gens lists the source augmentation-level value
// on each degree-`start` generator, so the degree-`start` component sends
// e_j to eta * (base * src_eps_gens[j]); components for source degrees up to
// `hi` are then produced through the target's contraction. The produced map
// has degree -start, and eps_target * f_start = base * src_eps_gens exactly.
// Requires src_eps_gens * aug(d_{start+1}) = 0 (PreconditionViolated) and
// enough stored target degrees (TruncationUnderflow).
GradedMap lift_map(const ComplexPtr& source, const KVec& src_eps_gens, uint16_t base,
                   const Resolution& target, int start, int hi);

// Diagonal approximation: the square P (x) P through the full storable
// window, its contraction view, and a chain map covering 1 -> 1 (x) 1.
// Bar resolutions get the word-splitting formula, which satisfies
// (id (x) eps) Delta = id and (eps (x) id) Delta = id exactly; minimal
// resolutions get a lift through the square's contraction, where the
// counit identities hold up to homotopy.
struct Diagonal {
  TensorComplex square;
  ViewPtr square_view;
  GradedMap map;  // degree 0: P.complex -> square.C
};
Diagonal diagonal(const Resolution& P);

// Counit evaluations P (x) P -> P: apply the augmentation to one factor and
// carry the other back to the standard basis. Both are degree-0 chain maps.
GradedMap counit_left(const TensorComplex& sq, const Resolution& P);   // eps (x) id
GradedMap counit_right(const TensorComplex& sq, const Resolution& P);  // id (x) eps

}  // namespace coho
